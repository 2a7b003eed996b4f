#pragma once

namespace spinwehrl {

struct HypergeomParams {
  double a = 1.0;
  double b = 1.0;
  double c = 2.0;
  double z = 0.0;
};

/// Gauss hypergeometric function 2F1(a, b; c; z) for real a, b, c > 0 and
/// z in [0, 1).
///
/// Summed as a power series in z for z <= 0.9. Above that the function is
/// rewritten around z = 1 through the connection formulas in (1 - z),
/// including the logarithmic case when c - a - b is an integer, so that the
/// boundary region converges in a handful of terms.
///
/// Throws UnsupportedParameters outside the regime and PrecisionFailure when
/// a series fails to converge within 1e5 terms.
double gauss_2f1(double a, double b, double c, double z);
double gauss_2f1(const HypergeomParams& p);

}  // namespace spinwehrl
