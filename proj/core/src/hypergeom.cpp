#include "spinwehrl/hypergeom.hpp"

#include <cmath>
#include <string>

#include <boost/math/special_functions/digamma.hpp>

#include "spinwehrl/errors.hpp"

namespace spinwehrl {

namespace {

constexpr int kMaxTerms = 100'000;
constexpr double kTermTol = 1e-17;
constexpr double kSeriesLimit = 0.9;

// Power series in x. Parameters may be negative here (the connection
// formulas produce 1 - s), but c + n never hits zero for the callers.
double power_series(double a, double b, double c, double x) {
  double term = 1.0;
  double sum = 1.0;
  for (int n = 0; n < kMaxTerms; ++n) {
    term *= (a + n) * (b + n) / ((c + n) * (n + 1.0)) * x;
    sum += term;
    if (term == 0.0 || std::abs(term) < kTermTol * std::abs(sum)) return sum;
  }
  throw PrecisionFailure("2F1 power series did not converge (z = " + std::to_string(x) + ")");
}

// log|Gamma(x)| and sign(Gamma(x)); x must not be a non-positive integer.
double log_abs_gamma(double x, int& sign) {
  sign = 1;
  if (x < 0.0 && static_cast<long>(std::ceil(-x)) % 2 == 1) sign = -1;
  return std::lgamma(x);
}

bool is_nonpositive_integer(double x) { return x <= 0.0 && x == std::floor(x); }

// Gamma(n1) Gamma(n2) / (Gamma(d1) Gamma(d2)); zero when a denominator
// argument is a pole.
double gamma_ratio(double n1, double n2, double d1, double d2) {
  if (is_nonpositive_integer(d1) || is_nonpositive_integer(d2)) return 0.0;
  int s1, s2, s3, s4;
  const double lg = log_abs_gamma(n1, s1) + log_abs_gamma(n2, s2) - log_abs_gamma(d1, s3) - log_abs_gamma(d2, s4);
  return s1 * s2 * s3 * s4 * std::exp(lg);
}

// c = a + b + m with integer m >= 0, w = 1 - z small. Logarithmic connection
// formula around z = 1.
double integer_gap(double a, double b, int m, double w) {
  const double c = a + b + m;
  double finite = 0.0;
  if (m > 0) {
    double term = 1.0;
    double sum = 1.0;
    for (int k = 0; k + 1 < m; ++k) {
      term *= (a + k) * (b + k) / ((k + 1.0) * (1.0 - m + k)) * w;
      sum += term;
    }
    finite = gamma_ratio(static_cast<double>(m), c, a + m, b + m) * sum;
  }

  const double log_w = std::log(w);
  using boost::math::digamma;
  // term_k = (a+m)_k (b+m)_k / (k! (k+m)!) w^k, starting at 1/m!
  double term = std::exp(-std::lgamma(m + 1.0));
  double sum = 0.0;
  int k = 0;
  for (; k < kMaxTerms; ++k) {
    const double bracket =
        log_w - digamma(k + 1.0) - digamma(k + m + 1.0) + digamma(a + k + m) + digamma(b + k + m);
    const double contrib = term * bracket;
    sum += contrib;
    if (k > 0 && std::abs(contrib) < kTermTol * std::abs(sum)) break;
    term *= (a + m + k) * (b + m + k) / ((k + 1.0) * (k + m + 1.0)) * w;
  }
  if (k == kMaxTerms) throw PrecisionFailure("2F1 logarithmic series did not converge");

  const double sign = (m % 2 == 0) ? 1.0 : -1.0;  // (z - 1)^m = (-w)^m
  const double prefactor = sign * std::pow(w, m) * gamma_ratio(c, 1.0, a, b);
  return finite - prefactor * sum;
}

// Non-integer c - a - b; standard two-term connection formula.
double generic_gap(double a, double b, double c, double w) {
  const double s = c - a - b;
  const double first = gamma_ratio(c, s, c - a, c - b) * power_series(a, b, 1.0 - s, w);
  const double second =
      std::pow(w, s) * gamma_ratio(c, -s, a, b) * power_series(c - a, c - b, 1.0 + s, w);
  return first + second;
}

}  // namespace

double gauss_2f1(double a, double b, double c, double z) {
  if (!std::isfinite(a) || !std::isfinite(b) || !std::isfinite(c) || !std::isfinite(z) || !(a > 0.0) ||
      !(b > 0.0) || !(c > 0.0) || !(z >= 0.0) || !(z < 1.0)) {
    throw UnsupportedParameters("2F1 supports a, b, c > 0 and z in [0, 1); got a=" + std::to_string(a) +
                                " b=" + std::to_string(b) + " c=" + std::to_string(c) + " z=" + std::to_string(z));
  }
  if (z == 0.0) return 1.0;
  if (z <= kSeriesLimit) return power_series(a, b, c, z);

  const double w = 1.0 - z;
  const double s = c - a - b;
  const double s_round = std::round(s);
  if (s == s_round) {
    if (s >= 0.0) return integer_gap(a, b, static_cast<int>(s_round), w);
    // Euler: 2F1(a,b;c;z) = w^s 2F1(c-a, c-b; c; z), whose gap is -s > 0.
    if (!(c - a > 0.0) || !(c - b > 0.0)) return power_series(a, b, c, z);
    return std::pow(w, s) * integer_gap(c - a, c - b, static_cast<int>(-s_round), w);
  }
  if (std::abs(s - s_round) > 0.05) return generic_gap(a, b, c, w);
  // Nearly integer gap: the two connection terms cancel badly, so sum the
  // original series, which still converges for z well below 1.
  return power_series(a, b, c, z);
}

double gauss_2f1(const HypergeomParams& p) { return gauss_2f1(p.a, p.b, p.c, p.z); }

}  // namespace spinwehrl
