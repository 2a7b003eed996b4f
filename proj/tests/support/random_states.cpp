#include "random_states.hpp"

#include <cmath>
#include <numbers>

namespace gen {

using spinwehrl::cplx;
using spinwehrl::DensityMatrix;
using spinwehrl::Matrix;
using spinwehrl::SpinQuantumNumber;

double uniform(Rng& rng, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }

int integer(Rng& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

spinwehrl::BlochVector bloch(Rng& rng, double max_tau, double min_tau) {
  const double u = uniform(rng, -1.0, 1.0);
  const double phi = uniform(rng, 0.0, 2.0 * std::numbers::pi);
  const double r = uniform(rng, min_tau, max_tau);
  const double s = std::sqrt(1.0 - u * u);
  return {r * s * std::cos(phi), r * s * std::sin(phi), r * u};
}

namespace {

Matrix ginibre(Rng& rng, int rows, int cols) {
  std::normal_distribution<double> nd;
  Matrix g(rows, cols);
  for (int i = 0; i < rows; ++i) {
    for (int k = 0; k < cols; ++k) g(i, k) = cplx(nd(rng), nd(rng));
  }
  return g;
}

}  // namespace

DensityMatrix density(Rng& rng, SpinQuantumNumber j) {
  const int d = j.dim();
  const Matrix g = ginibre(rng, d, integer(rng, 1, d));
  return DensityMatrix::normalized(j, g * g.adjoint());
}

DensityMatrix mixed_density(Rng& rng, SpinQuantumNumber j, double floor) {
  const int d = j.dim();
  const Matrix g = ginibre(rng, d, d);
  Matrix r = g * g.adjoint();
  r /= r.trace().real();
  r = (1.0 - d * floor) * r + floor * Matrix::Identity(d, d);
  return DensityMatrix::normalized(j, r);
}

Eigen::VectorXd populations(Rng& rng, SpinQuantumNumber j) {
  std::exponential_distribution<double> ex;
  Eigen::VectorXd p(j.dim());
  for (int i = 0; i < j.dim(); ++i) p(i) = ex(rng);
  return p / p.sum();
}

}  // namespace gen
