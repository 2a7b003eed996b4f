#include "spinwehrl/spin_ops.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "spinwehrl/errors.hpp"

namespace spinwehrl {

SpinQuantumNumber::SpinQuantumNumber(int two_j) : two_j_(two_j) {
  if (two_j < 1) {
    throw InvalidSpin("two_j must be >= 1, got " + std::to_string(two_j));
  }
}

SpinOperators make_spin_operators(SpinQuantumNumber j) {
  const int d = j.dim();
  const double jj = j.j() * (j.j() + 1.0);
  SpinOperators ops;
  ops.jz = Matrix::Zero(d, d);
  ops.jp = Matrix::Zero(d, d);
  for (int k = 0; k < d; ++k) {
    const double m = j.m(k);
    ops.jz(k, k) = m;
    // J+|m> lands on row k-1 (m+1).
    if (k > 0) ops.jp(k - 1, k) = std::sqrt(jj - m * (m + 1.0));
  }
  ops.jm = ops.jp.adjoint();
  ops.jx = 0.5 * (ops.jp + ops.jm);
  ops.jy = cplx(0.0, -0.5) * (ops.jp - ops.jm);
  return ops;
}

namespace {

void validate(const Matrix& rho, const StateTolerances& tol) {
  if (!rho.allFinite()) throw NonPhysicalState("density matrix has non-finite entries");
  const double herm = (rho - rho.adjoint()).cwiseAbs().maxCoeff();
  if (herm > tol.hermiticity) {
    throw NonPhysicalState("density matrix is not Hermitian (deviation " + std::to_string(herm) + ")");
  }
  const double tr_dev = std::abs(rho.trace() - cplx(1.0));
  if (tr_dev > tol.trace) {
    throw NonPhysicalState("density matrix trace deviates from 1 by " + std::to_string(tr_dev));
  }
  Eigen::SelfAdjointEigenSolver<Matrix> es(rho, Eigen::EigenvaluesOnly);
  const double lmin = es.eigenvalues().minCoeff();
  if (lmin < tol.min_eigenvalue) {
    throw NonPhysicalState("density matrix has negative eigenvalue " + std::to_string(lmin));
  }
}

}  // namespace

DensityMatrix::DensityMatrix(SpinQuantumNumber j, Matrix entries, const StateTolerances& tol)
    : j_(j), rho_(std::move(entries)) {
  if (rho_.rows() != j.dim() || rho_.cols() != j.dim()) {
    throw DimensionMismatch("density matrix must be " + std::to_string(j.dim()) + "x" +
                            std::to_string(j.dim()));
  }
  validate(rho_, tol);
}

DensityMatrix DensityMatrix::normalized(SpinQuantumNumber j, const Matrix& entries,
                                        const StateTolerances& tol) {
  Matrix h = 0.5 * (entries + entries.adjoint());
  const double tr = h.trace().real();
  if (!(tr > 0.0)) throw NonPhysicalState("cannot normalize a matrix with non-positive trace");
  h /= tr;
  return DensityMatrix(j, std::move(h), tol);
}

DensityMatrix DensityMatrix::maximally_mixed(SpinQuantumNumber j) {
  return DensityMatrix(j, Matrix::Identity(j.dim(), j.dim()) / static_cast<double>(j.dim()));
}

DensityMatrix DensityMatrix::from_populations(SpinQuantumNumber j, const Eigen::VectorXd& p) {
  if (p.size() != j.dim()) throw DimensionMismatch("population vector has wrong length");
  if ((p.array() < 0.0).any()) throw NonPhysicalState("populations must be non-negative");
  return DensityMatrix(j, p.cast<cplx>().asDiagonal());
}

DensityMatrix DensityMatrix::pure(SpinQuantumNumber j, const Eigen::VectorXcd& psi) {
  if (psi.size() != j.dim()) throw DimensionMismatch("state vector has wrong length");
  const double n = psi.norm();
  if (!(n > 0.0)) throw NonPhysicalState("zero state vector");
  const Eigen::VectorXcd u = psi / n;
  return DensityMatrix::normalized(j, u * u.adjoint());
}

Eigen::VectorXd DensityMatrix::eigenvalues() const {
  Eigen::SelfAdjointEigenSolver<Matrix> es(rho_, Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

double DensityMatrix::purity() const { return (rho_ * rho_).trace().real(); }

double BlochVector::norm() const { return std::sqrt(x * x + y * y + z * z); }

DensityMatrix bloch_to_rho(const BlochVector& b) {
  if (!(b.norm() <= 1.0 + 1e-12)) {
    throw NonPhysicalState("Bloch vector length " + std::to_string(b.norm()) + " exceeds 1");
  }
  Matrix rho(2, 2);
  rho(0, 0) = 0.5 * (1.0 + b.z);
  rho(1, 1) = 0.5 * (1.0 - b.z);
  rho(0, 1) = 0.5 * cplx(b.x, -b.y);
  rho(1, 0) = 0.5 * cplx(b.x, b.y);
  return DensityMatrix(spin_half(), std::move(rho));
}

BlochVector rho_to_bloch(const DensityMatrix& rho) {
  if (rho.spin().two_j() != 1) throw WrongDimension("Bloch vector requires a spin-1/2 state");
  const Matrix& r = rho.matrix();
  // tr(rho sx) = 2 Re r01, tr(rho sy) = -2 Im r01.
  return BlochVector{2.0 * r(0, 1).real(), -2.0 * r(0, 1).imag(), (r(0, 0) - r(1, 1)).real()};
}

DensityMatrix gibbs_state(SpinQuantumNumber j, double omega, double temperature) {
  if (!(temperature >= 0.0)) throw InvalidTemperature("temperature must be >= 0");
  const int d = j.dim();
  Eigen::VectorXd w(d);
  if (temperature == 0.0 || std::isinf(omega / temperature)) {
    w.setZero();
    if (omega > 0.0) {
      w(d - 1) = 1.0;
    } else if (omega < 0.0) {
      w(0) = 1.0;
    } else {
      w.setConstant(1.0);
    }
  } else {
    const double beta_omega = omega / temperature;
    // Shift energies so the largest Boltzmann factor is exactly 1.
    const double e_min = beta_omega > 0.0 ? -j.j() * beta_omega : j.j() * beta_omega;
    for (int k = 0; k < d; ++k) w(k) = std::exp(-(beta_omega * j.m(k) - e_min));
  }
  w /= w.sum();
  return DensityMatrix(j, w.cast<cplx>().asDiagonal());
}

double nbar_from_temperature(double omega, double temperature) {
  if (!(omega > 0.0)) throw InvalidFrequency("omega must be > 0");
  if (!(temperature >= 0.0)) throw InvalidTemperature("temperature must be >= 0");
  if (temperature == 0.0) return 0.0;
  return 1.0 / std::expm1(omega / temperature);
}

double temperature_from_nbar(double omega, double nbar) {
  if (!(omega > 0.0)) throw InvalidFrequency("omega must be > 0");
  if (!(nbar >= 0.0)) throw InvalidRate("nbar must be >= 0");
  if (nbar == 0.0) return 0.0;
  return omega / std::log1p(1.0 / nbar);
}

cplx expectation(const Matrix& rho, const Matrix& op) {
  if (rho.rows() != op.rows() || rho.cols() != op.cols()) {
    throw DimensionMismatch("operator dimension does not match the state");
  }
  // tr(rho op) = sum_ij rho_ij op_ji
  return (rho.array() * op.transpose().array()).sum();
}

cplx expectation(const DensityMatrix& rho, const Matrix& op) { return expectation(rho.matrix(), op); }

double von_neumann_entropy(const DensityMatrix& rho, double floor) {
  double s = 0.0;
  for (double p : rho.eigenvalues()) {
    if (p > floor) s -= p * std::log(p);
  }
  return s;
}

}  // namespace spinwehrl
