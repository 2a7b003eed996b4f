#pragma once

#include <complex>

#include <Eigen/Dense>

namespace spinwehrl {

using cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;

/// Spin quantum number stored as 2J so that half-integer spins are exact.
class SpinQuantumNumber {
 public:
  explicit SpinQuantumNumber(int two_j);

  [[nodiscard]] int two_j() const noexcept { return two_j_; }
  [[nodiscard]] double j() const noexcept { return 0.5 * two_j_; }
  [[nodiscard]] int dim() const noexcept { return two_j_ + 1; }

  /// Magnetic quantum number of basis row `index`. The basis runs from
  /// m = +J (index 0) down to m = -J (index 2J).
  [[nodiscard]] double m(int index) const noexcept { return j() - index; }

  friend bool operator==(SpinQuantumNumber, SpinQuantumNumber) = default;

 private:
  int two_j_;
};

inline SpinQuantumNumber spin_half() { return SpinQuantumNumber(1); }

struct SpinOperators {
  Matrix jx, jy, jz, jp, jm;
};

SpinOperators make_spin_operators(SpinQuantumNumber j);

/// Numerical tolerances used when validating a density matrix.
struct StateTolerances {
  double hermiticity = 1e-12;
  double trace = 1e-12;
  double min_eigenvalue = -1e-10;
};

/// A validated (2J+1)x(2J+1) density matrix in the descending-m basis.
class DensityMatrix {
 public:
  /// Throws NonPhysicalState when the matrix is not Hermitian, not unit
  /// trace or not positive semidefinite within `tol`.
  DensityMatrix(SpinQuantumNumber j, Matrix entries, const StateTolerances& tol = {});

  /// Hermitizes and trace-normalizes `entries` before validating.
  static DensityMatrix normalized(SpinQuantumNumber j, const Matrix& entries,
                                  const StateTolerances& tol = {});

  static DensityMatrix maximally_mixed(SpinQuantumNumber j);
  static DensityMatrix from_populations(SpinQuantumNumber j, const Eigen::VectorXd& populations);
  static DensityMatrix pure(SpinQuantumNumber j, const Eigen::VectorXcd& psi);

  [[nodiscard]] SpinQuantumNumber spin() const noexcept { return j_; }
  [[nodiscard]] const Matrix& matrix() const noexcept { return rho_; }
  [[nodiscard]] cplx operator()(int row, int col) const { return rho_(row, col); }
  [[nodiscard]] Eigen::VectorXd populations() const { return rho_.diagonal().real(); }
  [[nodiscard]] Eigen::VectorXd eigenvalues() const;
  [[nodiscard]] double purity() const;

 private:
  SpinQuantumNumber j_;
  Matrix rho_;
};

struct BlochVector {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  [[nodiscard]] double norm() const;
  [[nodiscard]] double transverse_sq() const { return x * x + y * y; }
};

/// rho = (1 + tau.sigma)/2. Throws NonPhysicalState when |tau| > 1.
DensityMatrix bloch_to_rho(const BlochVector& b);

/// tau_i = tr(rho sigma_i). Throws WrongDimension unless J = 1/2.
BlochVector rho_to_bloch(const DensityMatrix& rho);

/// Thermal state of H = omega Jz (hbar = k_B = 1). At T = 0 returns the
/// ground state: |J,-J> for omega > 0, |J,J> for omega < 0.
DensityMatrix gibbs_state(SpinQuantumNumber j, double omega, double temperature);

/// Bose occupation 1/(exp(omega/T) - 1). Zero at T = 0.
double nbar_from_temperature(double omega, double temperature);
double temperature_from_nbar(double omega, double nbar);

/// tr(rho op).
cplx expectation(const DensityMatrix& rho, const Matrix& op);
cplx expectation(const Matrix& rho, const Matrix& op);

/// -tr(rho ln rho) with eigenvalues below `floor` dropped.
double von_neumann_entropy(const DensityMatrix& rho, double floor = 1e-15);

}  // namespace spinwehrl
