#pragma once

#include <functional>
#include <variant>
#include <vector>

#include "spinwehrl/spin_ops.hpp"

namespace spinwehrl {

// Hamiltonians (angular-frequency units).

/// H = omega Jz
struct StaticJz {
  double omega = 0.0;
};

/// H(t) = -b0 Jz - b1 (Jx cos(w t) + Jy sin(w t)); for spin 1/2 this is
/// -(b0/2) sz - (b1/2)(sx cos(w t) + sy sin(w t)).
struct RotatingField {
  double b0 = 0.0;
  double b1 = 0.0;
  double drive_omega = 0.0;
};

/// H(t) = omega_t(t) Jz
struct PulseEffective {
  std::function<double(double)> omega_t;
};

using HamiltonianSpec = std::variant<StaticJz, RotatingField, PulseEffective>;

Matrix hamiltonian_matrix(const HamiltonianSpec& h, const SpinOperators& ops, double t);

// Dissipators (inverse-time units).

/// D(rho) = -(lambda/2) [Jz, [Jz, rho]]
struct Dephasing {
  double lambda = 0.0;
};

/// Thermal amplitude damping with emission rate gamma (nbar+1) and
/// absorption rate gamma nbar.
struct AmplitudeDamping {
  double gamma = 0.0;
  double nbar = 0.0;
};

/// Zero-temperature damping with a time-dependent rate; gamma_t(t) must stay
/// non-negative.
struct TimeDependentDamping {
  std::function<double(double)> gamma_t;
};

using DissipatorSpec = std::variant<Dephasing, AmplitudeDamping, TimeDependentDamping>;

/// Throws InvalidRate for negative static parameters.
void validate_dissipator(const DissipatorSpec& d);

Matrix dephasing_dissipator(const Matrix& rho, const SpinOperators& ops, double lambda);
Matrix dephasing_dissipator(const DensityMatrix& rho, double lambda);

Matrix amplitude_damping_dissipator(const Matrix& rho, const SpinOperators& ops, double gamma, double nbar);
Matrix amplitude_damping_dissipator(const DensityMatrix& rho, double gamma, double nbar);

/// f(rho) = (nbar+1) rho J+ - nbar J+ rho. Satisfies
/// D(rho) = (gamma/2) ([J-, f] - [J+, f^dagger]) and vanishes on the Gibbs state.
Matrix current_superoperator_f(const Matrix& rho, const SpinOperators& ops, double nbar);
Matrix current_superoperator_f(const DensityMatrix& rho, double nbar);

/// Generator bundle with cached spin matrices.
class LindbladModel {
 public:
  LindbladModel(SpinQuantumNumber j, HamiltonianSpec h, DissipatorSpec d);

  [[nodiscard]] SpinQuantumNumber spin() const noexcept { return j_; }
  [[nodiscard]] const SpinOperators& operators() const noexcept { return ops_; }
  [[nodiscard]] const HamiltonianSpec& hamiltonian_spec() const noexcept { return h_; }
  [[nodiscard]] const DissipatorSpec& dissipator_spec() const noexcept { return d_; }

  [[nodiscard]] Matrix hamiltonian(double t) const;
  /// Throws NonMarkovianRate when a time-dependent rate is negative at t.
  [[nodiscard]] Matrix dissipator(const Matrix& rho, double t) const;
  /// -i [H(t), rho] + D(rho)
  [[nodiscard]] Matrix rhs(const Matrix& rho, double t) const;

 private:
  SpinQuantumNumber j_;
  SpinOperators ops_;
  HamiltonianSpec h_;
  DissipatorSpec d_;
};

Matrix lindblad_rhs(const DensityMatrix& rho, double t, const HamiltonianSpec& h, const DissipatorSpec& d);

struct EvolveOptions {
  double tol = 1e-10;       // local error bound per step (mixed abs/rel)
  double initial_step = 0.0;  // 0: chosen automatically
  double min_step = 1e-14;  // relative to the integration span
  long max_steps = 50'000'000;
};

struct TrajectoryDiagnostics {
  long accepted_steps = 0;
  long rejected_steps = 0;
  /// Largest |tr(rho) - 1| or Hermiticity defect seen before renormalization.
  double max_drift = 0.0;
};

struct Trajectory {
  std::vector<double> times;
  std::vector<DensityMatrix> states;
  TrajectoryDiagnostics diagnostics;
};

/// Adaptive Dormand-Prince 5(4) integration of the master equation. States
/// are Hermitized and trace-normalized after every accepted step and stored at
/// each entry of `t_grid` (strictly increasing; the first entry is the
/// initial time). Throws StiffnessFailure when the step size underflows.
Trajectory evolve(const DensityMatrix& rho0, const LindbladModel& model, const std::vector<double>& t_grid,
                  const EvolveOptions& opts = {});
Trajectory evolve(const DensityMatrix& rho0, const HamiltonianSpec& h, const DissipatorSpec& d,
                  const std::vector<double>& t_grid, double tol);

/// {t0, t0+dt, ..., t_max}; the last point is clamped onto t_max.
std::vector<double> uniform_time_grid(double t_max, double dt, double t0 = 0.0);

}  // namespace spinwehrl
