#pragma once

#include <functional>
#include <span>
#include <string_view>
#include <vector>

#include "spinwehrl/dynamics.hpp"
#include "spinwehrl/phase_space.hpp"
#include "spinwehrl/spin_ops.hpp"

namespace spinwehrl {

enum class RateMethod {
  quadrature,
  closed_form_spin_half,
  exact_hypergeom,
  zero_T,
  asymptotic,
  von_neumann,
};

std::string_view to_string(RateMethod m);

/// Entropy rates in nats per unit time; phi_energy in energy per unit time.
/// A divergent von Neumann quantity is reported as +infinity.
struct EntropyRates {
  double ds_dt = 0.0;
  double pi = 0.0;
  double phi = 0.0;
  double phi_energy = 0.0;
  RateMethod method = RateMethod::quadrature;
};

/// Thermal bath of the amplitude-damping channel.
class BathParams {
 public:
  /// Throws InvalidRate for gamma < 0 or nbar < 0.
  BathParams(double gamma, double nbar);

  static BathParams from_temperature(double gamma, double omega, double temperature);
  /// Inverse of tau_bar_z = -1/(2 nbar + 1); requires tau_bar_z in [-1, 0).
  static BathParams from_tau_bar(double gamma, double tau_bar_z);

  [[nodiscard]] double gamma() const noexcept { return gamma_; }
  [[nodiscard]] double nbar() const noexcept { return nbar_; }
  /// Bath-induced magnetization -1/(2 nbar + 1), in [-1, 0).
  [[nodiscard]] double tau_bar_z() const noexcept { return -1.0 / (2.0 * nbar_ + 1.0); }
  [[nodiscard]] bool zero_temperature() const noexcept { return nbar_ == 0.0; }

 private:
  double gamma_;
  double nbar_;
};

/// g(x) = [x - (1 - x^2) atanh(x)] / x^3, extended to g(0) = 2/3, g(+-1) = 1.
/// Even in x.
double coherence_bracket(double x);

// -- Dephasing ----------------------------------------------------------------

/// Pi = (lambda/2) (2J+1)/(4 pi) int |Jz(Q)|^2 / Q dOmega.
double dephasing_pi_quadrature(const HusimiField& field, double lambda);

/// Pi = (lambda/4)(tau_x^2 + tau_y^2) g(tau).
double dephasing_pi_spin_half(const BlochVector& b, double lambda);

/// Pi_vN = (lambda/2)(tau_x^2 + tau_y^2) atanh(tau)/tau; +inf once
/// tau >= 1 - 1e-12 with nonzero coherence.
double dephasing_pi_von_neumann(const BlochVector& b, double lambda);

// -- Amplitude damping ----------------------------------------------------------

/// Phi = (2J+1)/(4 pi) gamma J int sin(t) { 2J Q sin(t) / ((2n+1) - cos(t)) - dQ/dt } dOmega
double damping_phi_quadrature(const HusimiField& field, const BathParams& bath);

/// Damping production split into the damping-current term (pointwise
/// non-negative) and the dephasing-current term. The latter carries the
/// factor ((2n+1)cos t - 1) cos t and can go negative on its own; only the
/// sum is bounded below.
struct DampingProduction {
  double damping_term = 0.0;
  double coherence_term = 0.0;
  [[nodiscard]] double total() const { return damping_term + coherence_term; }
};

DampingProduction damping_pi_quadrature(const HusimiField& field, const BathParams& bath);

/// Production evaluated on `grid` and on a grid with twice the nodes in each
/// direction; `reliable` is false when they differ by more than `rel_tol`.
struct RefinedProduction {
  double value = 0.0;
  double refined_value = 0.0;
  bool reliable = false;
};

RefinedProduction damping_pi_refined(const DensityMatrix& rho, const BathParams& bath, const SphereGrid& grid,
                                     double rel_tol = 1e-4);

/// Exact general-J flux through 2F1, from the populations rho_{m,m}
/// (ordered m = J..-J). Requires nbar > 0; throws ZeroTemperatureBranch at
/// nbar = 0 (use damping_phi_zero_T).
double damping_phi_exact(std::span<const double> populations, const BathParams& bath, SpinQuantumNumber j);
double damping_phi_exact(const DensityMatrix& rho, const BathParams& bath);

/// Phi = 2 gamma J (J + <Jz>).
double damping_phi_zero_T(double jz_expect, double gamma, SpinQuantumNumber j);

/// Large-J / small-|tau_bar_z| approximation of the exact flux. The bracket
/// in m is averaged over the populations.
double damping_phi_asymptotic(std::span<const double> populations, const BathParams& bath, SpinQuantumNumber j);

/// Exact flux with the zero-temperature branch selected automatically.
double damping_phi(const DensityMatrix& rho, const BathParams& bath);

/// Phi_E = -tr(H D(rho)) for H = omega Jz, in closed form.
double energy_flux(const DensityMatrix& rho, const BathParams& bath, double omega);

/// -tr(H D) for an arbitrary Hamiltonian and dissipator image.
double energy_flux_direct(const Matrix& hamiltonian, const Matrix& dissipator_image);

/// Spin-1/2 closed forms; the zero-temperature branch is used when nbar = 0.
EntropyRates spin_half_damping_rates(const BlochVector& b, const BathParams& bath, double omega);

/// Von Neumann counterparts. Phi_vN is +inf at nbar = 0 (unless the state is
/// at equilibrium) and Pi_vN is +inf for a pure state away from equilibrium.
EntropyRates spin_half_damping_von_neumann(const BlochVector& b, const BathParams& bath, double omega);

/// Phi T (1 + 1/J) / Phi_E. Throws UndefinedRatio when Phi_E = 0.
double clausius_ratio(const EntropyRates& rates, double temperature, SpinQuantumNumber j);

// -- Entropy balance ----------------------------------------------------------

/// -(2J+1)/(4 pi) int D(Q) ln Q dOmega, with D(Q) sampled on the same grid.
/// Q is clamped at 1e-300 inside the logarithm.
double dissipative_entropy_rate(const HusimiField& field, std::span<const double> dissipator_field);

/// Convenience: D(Q) is the Husimi image of the dissipator applied to rho.
double dissipative_entropy_rate(const DensityMatrix& rho, const LindbladModel& model, double t, GridPtr grid);

/// Wehrl rates of a general-J state, all by quadrature on `grid`: ds_dt is
/// the direct dissipative rate, pi and phi come from the current formulas
/// (phi = 0 for dephasing). phi_energy = -tr(omega Jz D(rho)).
EntropyRates wehrl_rates_quadrature(const DensityMatrix& rho, const DissipatorSpec& d, double t, double omega,
                                    GridPtr grid);

/// Von Neumann rates for a general-J state. dS/dt = -tr(D(rho) ln rho) with an
/// eigenvalue floor of 1e-15; Phi_vN = Phi_E / T for thermal damping (zero
/// for dephasing); Pi_vN = dS/dt + Phi_vN.
EntropyRates von_neumann_rates(const DensityMatrix& rho, const DissipatorSpec& d, double t, double omega);

/// Sigma = int Pi dt by the trapezoid rule. Throws TailNotConverged when
/// |Pi| at the last sample exceeds `tail_tol`.
double total_entropy_produced(std::span<const double> times, std::span<const double> pi, double tail_tol = 1e-10);
double total_entropy_produced(const Trajectory& trajectory,
                              const std::function<double(const DensityMatrix&, double)>& rate_fn,
                              double tail_tol = 1e-10);

}  // namespace spinwehrl
