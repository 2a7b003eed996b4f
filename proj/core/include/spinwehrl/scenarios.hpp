#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "spinwehrl/csv.hpp"
#include "spinwehrl/dynamics.hpp"
#include "spinwehrl/entropy_rates.hpp"
#include "spinwehrl/phase_space.hpp"

namespace spinwehrl {

/// Output of a scenario run. For time-dependent scenarios the series vectors
/// have one entry per trajectory time and `table` holds the CSV columns
///   t, tau_x, tau_y, tau_z, S_wehrl, Pi_wehrl, Phi_wehrl, Pi_vN, Phi_vN, Phi_E
/// followed by scenario-specific columns. tau is <J>/J (the Bloch vector for
/// spin 1/2). Rate curves fill only `table` and `scalars`.
struct ScenarioResult {
  std::string scenario;
  SpinQuantumNumber spin{1};
  Trajectory trajectory;
  std::vector<double> s_wehrl;
  std::vector<EntropyRates> wehrl;
  std::vector<EntropyRates> von_neumann;
  Table table;
  std::vector<std::pair<std::string, double>> scalars;

  /// Throws std::out_of_range for an unknown name.
  [[nodiscard]] double scalar(std::string_view name) const;
};

struct TimeSettings {
  double t_max = 10.0;
  double dt = 0.05;
  double tol = 1e-10;
};

// -- Spontaneous emission -------------------------------------------------------

struct SpontaneousEmissionParams {
  double omega = 1.0;
  double gamma = 0.1;
  double temperature = 1.0;
  TimeSettings time;
};

/// Spin 1/2 starting in the excited state under thermal amplitude damping.
/// Scalars: sigma_wehrl, sigma_vN, tail_pi_wehrl.
ScenarioResult spontaneous_emission(const SpontaneousEmissionParams& p);

// -- Thermal quench ---------------------------------------------------------------

struct ThermalQuenchParams {
  double omega = 1.0;
  double gamma = 0.1;
  double initial_temperature = 2.0;
  double bath_temperature = 1.0;
  TimeSettings time;
};

/// tau_z(t) = tau_bar + exp(-gamma t / |tau_bar|) (tau_z(0) - tau_bar).
double quench_tau_z(double tau_z0, double tau_bar_z, double gamma, double t);

/// Spin 1/2 prepared in a Gibbs state at one temperature and coupled to a bath
/// at another. Extra column tau_z_exact. Scalars: sigma_wehrl, tau_bar_z.
ScenarioResult thermal_quench(const ThermalQuenchParams& p);

// -- Rotating field -----------------------------------------------------------------

struct RotatingFieldParams {
  double b0 = 5.0;
  double b1 = 10.0;
  double drive_omega = 5.0;
  DissipatorSpec dissipator = AmplitudeDamping{1.0, 1.0};
  BlochVector initial{1.0, 0.0, 0.0};
  TimeSettings time;
};

/// Long-time Pi = Phi of the damped, driven spin 1/2.
double rotating_field_steady_pi_wehrl(double b0, double b1, double drive_omega, const BathParams& bath);
/// Von Neumann counterpart; +inf at zero temperature.
double rotating_field_steady_pi_von_neumann(double b0, double b1, double drive_omega, const BathParams& bath);

/// Spin 1/2 in a rotating field with either dephasing or damping.
/// Scalars: final_pi_wehrl, final_phi_wehrl, final_pi_vN, final_phi_vN and,
/// for damping, steady_pi_wehrl and steady_pi_vN from the closed forms.
ScenarioResult rotating_field(const RotatingFieldParams& p);

// -- Single-photon pulse ------------------------------------------------------------

struct PulseParams {
  double gamma0 = 1.0;
  double capital_omega = 10.0;
  double a0 = 0.70710678118654752;
  double omega0 = 1.0;
  double omega_p = 1.0;

  /// Throws InvalidRate unless gamma0 > 0, capital_omega > gamma0, 0 < a0 <= 1.
  void validate() const;
  [[nodiscard]] double norm() const;  // N = sqrt(1 - a0^2)
};

/// xi(t) = N sqrt(Omega) exp(-Omega t / 2) for t >= 0, zero before.
cplx pulse_xi(const PulseParams& p, double t);
/// Excited-state amplitude a(t) for t >= 0 (closed form of the
/// Wigner-Weisskopf integral for the exponential pulse).
cplx pulse_amplitude(const PulseParams& p, double t);
/// da/dt = -(gamma0/2) a - sqrt(gamma0) xi(t) exp(i (omega0 - omega_p) t).
cplx pulse_amplitude_derivative(const PulseParams& p, double t);

struct PulseRates {
  double gamma_t = 0.0;           // -2 Re(a'/a)
  double gamma_t_explicit = 0.0;  // gamma0 + 2 sqrt(gamma0) Re(a* xi e^{i Delta t}) / |a|^2
  double omega_t = 0.0;           // -Im(a'/a)
};

/// Throws AmplitudeUnderflow when |a(t)| < 1e-12.
PulseRates pulse_effective_rates(const PulseParams& p, double t);

/// sqrt(delta/(1+delta)), delta = 4 r / (1 - r)^2, r = Omega/gamma0.
double markovianity_threshold(const PulseParams& p);
/// Resonant pulses: a0 >= threshold. Detuned pulses: Gamma_t >= 0 on a dense
/// scan of [0, 40/gamma0].
bool is_markovian(const PulseParams& p);

/// Master-equation evolution of the atom driven by the pulse, with Wehrl
/// rates from the zero-temperature spin-1/2 forms at gamma -> Gamma_t.
/// Extra columns gamma_t, a_sq. Throws NonMarkovianRegime when Gamma_t < 0.
/// Scalars: markovian, threshold, sigma_wehrl.
ScenarioResult photon_pulse_scenario(const PulseParams& p, const TimeSettings& time);

// -- General spin ---------------------------------------------------------------------

struct CustomParams {
  HamiltonianSpec hamiltonian = StaticJz{1.0};
  DissipatorSpec dissipator = AmplitudeDamping{1.0, 1.0};
  TimeSettings time;
  int n_theta = kDefaultThetaNodes;
  int n_phi = kDefaultPhiNodes;
};

/// Any spin; Wehrl rates by quadrature and von Neumann rates from the
/// eigendecomposition. For damping an extra column Phi_exact holds the
/// hypergeometric (or zero-temperature) flux. Scalars: sigma_wehrl,
/// tail_pi_wehrl.
ScenarioResult custom_scenario(const DensityMatrix& initial, const CustomParams& p);

// -- Static rate curves -------------------------------------------------------------

enum class CurveKind {
  dephasing_tau,  // tau = (tau, 0, 0), tau in [0, 1]
  damping_tau,    // tau = (0, 0, tau), tau in [0, 1], fixed tau_bar_z
  damping_theta,  // zero temperature, tau = (tau sin t, 0, tau cos t), t in [0, pi]
};

struct RateCurveParams {
  CurveKind kind = CurveKind::dephasing_tau;
  int points = 101;
  double rate = 1.0;             // lambda or gamma
  double tau_bar_z = -0.5;       // damping_tau only
  std::vector<double> taus{0.25, 0.5, 0.75, 1.0};  // damping_theta only
};

std::string_view to_string(CurveKind k);

/// Closed-form spin-1/2 rate curves; von Neumann columns carry "inf" where
/// they diverge. Scalars: max_pi_wehrl.
ScenarioResult rate_curve(const RateCurveParams& p);

void write_scenario_csv(const ScenarioResult& r, std::ostream& out);

/// Columns t, re_K_L, im_K_L for every density-matrix entry (basis indices
/// K, L counted from m = +J).
Table trajectory_table(const Trajectory& trajectory);

}  // namespace spinwehrl
