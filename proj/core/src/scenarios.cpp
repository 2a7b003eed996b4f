#include "spinwehrl/scenarios.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <numbers>
#include <ostream>
#include <stdexcept>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "spinwehrl/errors.hpp"

namespace spinwehrl {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

using RatePair = std::pair<EntropyRates, EntropyRates>;  // Wehrl, von Neumann
using RateFn = std::function<RatePair(const DensityMatrix&, double)>;
using EntropyFn = std::function<double(const DensityMatrix&)>;
using ScalarRate = std::function<double(const DensityMatrix&, double)>;
using ExtraColumn = std::pair<std::string, std::function<double(const DensityMatrix&, double)>>;

const std::vector<std::string> kBaseColumns{"t",        "tau_x",     "tau_y", "tau_z",  "S_wehrl",
                                            "Pi_wehrl", "Phi_wehrl", "Pi_vN", "Phi_vN", "Phi_E"};

BlochVector magnetization(const DensityMatrix& rho, const SpinOperators& ops) {
  const double j = rho.spin().j();
  return {expectation(rho, ops.jx).real() / j, expectation(rho, ops.jy).real() / j,
          expectation(rho, ops.jz).real() / j};
}

// Sigma = int Pi dt, adaptive Gauss-Kronrod (7/15) per output interval. Each
// panel sweeps the integrator once through its sorted nodes; the centre node
// seeds the right half on refinement. Pi can spike on scales far below the
// output step (hot baths), so sampling at the output grid is not enough.
class SigmaIntegrator {
 public:
  SigmaIntegrator(const LindbladModel& model, const EvolveOptions& opts, const ScalarRate& rate, double abs_per_time)
      : model_(model), opts_(opts), rate_(rate), abs_per_time_(abs_per_time),
        rel_(std::max(1e-10, 100.0 * opts.tol)) {}

  double operator()(double a, double b, const DensityMatrix& rho_a) const { return panel(a, b, rho_a, 20); }

 private:
  double panel(double a, double b, const DensityMatrix& rho_a, int depth) const {
    using boost::math::quadrature::gauss;
    using boost::math::quadrature::gauss_kronrod;
    const auto& x = gauss_kronrod<double, 15>::abscissa();
    const auto& wk = gauss_kronrod<double, 15>::weights();
    const auto& wg = gauss<double, 7>::weights();
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    const std::size_t n = x.size();

    // grid: a, c - h x[n-1], ..., c - h x[1], c, c + h x[1], ..., c + h x[n-1]
    std::vector<double> grid{a};
    for (std::size_t k = n - 1; k >= 1; --k) grid.push_back(c - h * x[k]);
    for (std::size_t k = 0; k < n; ++k) grid.push_back(c + h * x[k]);
    const Trajectory tr = evolve(rho_a, model_, grid, opts_);
    const auto f = [&](std::size_t i) { return rate_(tr.states[i], grid[i]); };
    const auto node = [&](std::size_t k, int sign) { return sign < 0 ? n - k : n + k; };

    const double f0 = f(n);
    double kron = wk[0] * f0;
    double gsum = wg[0] * f0;
    double l1 = wk[0] * std::abs(f0);
    for (std::size_t k = 1; k < n; ++k) {
      const double fm = f(node(k, -1));
      const double fp = f(node(k, +1));
      kron += wk[k] * (fm + fp);
      l1 += wk[k] * (std::abs(fm) + std::abs(fp));
      if (k % 2 == 0) gsum += wg[k / 2] * (fm + fp);
    }
    kron *= h;
    l1 *= h;
    if (!std::isfinite(kron)) return kInf;
    const double err = std::abs(kron - h * gsum);
    if (err <= std::max(abs_per_time_ * (b - a), rel_ * l1) || depth == 0) return kron;
    return panel(a, c, rho_a, depth - 1) + panel(c, b, tr.states[n], depth - 1);
  }

  const LindbladModel& model_;
  const EvolveOptions& opts_;
  const ScalarRate& rate_;
  double abs_per_time_;
  double rel_;
};

// The von Neumann Pi diverges at a pure start, so Sigma_vN is taken as
// Delta S_vN + int Phi_vN instead; unitary motion leaves S_vN alone, so the
// identity holds for every Hamiltonian.
void add_sigma(ScenarioResult& r, const LindbladModel& model, const EvolveOptions& opts, const RateFn& rates,
               const ScalarRate& vn_phi) {
  const ScalarRate wehrl_pi = [&](const DensityMatrix& rho, double t) { return rates(rho, t).first.pi; };
  const auto& times = r.trajectory.times;
  const auto integrate = [&](bool wehrl) {
    // between samples the rate is only known to about tol times its scale
    double scale = 1e-300;
    for (std::size_t i = 0; i < times.size(); ++i) {
      scale = std::max(scale, std::abs(wehrl ? r.wehrl[i].pi : r.von_neumann[i].phi));
    }
    const SigmaIntegrator integrator(model, opts, wehrl ? wehrl_pi : vn_phi, 10.0 * opts.tol * scale);
    double sigma = 0.0;
    for (std::size_t i = 1; i < times.size(); ++i) {
      sigma += integrator(times[i - 1], times[i], r.trajectory.states[i - 1]);
      if (!std::isfinite(sigma)) return kInf;
    }
    return sigma;
  };
  const bool vn_finite = std::all_of(r.von_neumann.begin(), r.von_neumann.end(),
                                     [](const EntropyRates& v) { return std::isfinite(v.phi); });
  // entropies are O(1) nats, so differences below this are rounding
  const auto snap = [](double x) { return std::abs(x) < 1e-14 ? 0.0 : x; };
  r.scalars.emplace_back("sigma_wehrl", snap(integrate(true)));
  r.scalars.emplace_back("sigma_vN", vn_finite ? snap(von_neumann_entropy(r.trajectory.states.back()) -
                                                      von_neumann_entropy(r.trajectory.states.front()) +
                                                      integrate(false))
                                               : kInf);
  r.scalars.emplace_back("tail_pi_wehrl", r.wehrl.empty() ? 0.0 : std::abs(r.wehrl.back().pi));
}

RatePair spin_half_rates(const DensityMatrix& rho, const DissipatorSpec& d, double t) {
  const BlochVector b = rho_to_bloch(rho);
  if (const auto* deph = std::get_if<Dephasing>(&d)) {
    EntropyRates w;
    w.method = RateMethod::closed_form_spin_half;
    w.pi = dephasing_pi_spin_half(b, deph->lambda);
    w.ds_dt = w.pi;
    EntropyRates v;
    v.method = RateMethod::von_neumann;
    v.pi = dephasing_pi_von_neumann(b, deph->lambda);
    v.ds_dt = v.pi;
    return {w, v};
  }
  BathParams bath(0.0, 0.0);
  if (const auto* ad = std::get_if<AmplitudeDamping>(&d)) {
    bath = BathParams(ad->gamma, ad->nbar);
  } else {
    bath = BathParams(std::get<TimeDependentDamping>(d).gamma_t(t), 0.0);
  }
  return {spin_half_damping_rates(b, bath, 0.0), spin_half_damping_von_neumann(b, bath, 0.0)};
}

// Evolves and fills every per-time series plus the base table.
ScenarioResult run_dynamics(std::string name, const DensityMatrix& rho0, const LindbladModel& model,
                            const TimeSettings& time, const RateFn& rates, const EntropyFn& entropy,
                            const std::vector<ExtraColumn>& extras = {}, ScalarRate vn_phi = {}) {
  ScenarioResult r;
  r.scenario = std::move(name);
  r.spin = rho0.spin();
  EvolveOptions opts;
  opts.tol = time.tol;
  r.trajectory = evolve(rho0, model, uniform_time_grid(time.t_max, time.dt), opts);

  r.table.columns = kBaseColumns;
  for (const auto& e : extras) r.table.columns.push_back(e.first);

  const SpinOperators& ops = model.operators();
  const std::size_t n = r.trajectory.times.size();
  r.s_wehrl.reserve(n);
  r.wehrl.reserve(n);
  r.von_neumann.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double t = r.trajectory.times[i];
    const DensityMatrix& rho = r.trajectory.states[i];
    auto [w, v] = rates(rho, t);
    const double phi_e = energy_flux_direct(model.hamiltonian(t), model.dissipator(rho.matrix(), t));
    w.phi_energy = phi_e;
    v.phi_energy = phi_e;
    const double s = entropy(rho);
    const BlochVector b = magnetization(rho, ops);

    std::vector<double> row{t, b.x, b.y, b.z, s, w.pi, w.phi, v.pi, v.phi, phi_e};
    for (const auto& e : extras) row.push_back(e.second(rho, t));
    r.table.rows.push_back(std::move(row));
    r.s_wehrl.push_back(s);
    r.wehrl.push_back(w);
    r.von_neumann.push_back(v);
  }
  if (!vn_phi) vn_phi = [&](const DensityMatrix& rho, double t) { return rates(rho, t).second.phi; };
  add_sigma(r, model, opts, rates, vn_phi);
  return r;
}

double spin_half_wehrl(const DensityMatrix& rho) { return wehrl_entropy_spin_half(rho_to_bloch(rho).norm()); }

void check_time(const TimeSettings& time) {
  if (!(time.tol > 0.0)) throw InvalidRate("integrator tolerance must be > 0");
  (void)uniform_time_grid(time.t_max, time.dt);
}

// (e^{k t} - 1) / k, equal to t at k = 0.
cplx expm1_over(cplx k, double t) {
  const cplx z = k * t;
  if (std::abs(z) < 1e-4) return t * (1.0 + z / 2.0 + z * z / 6.0 + z * z * z / 24.0);
  return (std::exp(z) - 1.0) / k;
}

std::string tau_label(double tau) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "Pi_wehrl_tau_%g", tau);
  return buf;
}

}  // namespace

double ScenarioResult::scalar(std::string_view name) const {
  for (const auto& [k, v] : scalars) {
    if (k == name) return v;
  }
  throw std::out_of_range("no scalar named " + std::string(name));
}

// -- Spontaneous emission -------------------------------------------------------

ScenarioResult spontaneous_emission(const SpontaneousEmissionParams& p) {
  check_time(p.time);
  const SpinQuantumNumber j = spin_half();
  const double nbar = nbar_from_temperature(p.omega, p.temperature);
  const DissipatorSpec d = AmplitudeDamping{p.gamma, nbar};
  const LindbladModel model(j, StaticJz{p.omega}, d);
  const DensityMatrix rho0 = DensityMatrix::from_populations(j, Eigen::Vector2d(1.0, 0.0));

  ScenarioResult r = run_dynamics(
      "spontaneous_emission", rho0, model, p.time, [&](const DensityMatrix& rho, double t) {
        return spin_half_rates(rho, d, t);
      },
      spin_half_wehrl);
  return r;
}

// -- Thermal quench ---------------------------------------------------------------

double quench_tau_z(double tau_z0, double tau_bar_z, double gamma, double t) {
  return tau_bar_z + std::exp(-gamma * t / std::abs(tau_bar_z)) * (tau_z0 - tau_bar_z);
}

ScenarioResult thermal_quench(const ThermalQuenchParams& p) {
  check_time(p.time);
  const SpinQuantumNumber j = spin_half();
  const BathParams bath = BathParams::from_temperature(p.gamma, p.omega, p.bath_temperature);
  const DissipatorSpec d = AmplitudeDamping{bath.gamma(), bath.nbar()};
  const LindbladModel model(j, StaticJz{p.omega}, d);
  const DensityMatrix rho0 = gibbs_state(j, p.omega, p.initial_temperature);
  const double tz0 = rho_to_bloch(rho0).z;
  const double tb = bath.tau_bar_z();

  ScenarioResult r = run_dynamics(
      "thermal_quench", rho0, model, p.time,
      [&](const DensityMatrix& rho, double t) { return spin_half_rates(rho, d, t); }, spin_half_wehrl,
      {{"tau_z_exact", [&](const DensityMatrix&, double t) { return quench_tau_z(tz0, tb, p.gamma, t); }}});
  r.scalars.emplace_back("tau_bar_z", tb);
  return r;
}

// -- Rotating field -----------------------------------------------------------------

double rotating_field_steady_pi_wehrl(double b0, double b1, double drive_omega, const BathParams& bath) {
  const double g = bath.gamma();
  const double tb = bath.tau_bar_z();
  const double den = g * g + 2.0 * tb * tb * (b1 * b1 + 2.0 * (b0 + drive_omega) * (b0 + drive_omega));
  // tb + (tb^2 - 1) atanh(tb) = tb^3 g(tb), finite at tb = -1
  return -g * b1 * b1 * tb * tb * tb * coherence_bracket(tb) / den;
}

double rotating_field_steady_pi_von_neumann(double b0, double b1, double drive_omega, const BathParams& bath) {
  const double g = bath.gamma();
  if (g == 0.0 || b1 == 0.0) return 0.0;
  if (bath.zero_temperature()) return kInf;
  const double tb = bath.tau_bar_z();
  const double den = g * g + 2.0 * tb * tb * (b1 * b1 + 2.0 * (b0 + drive_omega) * (b0 + drive_omega));
  return -2.0 * g * b1 * b1 * tb * tb * std::atanh(tb) / den;
}

ScenarioResult rotating_field(const RotatingFieldParams& p) {
  check_time(p.time);
  if (std::holds_alternative<TimeDependentDamping>(p.dissipator)) {
    throw InvalidRate("rotating field takes dephasing or static damping");
  }
  const SpinQuantumNumber j = spin_half();
  const LindbladModel model(j, RotatingField{p.b0, p.b1, p.drive_omega}, p.dissipator);
  const DensityMatrix rho0 = bloch_to_rho(p.initial);

  ScenarioResult r = run_dynamics(
      "rotating_field", rho0, model, p.time,
      [&](const DensityMatrix& rho, double t) { return spin_half_rates(rho, p.dissipator, t); }, spin_half_wehrl);
  r.scalars.emplace_back("final_pi_wehrl", r.wehrl.back().pi);
  r.scalars.emplace_back("final_phi_wehrl", r.wehrl.back().phi);
  r.scalars.emplace_back("final_pi_vN", r.von_neumann.back().pi);
  r.scalars.emplace_back("final_phi_vN", r.von_neumann.back().phi);
  if (const auto* ad = std::get_if<AmplitudeDamping>(&p.dissipator)) {
    const BathParams bath(ad->gamma, ad->nbar);
    r.scalars.emplace_back("steady_pi_wehrl", rotating_field_steady_pi_wehrl(p.b0, p.b1, p.drive_omega, bath));
    r.scalars.emplace_back("steady_pi_vN", rotating_field_steady_pi_von_neumann(p.b0, p.b1, p.drive_omega, bath));
  }
  return r;
}

// -- Single-photon pulse ------------------------------------------------------------

void PulseParams::validate() const {
  if (!(gamma0 > 0.0) || !std::isfinite(gamma0)) throw InvalidRate("gamma0 must be > 0");
  if (!(capital_omega > gamma0) || !std::isfinite(capital_omega)) {
    throw InvalidRate("pulse bandwidth must exceed gamma0");
  }
  if (!(a0 > 0.0) || !(a0 <= 1.0)) throw InvalidRate("a0 must lie in (0, 1]");
  if (!std::isfinite(omega0) || !std::isfinite(omega_p)) throw InvalidFrequency("pulse frequencies must be finite");
}

double PulseParams::norm() const { return std::sqrt(std::max(0.0, 1.0 - a0 * a0)); }

cplx pulse_xi(const PulseParams& p, double t) {
  if (t < 0.0) return 0.0;
  return p.norm() * std::sqrt(p.capital_omega) * std::exp(-0.5 * p.capital_omega * t);
}

cplx pulse_amplitude(const PulseParams& p, double t) {
  const double detuning = p.omega0 - p.omega_p;
  const cplx kappa(0.5 * (p.gamma0 - p.capital_omega), detuning);
  const double decay = std::exp(-0.5 * p.gamma0 * t);
  const double drive = std::sqrt(p.gamma0 * p.capital_omega) * p.norm();
  return decay * (p.a0 - drive * expm1_over(kappa, t));
}

cplx pulse_amplitude_derivative(const PulseParams& p, double t) {
  const double detuning = p.omega0 - p.omega_p;
  return -0.5 * p.gamma0 * pulse_amplitude(p, t) -
         std::sqrt(p.gamma0) * pulse_xi(p, t) * std::exp(cplx(0.0, detuning * t));
}

PulseRates pulse_effective_rates(const PulseParams& p, double t) {
  const cplx a = pulse_amplitude(p, t);
  if (std::abs(a) < 1e-12) {
    throw AmplitudeUnderflow("|a(t)| < 1e-12 at t = " + std::to_string(t));
  }
  const cplx ratio = pulse_amplitude_derivative(p, t) / a;
  const double detuning = p.omega0 - p.omega_p;
  const cplx drive = std::conj(a) * pulse_xi(p, t) * std::exp(cplx(0.0, detuning * t));
  PulseRates r;
  r.gamma_t = -2.0 * ratio.real();
  r.gamma_t_explicit = p.gamma0 + 2.0 * std::sqrt(p.gamma0) * drive.real() / std::norm(a);
  r.omega_t = -ratio.imag();
  return r;
}

double markovianity_threshold(const PulseParams& p) {
  const double ratio = p.capital_omega / p.gamma0;
  const double delta = 4.0 * ratio / ((1.0 - ratio) * (1.0 - ratio));
  return std::sqrt(delta / (1.0 + delta));
}

bool is_markovian(const PulseParams& p) {
  p.validate();
  if (p.omega0 == p.omega_p) return p.a0 >= markovianity_threshold(p);
  const double t_end = 40.0 / p.gamma0;
  constexpr int kSamples = 20000;
  for (int i = 0; i <= kSamples; ++i) {
    const double t = t_end * i / kSamples;
    const cplx a = pulse_amplitude(p, t);
    if (std::abs(a) < 1e-12) return false;
    if (pulse_effective_rates(p, t).gamma_t < 0.0) return false;
  }
  return true;
}

ScenarioResult photon_pulse_scenario(const PulseParams& p, const TimeSettings& time) {
  p.validate();
  check_time(time);
  if (!is_markovian(p)) {
    throw NonMarkovianRegime("a0 = " + std::to_string(p.a0) + " is below the Markovianity threshold " +
                             std::to_string(markovianity_threshold(p)));
  }
  const SpinQuantumNumber j = spin_half();
  const auto gamma_t = [p](double t) { return pulse_effective_rates(p, t).gamma_t; };
  const DissipatorSpec d = TimeDependentDamping{gamma_t};
  const LindbladModel model(j, PulseEffective{[p](double t) { return pulse_effective_rates(p, t).omega_t; }}, d);
  const double a0_sq = p.a0 * p.a0;
  const DensityMatrix rho0 = DensityMatrix::from_populations(j, Eigen::Vector2d(a0_sq, 1.0 - a0_sq));

  ScenarioResult r;
  try {
    r = run_dynamics(
        "photon_pulse", rho0, model, time,
        [&](const DensityMatrix& rho, double t) { return spin_half_rates(rho, d, t); }, spin_half_wehrl,
        {{"gamma_t", [&](const DensityMatrix&, double t) { return gamma_t(t); }},
         {"a_sq", [&](const DensityMatrix&, double t) { return std::norm(pulse_amplitude(p, t)); }}});
  } catch (const NonMarkovianRate& e) {
    throw NonMarkovianRegime(e.what());
  }
  r.scalars.emplace_back("markovian", 1.0);
  r.scalars.emplace_back("threshold", markovianity_threshold(p));
  return r;
}

// -- General spin ---------------------------------------------------------------------

ScenarioResult custom_scenario(const DensityMatrix& initial, const CustomParams& p) {
  check_time(p.time);
  const LindbladModel model(initial.spin(), p.hamiltonian, p.dissipator);
  const GridPtr grid = make_shared_grid(p.n_theta, p.n_phi);
  const DissipatorSpec& d = p.dissipator;

  std::vector<ExtraColumn> extras;
  if (!std::holds_alternative<Dephasing>(d)) {
    extras.emplace_back("Phi_exact", [&d](const DensityMatrix& rho, double t) {
      if (const auto* ad = std::get_if<AmplitudeDamping>(&d)) return damping_phi(rho, BathParams(ad->gamma, ad->nbar));
      return damping_phi(rho, BathParams(std::get<TimeDependentDamping>(d).gamma_t(t), 0.0));
    });
  }

  ScenarioResult r = run_dynamics(
      "custom", initial, model, p.time,
      [&](const DensityMatrix& rho, double t) {
        return RatePair{wehrl_rates_quadrature(rho, d, t, 0.0, grid), von_neumann_rates(rho, d, t, 0.0)};
      },
      [&](const DensityMatrix& rho) { return wehrl_entropy(husimi(rho, adapted_grid(rho, grid))); }, extras,
      [&](const DensityMatrix& rho, double t) { return von_neumann_rates(rho, d, t, 0.0).phi; });
  return r;
}

// -- Static rate curves -------------------------------------------------------------

std::string_view to_string(CurveKind k) {
  switch (k) {
    case CurveKind::dephasing_tau: return "dephasing_tau";
    case CurveKind::damping_tau: return "damping_tau";
    case CurveKind::damping_theta: return "damping_theta";
  }
  return "unknown";
}

ScenarioResult rate_curve(const RateCurveParams& p) {
  if (p.points < 2) throw InvalidGrid("a rate curve needs at least 2 points");
  if (!(p.rate >= 0.0)) throw InvalidRate("rate must be >= 0");
  ScenarioResult r;
  r.scenario = "rate_curve";
  r.spin = spin_half();
  Table& tab = r.table;
  double max_pi = 0.0;
  const auto x_at = [&](int i, double hi) { return hi * i / (p.points - 1); };

  switch (p.kind) {
    case CurveKind::dephasing_tau:
      tab.columns = {"tau", "Pi_wehrl", "Pi_vN"};
      for (int i = 0; i < p.points; ++i) {
        const double tau = x_at(i, 1.0);
        const BlochVector b{tau, 0.0, 0.0};
        const double pw = dephasing_pi_spin_half(b, p.rate);
        tab.rows.push_back({tau, pw, dephasing_pi_von_neumann(b, p.rate)});
        max_pi = std::max(max_pi, pw);
      }
      break;
    case CurveKind::damping_tau: {
      const BathParams bath = BathParams::from_tau_bar(p.rate, p.tau_bar_z);
      tab.columns = {"tau", "Pi_wehrl", "Phi_wehrl", "Pi_vN", "Phi_vN"};
      for (int i = 0; i < p.points; ++i) {
        const double tau = x_at(i, 1.0);
        const BlochVector b{0.0, 0.0, tau};
        const EntropyRates w = spin_half_damping_rates(b, bath, 0.0);
        const EntropyRates v = spin_half_damping_von_neumann(b, bath, 0.0);
        tab.rows.push_back({tau, w.pi, w.phi, v.pi, v.phi});
        max_pi = std::max(max_pi, w.pi);
      }
      break;
    }
    case CurveKind::damping_theta: {
      const BathParams bath(p.rate, 0.0);
      tab.columns = {"theta"};
      for (double tau : p.taus) {
        if (!(tau >= 0.0) || !(tau <= 1.0)) throw NonPhysicalState("curve tau values must lie in [0, 1]");
        tab.columns.push_back(tau_label(tau));
      }
      for (int i = 0; i < p.points; ++i) {
        const double theta = x_at(i, std::numbers::pi);
        std::vector<double> row{theta};
        for (double tau : p.taus) {
          const BlochVector b{tau * std::sin(theta), 0.0, tau * std::cos(theta)};
          const double pw = spin_half_damping_rates(b, bath, 0.0).pi;
          row.push_back(pw);
          max_pi = std::max(max_pi, pw);
        }
        tab.rows.push_back(std::move(row));
      }
      break;
    }
  }
  r.scalars.emplace_back("max_pi_wehrl", max_pi);
  return r;
}

void write_scenario_csv(const ScenarioResult& r, std::ostream& out) { write_csv(r.table, out); }

Table trajectory_table(const Trajectory& trajectory) {
  Table t;
  t.columns.emplace_back("t");
  const int d = trajectory.states.empty() ? 0 : trajectory.states.front().spin().dim();
  for (int k = 0; k < d; ++k) {
    for (int l = 0; l < d; ++l) {
      t.columns.push_back("re_" + std::to_string(k) + "_" + std::to_string(l));
      t.columns.push_back("im_" + std::to_string(k) + "_" + std::to_string(l));
    }
  }
  for (std::size_t i = 0; i < trajectory.states.size(); ++i) {
    std::vector<double> row{trajectory.times[i]};
    const Matrix& rho = trajectory.states[i].matrix();
    for (int k = 0; k < d; ++k) {
      for (int l = 0; l < d; ++l) {
        row.push_back(rho(k, l).real());
        row.push_back(rho(k, l).imag());
      }
    }
    t.rows.push_back(std::move(row));
  }
  return t;
}

}  // namespace spinwehrl
