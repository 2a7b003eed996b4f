#include "spinwehrl/entropy_rates.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include <Eigen/Eigenvalues>

#include "spinwehrl/errors.hpp"
#include "spinwehrl/hypergeom.hpp"

namespace spinwehrl {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kQFloor = 1e-300;
constexpr double kPureEdge = 1e-12;

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

double prefactor(SpinQuantumNumber j) { return (j.two_j() + 1.0) / (4.0 * std::numbers::pi); }

// sum over nodes of w * f(i, idx) in a fixed order
template <class F>
double accumulate(const SphereGrid& g, F&& f) {
  double total = 0.0;
  for (int i = 0; i < g.n_theta; ++i) {
    double row = 0.0;
    for (int k = 0; k < g.n_phi; ++k) {
      const std::size_t idx = g.index(i, k);
      row += g.weights[idx] * f(idx);
    }
    total += row;
  }
  return total;
}

// Nodes whose Q sits at rounding level carry no information about the
// gradient either; the Pi integrands tend to a bounded limit (J = 1/2) or to
// zero (J >= 1) there, so those nodes are dropped rather than divided by.
double q_noise_floor(const HusimiField& field) {
  double top = 0.0;
  for (double q : field.q) top = std::max(top, q);
  return std::max(kQFloor, 1e-14 * top);
}

// atanh(x)/x, 1 at x = 0
double atanh_over_x(double x) {
  if (std::abs(x) < 1e-4) return 1.0 + x * x / 3.0 + x * x * x * x / 5.0;
  return std::atanh(x) / x;
}

void check_populations(std::span<const double> p, SpinQuantumNumber j) {
  if (p.size() != static_cast<std::size_t>(j.dim())) {
    throw DimensionMismatch("expected " + std::to_string(j.dim()) + " populations, got " + std::to_string(p.size()));
  }
}

double jz_mean(std::span<const double> p, SpinQuantumNumber j) {
  double s = 0.0;
  for (int i = 0; i < j.dim(); ++i) s += p[static_cast<std::size_t>(i)] * j.m(i);
  return s;
}

std::vector<double> to_vector(const Eigen::VectorXd& v) { return {v.data(), v.data() + v.size()}; }

BathParams bath_at(const DissipatorSpec& d, double t) {
  return std::visit(overloaded{
                        [](const Dephasing&) { return BathParams(0.0, 0.0); },
                        [](const AmplitudeDamping& x) { return BathParams(x.gamma, x.nbar); },
                        [t](const TimeDependentDamping& x) {
                          const double g = x.gamma_t(t);
                          if (!(g >= 0.0)) {
                            throw NonMarkovianRate("damping rate " + std::to_string(g) + " < 0 at t = " +
                                                   std::to_string(t));
                          }
                          return BathParams(g, 0.0);
                        },
                    },
                    d);
}

// bath occupation seen by adapted_grid; negative for dephasing
double grid_nbar(const DissipatorSpec& d) {
  if (const auto* ad = std::get_if<AmplitudeDamping>(&d)) return ad->nbar;
  if (std::holds_alternative<TimeDependentDamping>(d)) return 0.0;
  return -1.0;
}

Matrix dissipator_image(const DensityMatrix& rho, const DissipatorSpec& d, double t) {
  return LindbladModel(rho.spin(), StaticJz{0.0}, d).dissipator(rho.matrix(), t);
}

// Phi_vN / Phi_E * omega = ln(1 + 1/nbar), i.e. omega / T.
double vn_flux(double phi_energy_per_omega, double nbar) {
  if (nbar == 0.0) {
    if (phi_energy_per_omega == 0.0) return 0.0;
    return phi_energy_per_omega > 0.0 ? kInf : -kInf;
  }
  return phi_energy_per_omega * std::log1p(1.0 / nbar);
}

}  // namespace

std::string_view to_string(RateMethod m) {
  switch (m) {
    case RateMethod::quadrature: return "quadrature";
    case RateMethod::closed_form_spin_half: return "closed_form_spin_half";
    case RateMethod::exact_hypergeom: return "exact_hypergeom";
    case RateMethod::zero_T: return "zero_T";
    case RateMethod::asymptotic: return "asymptotic";
    case RateMethod::von_neumann: return "von_neumann";
  }
  return "unknown";
}

BathParams::BathParams(double gamma, double nbar) : gamma_(gamma), nbar_(nbar) {
  if (!(gamma >= 0.0) || !std::isfinite(gamma)) throw InvalidRate("damping rate gamma must be finite and >= 0");
  if (!(nbar >= 0.0) || !std::isfinite(nbar)) throw InvalidRate("bath occupation nbar must be finite and >= 0");
}

BathParams BathParams::from_temperature(double gamma, double omega, double temperature) {
  return {gamma, nbar_from_temperature(omega, temperature)};
}

BathParams BathParams::from_tau_bar(double gamma, double tau_bar_z) {
  if (!(tau_bar_z >= -1.0) || !(tau_bar_z < 0.0)) throw InvalidRate("tau_bar_z must lie in [-1, 0)");
  return {gamma, tau_bar_z == -1.0 ? 0.0 : 0.5 * (-1.0 / tau_bar_z - 1.0)};
}

double coherence_bracket(double x) {
  const double a = std::abs(x);
  if (a >= 1.0) return 1.0;
  if (a < 0.1) {
    // sum_k 2 x^(2k-2) / (4k^2 - 1)
    const double x2 = a * a;
    double sum = 0.0;
    double pw = 1.0;
    for (int k = 1; k <= 12; ++k) {
      sum += 2.0 * pw / (4.0 * k * k - 1.0);
      pw *= x2;
    }
    return sum;
  }
  return (a - (1.0 - a * a) * std::atanh(a)) / (a * a * a);
}

// -- Dephasing ----------------------------------------------------------------

double dephasing_pi_quadrature(const HusimiField& field, double lambda) {
  const SphereGrid& g = *field.grid;
  const double floor = q_noise_floor(field);
  const double integral = accumulate(g, [&](std::size_t idx) {
    if (field.q[idx] <= floor) return 0.0;
    const double dphi = field.dq_dphi[idx];
    return dphi * dphi / field.q[idx];
  });
  return 0.5 * lambda * prefactor(field.spin) * integral;
}

double dephasing_pi_spin_half(const BlochVector& b, double lambda) {
  return 0.25 * lambda * b.transverse_sq() * coherence_bracket(b.norm());
}

double dephasing_pi_von_neumann(const BlochVector& b, double lambda) {
  const double perp = b.transverse_sq();
  if (perp == 0.0 || lambda == 0.0) return 0.0;
  const double tau = b.norm();
  if (tau >= 1.0 - kPureEdge) return kInf;
  return 0.5 * lambda * perp * atanh_over_x(tau);
}

// -- Amplitude damping ----------------------------------------------------------

double damping_phi_quadrature(const HusimiField& field, const BathParams& bath) {
  const SphereGrid& g = *field.grid;
  const double j = field.spin.j();
  const double coth = 2.0 * bath.nbar() + 1.0;
  const double integral = accumulate(g, [&](std::size_t idx) {
    const double s = g.node_sin_theta[idx];
    const double c = g.node_cos_theta[idx];
    return s * (2.0 * j * field.q[idx] * s / (coth - c) - field.dq_dtheta[idx]);
  });
  return prefactor(field.spin) * bath.gamma() * j * integral;
}

DampingProduction damping_pi_quadrature(const HusimiField& field, const BathParams& bath) {
  const SphereGrid& g = *field.grid;
  const double j = field.spin.j();
  const double coth = 2.0 * bath.nbar() + 1.0;
  const double scale = 0.5 * bath.gamma() * prefactor(field.spin);
  const double floor = q_noise_floor(field);

  const double damping = accumulate(g, [&](std::size_t idx) {
    if (field.q[idx] <= floor) return 0.0;
    const double s = g.node_sin_theta[idx];
    const double c = g.node_cos_theta[idx];
    const double num = 2.0 * j * field.q[idx] * s + (c - coth) * field.dq_dtheta[idx];
    return num * num / ((coth - c) * field.q[idx]);
  });
  const double coherence = accumulate(g, [&](std::size_t idx) {
    if (field.q[idx] <= floor) return 0.0;
    const double s = g.node_sin_theta[idx];
    const double c = g.node_cos_theta[idx];
    const double dphi = field.dq_dphi[idx];
    return dphi * dphi * (coth * c - 1.0) * c / (s * s * field.q[idx]);
  });
  return {scale * damping, scale * coherence};
}

RefinedProduction damping_pi_refined(const DensityMatrix& rho, const BathParams& bath, const SphereGrid& grid,
                                     double rel_tol) {
  auto coarse = adapted_grid(rho, std::make_shared<const SphereGrid>(grid), bath.nbar());
  auto fine = adapted_grid(rho, make_shared_grid(2 * grid.n_theta, 2 * grid.n_phi), bath.nbar());
  RefinedProduction out;
  out.value = damping_pi_quadrature(husimi(rho, coarse), bath).total();
  out.refined_value = damping_pi_quadrature(husimi(rho, fine), bath).total();
  const double scale = std::max(std::abs(out.refined_value), 1e-300);
  out.reliable = std::abs(out.value - out.refined_value) <= rel_tol * scale ||
                 std::abs(out.value - out.refined_value) <= 1e-14 * std::max(1.0, bath.gamma());
  return out;
}

double damping_phi_exact(std::span<const double> populations, const BathParams& bath, SpinQuantumNumber spin) {
  check_populations(populations, spin);
  if (bath.zero_temperature()) {
    throw ZeroTemperatureBranch("exact flux needs nbar > 0; use the zero-temperature formula");
  }
  const double j = spin.j();
  const double tb = bath.tau_bar_z();
  const double z = 2.0 * tb / (tb - 1.0);
  const double c = 3.0 + 2.0 * j;
  const double second_coeff = (1.0 + 4.0 * j + 1.0 / tb) / (1.0 - tb);

  double sum = 0.0;
  for (int i = 0; i < spin.dim(); ++i) {
    const double p = populations[static_cast<std::size_t>(i)];
    if (p == 0.0) continue;
    const double m = spin.m(i);
    const double f1 = gauss_2f1(1.0, 1.0 + j + m, c, z);
    const double f2 = gauss_2f1(1.0, 2.0 + j + m, c, z);
    sum += p * ((1.0 + j - m) / tb * f1 + (1.0 + j + m) * second_coeff * f2);
  }
  const double jz = jz_mean(populations, spin);
  return bath.gamma() * j * ((1.0 + tb) / tb + 2.0 * (j + jz) - 0.5 * (1.0 + tb) / (1.0 + j) * sum);
}

double damping_phi_exact(const DensityMatrix& rho, const BathParams& bath) {
  const auto p = to_vector(rho.populations());
  return damping_phi_exact(p, bath, rho.spin());
}

double damping_phi_zero_T(double jz_expect, double gamma, SpinQuantumNumber j) {
  return 2.0 * gamma * j.j() * (j.j() + jz_expect);
}

double damping_phi_asymptotic(std::span<const double> populations, const BathParams& bath, SpinQuantumNumber spin) {
  check_populations(populations, spin);
  const double j = spin.j();
  const double tb = bath.tau_bar_z();
  const double jz = jz_mean(populations, spin);
  if (bath.zero_temperature()) return damping_phi_zero_T(jz, bath.gamma(), spin);

  // The bracket is averaged over the populations, m in place of <Jz>.
  double avg = 0.0;
  for (int i = 0; i < spin.dim(); ++i) {
    const double p = populations[static_cast<std::size_t>(i)];
    const double m = spin.m(i);
    const double up = (1.0 + j + m) * (1.0 + (1.0 + 4.0 * j) * tb) / (3.0 + 2.0 * j + (2.0 * m + 1.0) * tb);
    const double down = (1.0 + j - m) * (tb - 1.0) / (3.0 + 2.0 * j + (2.0 * m - 1.0) * tb);
    avg += p * (up - down);
  }
  const double bracket = 1.0 - (3.0 + 2.0 * j) / (2.0 * (1.0 + j)) * avg;
  return 2.0 * bath.gamma() * j * (j + jz + (1.0 + tb) / (2.0 * tb) * bracket);
}

double damping_phi(const DensityMatrix& rho, const BathParams& bath) {
  if (bath.zero_temperature()) {
    const auto p = to_vector(rho.populations());
    return damping_phi_zero_T(jz_mean(p, rho.spin()), bath.gamma(), rho.spin());
  }
  return damping_phi_exact(rho, bath);
}

double energy_flux(const DensityMatrix& rho, const BathParams& bath, double omega) {
  const SpinQuantumNumber spin = rho.spin();
  const double j = spin.j();
  double jz = 0.0;
  double jz2 = 0.0;
  for (int i = 0; i < spin.dim(); ++i) {
    const double p = rho(i, i).real();
    const double m = spin.m(i);
    jz += p * m;
    jz2 += p * m * m;
  }
  const double tb = bath.tau_bar_z();
  return bath.gamma() * omega / tb * (tb * (j * (j + 1.0) - jz2) - jz);
}

double energy_flux_direct(const Matrix& hamiltonian, const Matrix& dissipator_image) {
  if (hamiltonian.rows() != dissipator_image.rows() || hamiltonian.cols() != dissipator_image.cols()) {
    throw DimensionMismatch("Hamiltonian and dissipator image differ in size");
  }
  return -(hamiltonian * dissipator_image).trace().real();
}

EntropyRates spin_half_damping_rates(const BlochVector& b, const BathParams& bath, double omega) {
  const double tb = bath.tau_bar_z();
  const double gamma = bath.gamma();
  EntropyRates r;
  r.method = bath.zero_temperature() ? RateMethod::zero_T : RateMethod::closed_form_spin_half;
  r.phi = 0.5 * gamma * coherence_bracket(tb) * (b.z - tb);
  const double tau2 = b.norm() * b.norm();
  r.pi = r.phi + 0.5 * gamma * (2.0 * tb * b.z - (tau2 + b.z * b.z)) / (2.0 * tb) * coherence_bracket(b.norm());
  r.ds_dt = r.pi - r.phi;
  r.phi_energy = gamma * omega / (2.0 * tb) * (tb - b.z);
  return r;
}

EntropyRates spin_half_damping_von_neumann(const BlochVector& b, const BathParams& bath, double omega) {
  const double tb = bath.tau_bar_z();
  const double gamma = bath.gamma();
  const double tau = b.norm();
  EntropyRates r;
  r.method = RateMethod::von_neumann;
  r.phi_energy = gamma * omega / (2.0 * tb) * (tb - b.z);

  const double off_eq = b.z - tb;
  if (gamma == 0.0 || off_eq == 0.0) {
    r.phi = 0.0;
  } else if (bath.zero_temperature()) {
    r.phi = off_eq > 0.0 ? kInf : -kInf;
  } else {
    r.phi = gamma * atanh_over_x(tb) * off_eq;
  }

  const double coeff = tau * tau + b.z * (b.z - 2.0 * tb);
  double production_extra = 0.0;
  if (gamma != 0.0 && coeff != 0.0) {
    if (tau >= 1.0 - kPureEdge) {
      // -(gamma/2) atanh(tau)/(tau tb) * coeff with tb < 0
      production_extra = coeff > 0.0 ? kInf : -kInf;
    } else {
      production_extra = -0.5 * gamma * atanh_over_x(tau) / tb * coeff;
    }
  }
  r.ds_dt = production_extra;
  r.pi = r.phi + production_extra;
  if (std::isnan(r.pi)) r.pi = kInf;  // two opposite divergences
  return r;
}

double clausius_ratio(const EntropyRates& rates, double temperature, SpinQuantumNumber j) {
  if (rates.phi_energy == 0.0 || !std::isfinite(rates.phi_energy)) {
    throw UndefinedRatio("energy flux is zero; Clausius ratio undefined");
  }
  return rates.phi * temperature * (1.0 + 1.0 / j.j()) / rates.phi_energy;
}

// -- Entropy balance ----------------------------------------------------------

double dissipative_entropy_rate(const HusimiField& field, std::span<const double> dissipator_field) {
  if (dissipator_field.size() != field.q.size()) {
    throw DimensionMismatch("dissipator field does not match the Husimi grid");
  }
  const double integral = accumulate(*field.grid, [&](std::size_t idx) {
    return dissipator_field[idx] * std::log(std::max(field.q[idx], kQFloor));
  });
  return -prefactor(field.spin) * integral;
}

double dissipative_entropy_rate(const DensityMatrix& rho, const LindbladModel& model, double t, GridPtr grid) {
  if (rho.spin() != model.spin()) throw DimensionMismatch("state does not match the model spin");
  grid = adapted_grid(rho, grid, grid_nbar(model.dissipator_spec()));
  const HusimiField field = husimi(rho, grid);
  const HusimiField image = husimi_of_operator(rho.spin(), model.dissipator(rho.matrix(), t), grid);
  return dissipative_entropy_rate(field, image.q);
}

EntropyRates wehrl_rates_quadrature(const DensityMatrix& rho, const DissipatorSpec& d, double t, double omega,
                                    GridPtr grid) {
  grid = adapted_grid(rho, grid, grid_nbar(d));
  const HusimiField field = husimi(rho, grid);
  const Matrix image = dissipator_image(rho, d, t);
  const HusimiField image_field = husimi_of_operator(rho.spin(), image, grid);
  const Matrix h = omega * make_spin_operators(rho.spin()).jz;

  EntropyRates r;
  r.method = RateMethod::quadrature;
  r.ds_dt = dissipative_entropy_rate(field, image_field.q);
  r.phi_energy = energy_flux_direct(h, image);
  if (const auto* deph = std::get_if<Dephasing>(&d)) {
    r.pi = dephasing_pi_quadrature(field, deph->lambda);
    r.phi = 0.0;
  } else {
    const BathParams bath = bath_at(d, t);
    r.pi = damping_pi_quadrature(field, bath).total();
    r.phi = damping_phi_quadrature(field, bath);
  }
  return r;
}

EntropyRates von_neumann_rates(const DensityMatrix& rho, const DissipatorSpec& d, double t, double omega) {
  const Matrix image = dissipator_image(rho, d, t);
  const Matrix h = omega * make_spin_operators(rho.spin()).jz;

  EntropyRates r;
  r.method = RateMethod::von_neumann;
  r.phi_energy = energy_flux_direct(h, image);

  // dS/dt = -sum_k <k|D|k> ln p_k over the eigenbasis of rho
  const Eigen::SelfAdjointEigenSolver<Matrix> es(rho.matrix());
  const auto& vals = es.eigenvalues();
  const auto& vecs = es.eigenvectors();
  double ds = 0.0;
  for (Eigen::Index k = 0; k < vals.size(); ++k) {
    const double flow = (vecs.col(k).adjoint() * image * vecs.col(k))(0, 0).real();
    if (vals(k) < 1e-15) {
      if (flow > 1e-14) {
        ds = kInf;
        break;
      }
      continue;
    }
    ds -= flow * std::log(vals(k));
  }
  r.ds_dt = ds;

  if (std::holds_alternative<Dephasing>(d)) {
    r.phi = 0.0;
  } else {
    const BathParams bath = bath_at(d, t);
    r.phi = vn_flux(energy_flux(rho, bath, 1.0), bath.nbar());
  }
  r.pi = r.ds_dt + r.phi;
  if (std::isnan(r.pi)) r.pi = kInf;
  return r;
}

double total_entropy_produced(std::span<const double> times, std::span<const double> pi, double tail_tol) {
  if (times.size() != pi.size()) throw DimensionMismatch("times and production samples differ in length");
  if (times.size() < 2) return 0.0;
  if (!(std::abs(pi.back()) < tail_tol)) {
    throw TailNotConverged("entropy production has not decayed: |Pi| = " + std::to_string(std::abs(pi.back())) +
                           " at t = " + std::to_string(times.back()));
  }
  double sigma = 0.0;
  for (std::size_t i = 1; i < times.size(); ++i) sigma += 0.5 * (times[i] - times[i - 1]) * (pi[i] + pi[i - 1]);
  return sigma;
}

double total_entropy_produced(const Trajectory& trajectory,
                              const std::function<double(const DensityMatrix&, double)>& rate_fn, double tail_tol) {
  std::vector<double> pi;
  pi.reserve(trajectory.states.size());
  for (std::size_t i = 0; i < trajectory.states.size(); ++i) pi.push_back(rate_fn(trajectory.states[i], trajectory.times[i]));
  return total_entropy_produced(trajectory.times, pi, tail_tol);
}

}  // namespace spinwehrl
