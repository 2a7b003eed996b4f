#include "spinwehrl/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "spinwehrl/errors.hpp"

namespace spinwehrl {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

Matrix anticommutator(const Matrix& a, const Matrix& b) { return a * b + b * a; }

}  // namespace

Matrix hamiltonian_matrix(const HamiltonianSpec& h, const SpinOperators& ops, double t) {
  return std::visit(overloaded{
                        [&](const StaticJz& s) -> Matrix { return s.omega * ops.jz; },
                        [&](const RotatingField& r) -> Matrix {
                          const double wt = r.drive_omega * t;
                          return -r.b0 * ops.jz - r.b1 * (std::cos(wt) * ops.jx + std::sin(wt) * ops.jy);
                        },
                        [&](const PulseEffective& p) -> Matrix {
                          return (p.omega_t ? p.omega_t(t) : 0.0) * ops.jz;
                        },
                    },
                    h);
}

void validate_dissipator(const DissipatorSpec& d) {
  std::visit(overloaded{
                 [](const Dephasing& x) {
                   if (!(x.lambda >= 0.0)) throw InvalidRate("dephasing rate lambda must be >= 0");
                 },
                 [](const AmplitudeDamping& x) {
                   if (!(x.gamma >= 0.0)) throw InvalidRate("damping rate gamma must be >= 0");
                   if (!(x.nbar >= 0.0)) throw InvalidRate("bath occupation nbar must be >= 0");
                 },
                 [](const TimeDependentDamping& x) {
                   if (!x.gamma_t) throw InvalidRate("time-dependent damping needs a rate function");
                 },
             },
             d);
}

Matrix dephasing_dissipator(const Matrix& rho, const SpinOperators& ops, double lambda) {
  // Jz is diagonal: [Jz,[Jz,rho]]_kl = (m_k - m_l)^2 rho_kl
  const Eigen::Index d = rho.rows();
  Matrix out(d, d);
  for (Eigen::Index k = 0; k < d; ++k) {
    for (Eigen::Index l = 0; l < d; ++l) {
      const double dm = ops.jz(k, k).real() - ops.jz(l, l).real();
      out(k, l) = -0.5 * lambda * dm * dm * rho(k, l);
    }
  }
  return out;
}

Matrix dephasing_dissipator(const DensityMatrix& rho, double lambda) {
  return dephasing_dissipator(rho.matrix(), make_spin_operators(rho.spin()), lambda);
}

Matrix amplitude_damping_dissipator(const Matrix& rho, const SpinOperators& ops, double gamma, double nbar) {
  const Matrix pm = ops.jp * ops.jm;
  const Matrix mp = ops.jm * ops.jp;
  Matrix out = gamma * (nbar + 1.0) * (ops.jm * rho * ops.jp - 0.5 * anticommutator(pm, rho));
  if (nbar != 0.0) out += gamma * nbar * (ops.jp * rho * ops.jm - 0.5 * anticommutator(mp, rho));
  return out;
}

Matrix amplitude_damping_dissipator(const DensityMatrix& rho, double gamma, double nbar) {
  return amplitude_damping_dissipator(rho.matrix(), make_spin_operators(rho.spin()), gamma, nbar);
}

Matrix current_superoperator_f(const Matrix& rho, const SpinOperators& ops, double nbar) {
  return (nbar + 1.0) * rho * ops.jp - nbar * ops.jp * rho;
}

Matrix current_superoperator_f(const DensityMatrix& rho, double nbar) {
  return current_superoperator_f(rho.matrix(), make_spin_operators(rho.spin()), nbar);
}

LindbladModel::LindbladModel(SpinQuantumNumber j, HamiltonianSpec h, DissipatorSpec d)
    : j_(j), ops_(make_spin_operators(j)), h_(std::move(h)), d_(std::move(d)) {
  validate_dissipator(d_);
}

Matrix LindbladModel::hamiltonian(double t) const { return hamiltonian_matrix(h_, ops_, t); }

Matrix LindbladModel::dissipator(const Matrix& rho, double t) const {
  return std::visit(overloaded{
                        [&](const Dephasing& x) { return dephasing_dissipator(rho, ops_, x.lambda); },
                        [&](const AmplitudeDamping& x) {
                          return amplitude_damping_dissipator(rho, ops_, x.gamma, x.nbar);
                        },
                        [&](const TimeDependentDamping& x) {
                          const double g = x.gamma_t(t);
                          if (!(g >= 0.0)) {
                            throw NonMarkovianRate("damping rate " + std::to_string(g) + " < 0 at t = " +
                                                   std::to_string(t));
                          }
                          return amplitude_damping_dissipator(rho, ops_, g, 0.0);
                        },
                    },
                    d_);
}

Matrix LindbladModel::rhs(const Matrix& rho, double t) const {
  const Matrix h = hamiltonian(t);
  Matrix out = dissipator(rho, t);
  out += cplx(0.0, -1.0) * (h * rho - rho * h);
  return out;
}

Matrix lindblad_rhs(const DensityMatrix& rho, double t, const HamiltonianSpec& h, const DissipatorSpec& d) {
  return LindbladModel(rho.spin(), h, d).rhs(rho.matrix(), t);
}

std::vector<double> uniform_time_grid(double t_max, double dt, double t0) {
  if (!(dt > 0.0) || !(t_max > t0)) throw InvalidTimeGrid("need dt > 0 and t_max > t0");
  const auto n = static_cast<long>(std::ceil((t_max - t0) / dt - 1e-9));
  std::vector<double> t;
  t.reserve(static_cast<std::size_t>(n + 1));
  for (long i = 0; i <= n; ++i) t.push_back(std::min(t0 + static_cast<double>(i) * dt, t_max));
  return t;
}

namespace {

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784, b6 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                 e6 = 22.0 / 525, e7 = -1.0 / 40;

double error_norm(const Matrix& err, const Matrix& y0, const Matrix& y1, double tol) {
  double worst = 0.0;
  for (Eigen::Index i = 0; i < err.size(); ++i) {
    const double scale = tol * (1.0 + std::max(std::abs(y0(i)), std::abs(y1(i))));
    worst = std::max(worst, std::abs(err(i)) / scale);
  }
  return worst;
}

}  // namespace

Trajectory evolve(const DensityMatrix& rho0, const LindbladModel& model, const std::vector<double>& t_grid,
                  const EvolveOptions& opts) {
  if (t_grid.empty()) throw InvalidTimeGrid("empty time grid");
  for (std::size_t i = 1; i < t_grid.size(); ++i) {
    if (!(t_grid[i] > t_grid[i - 1])) throw InvalidTimeGrid("time grid must be strictly increasing");
  }
  if (!(opts.tol > 0.0)) throw InvalidRate("integrator tolerance must be > 0");
  if (rho0.spin() != model.spin()) throw DimensionMismatch("initial state does not match the model spin");

  Trajectory traj;
  traj.times = t_grid;
  traj.states.reserve(t_grid.size());
  traj.states.push_back(rho0);

  const SpinQuantumNumber j = model.spin();
  const double span = t_grid.back() - t_grid.front();
  const double h_min = opts.min_step * std::max(1.0, std::abs(span));
  StateTolerances stored_tol;
  stored_tol.min_eigenvalue = -1e-8;
  stored_tol.hermiticity = 1e-12;
  stored_tol.trace = 1e-12;

  Matrix y = rho0.matrix();
  double t = t_grid.front();
  Matrix k1 = model.rhs(y, t);
  double h = opts.initial_step;
  if (!(h > 0.0)) {
    const double f = k1.cwiseAbs().maxCoeff();
    h = f > 0.0 ? 0.01 * std::pow(opts.tol, 0.2) / f : 0.1 * span;
    h = std::min(h, span > 0.0 ? span : 1.0);
  }

  Matrix k2, k3, k4, k5, k6, k7, y_new, err;
  for (std::size_t out = 1; out < t_grid.size(); ++out) {
    const double t_target = t_grid[out];
    while (t < t_target) {
      if (traj.diagnostics.accepted_steps + traj.diagnostics.rejected_steps > opts.max_steps) {
        throw StiffnessFailure("step budget exhausted at t = " + std::to_string(t));
      }
      const bool last = t + h >= t_target;
      const double h_step = last ? t_target - t : h;
      const double hs = h_step;
      k2 = model.rhs(y + hs * (a21 * k1), t + c2 * hs);
      k3 = model.rhs(y + hs * (a31 * k1 + a32 * k2), t + c3 * hs);
      k4 = model.rhs(y + hs * (a41 * k1 + a42 * k2 + a43 * k3), t + c4 * hs);
      k5 = model.rhs(y + hs * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4), t + c5 * hs);
      k6 = model.rhs(y + hs * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5), t + hs);
      y_new = y + hs * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
      const double t_new = last ? t_target : t + hs;
      k7 = model.rhs(y_new, t_new);
      err = hs * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
      const double en = error_norm(err, y, y_new, opts.tol);

      if (en <= 1.0) {
        const double drift = std::max(std::abs(y_new.trace() - cplx(1.0)),
                                      (y_new - y_new.adjoint()).cwiseAbs().maxCoeff());
        traj.diagnostics.max_drift = std::max(traj.diagnostics.max_drift, drift);
        y = 0.5 * (y_new + y_new.adjoint());
        y /= y.trace().real();
        t = t_new;
        // FSAL: k7 was evaluated at the unnormalized y_new; recompute on the
        // renormalized state only when it actually changed.
        k1 = drift > 0.0 ? model.rhs(y, t) : k7;
        ++traj.diagnostics.accepted_steps;
        const double grow = en > 0.0 ? 0.9 * std::pow(en, -0.2) : 5.0;
        // A step clipped onto an output time says nothing about h itself.
        if (!last || h_step >= h) h = h_step * std::clamp(grow, 0.2, 5.0);
      } else {
        ++traj.diagnostics.rejected_steps;
        h = h_step * std::clamp(0.9 * std::pow(en, -0.2), 0.1, 0.9);
        if (h < h_min) throw StiffnessFailure("step size underflow at t = " + std::to_string(t));
      }
    }
    traj.states.emplace_back(j, y, stored_tol);
  }
  return traj;
}

Trajectory evolve(const DensityMatrix& rho0, const HamiltonianSpec& h, const DissipatorSpec& d,
                  const std::vector<double>& t_grid, double tol) {
  EvolveOptions opts;
  opts.tol = tol;
  return evolve(rho0, LindbladModel(rho0.spin(), h, d), t_grid, opts);
}

}  // namespace spinwehrl
