#include "spinwehrl/phase_space.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <ostream>
#include <string>

#include "spinwehrl/errors.hpp"

namespace spinwehrl {

namespace {

constexpr double kPi = std::numbers::pi;

// Integer power by repeated multiplication; ipow(0, 0) == 1.
template <typename T>
T ipow(T x, int n) {
  T r(1.0);
  for (int i = 0; i < n; ++i) r *= x;
  return r;
}

// sqrt of the binomial coefficient C(n, k), built as a running product.
double sqrt_binomial(int n, int k) {
  double c = 1.0;
  for (int i = 1; i <= k; ++i) c = c * (n - k + i) / i;
  return std::sqrt(c);
}

double factorial(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

// Real theta-profile A_m(theta) = sqrt(C(2J, J+m)) cos^{J+m}(t/2) sin^{J-m}(t/2)
// and its theta derivative, for every basis index.
void theta_profile(SpinQuantumNumber j, double theta, Eigen::VectorXd& a, Eigen::VectorXd& da) {
  const int d = j.dim();
  const int two_j = j.two_j();
  const double c = std::cos(0.5 * theta);
  const double s = std::sin(0.5 * theta);
  a.resize(d);
  da.resize(d);
  for (int k = 0; k < d; ++k) {
    const int p = two_j - k;  // J + m
    const int q = k;          // J - m
    const double norm = sqrt_binomial(two_j, p);
    a(k) = norm * ipow(c, p) * ipow(s, q);
    double deriv = 0.0;
    if (p > 0) deriv -= 0.5 * p * ipow(c, p - 1) * ipow(s, q + 1);
    if (q > 0) deriv += 0.5 * q * ipow(c, p + 1) * ipow(s, q - 1);
    da(k) = norm * deriv;
  }
}

HusimiField transform(SpinQuantumNumber j, const Matrix& op, GridPtr grid) {
  if (!grid) throw InvalidGrid("null grid");
  const int d = j.dim();
  if (op.rows() != d || op.cols() != d) throw DimensionMismatch("operator does not match spin");

  HusimiField field;
  field.spin = j;
  field.grid = grid;
  const std::size_t n = grid->size();
  field.q.resize(n);
  field.dq_dtheta.resize(n);
  field.dq_dphi.resize(n);

  // phase(k, node_phi) = exp(-i m_k phi)
  Eigen::MatrixXcd phases(d, grid->n_phi);
  for (int l = 0; l < grid->n_phi; ++l) {
    for (int k = 0; k < d; ++k) phases(k, l) = std::polar(1.0, -j.m(k) * grid->phi_nodes[l]);
  }
  Eigen::VectorXd mvals(d);
  for (int k = 0; k < d; ++k) mvals(k) = j.m(k);

  Eigen::VectorXd a, da;
  Eigen::VectorXcd c(d), dc(d), dphi(d), opc(d);
  auto store = [&](std::size_t idx) {
    dphi = cplx(0.0, -1.0) * mvals.cast<cplx>().cwiseProduct(c);
    opc.noalias() = op * c;
    field.q[idx] = c.dot(opc).real();
    field.dq_dtheta[idx] = 2.0 * dc.dot(opc).real();
    field.dq_dphi[idx] = 2.0 * dphi.dot(opc).real();
  };

  if (grid->tilted()) {
    for (std::size_t idx = 0; idx < n; ++idx) {
      const auto cs = coherent_state(j, grid->node_theta[idx], grid->node_phi[idx]);
      c = cs.amplitudes;
      dc = cs.d_theta;
      store(idx);
    }
    return field;
  }

  for (int i = 0; i < grid->n_theta; ++i) {
    theta_profile(j, grid->theta_nodes[i], a, da);
    for (int l = 0; l < grid->n_phi; ++l) {
      c = a.cast<cplx>().cwiseProduct(phases.col(l));
      dc = da.cast<cplx>().cwiseProduct(phases.col(l));
      store(grid->index(i, l));
    }
  }
  return field;
}

}  // namespace

double SphereGrid::integrate(const std::vector<double>& values) const {
  double s = 0.0;
  for (std::size_t i = 0; i < weights.size(); ++i) s += weights[i] * values[i];
  return s;
}

void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights) {
  nodes.assign(static_cast<std::size_t>(n), 0.0);
  weights.assign(static_cast<std::size_t>(n), 0.0);
  const int half = (n + 1) / 2;
  for (int i = 0; i < half; ++i) {
    double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    nodes[static_cast<std::size_t>(i)] = -x;
    nodes[static_cast<std::size_t>(n - 1 - i)] = x;
    weights[static_cast<std::size_t>(i)] = w;
    weights[static_cast<std::size_t>(n - 1 - i)] = w;
  }
}

SphereGrid make_grid(int n_theta, int n_phi) {
  if (n_theta < 8 || n_phi < 8) {
    throw InvalidGrid("grid needs n_theta >= 8 and n_phi >= 8, got " + std::to_string(n_theta) + "x" +
                      std::to_string(n_phi));
  }
  SphereGrid g;
  g.n_theta = n_theta;
  g.n_phi = n_phi;
  std::vector<double> u, wu;
  gauss_legendre(n_theta, u, wu);
  // theta ascending means cos(theta) descending.
  g.theta_nodes.resize(static_cast<std::size_t>(n_theta));
  g.cos_theta.resize(static_cast<std::size_t>(n_theta));
  g.sin_theta.resize(static_cast<std::size_t>(n_theta));
  std::vector<double> wt(static_cast<std::size_t>(n_theta));
  for (int i = 0; i < n_theta; ++i) {
    const auto src = static_cast<std::size_t>(n_theta - 1 - i);
    const auto dst = static_cast<std::size_t>(i);
    g.cos_theta[dst] = u[src];
    g.theta_nodes[dst] = std::acos(u[src]);
    g.sin_theta[dst] = std::sqrt((1.0 - u[src]) * (1.0 + u[src]));
    wt[dst] = wu[src];
  }
  const double dphi = 2.0 * kPi / n_phi;
  g.phi_nodes.resize(static_cast<std::size_t>(n_phi));
  for (int k = 0; k < n_phi; ++k) g.phi_nodes[static_cast<std::size_t>(k)] = k * dphi;
  g.weights.resize(static_cast<std::size_t>(n_theta) * static_cast<std::size_t>(n_phi));
  const std::size_t n = g.size();
  g.node_theta.resize(n);
  g.node_phi.resize(n);
  g.node_cos_theta.resize(n);
  g.node_sin_theta.resize(n);
  for (int i = 0; i < n_theta; ++i) {
    const auto ii = static_cast<std::size_t>(i);
    for (int k = 0; k < n_phi; ++k) {
      const std::size_t idx = g.index(i, k);
      g.weights[idx] = wt[ii] * dphi;
      g.node_theta[idx] = g.theta_nodes[ii];
      g.node_phi[idx] = g.phi_nodes[static_cast<std::size_t>(k)];
      g.node_cos_theta[idx] = g.cos_theta[ii];
      g.node_sin_theta[idx] = g.sin_theta[ii];
    }
  }
  return g;
}

SphereGrid rotated_grid(const SphereGrid& base, double pole_theta, double pole_phi, double clustering_north,
                        double clustering_south) {
  SphereGrid g = base;
  g.pole_theta = pole_theta;
  g.pole_phi = pole_phi;
  if (clustering_north > 0.0 || clustering_south > 0.0) {
    const int n_north = g.n_theta / 2;
    const int n_south = g.n_theta - n_north;
    const double dphi = 2.0 * kPi / g.n_phi;
    std::vector<double> s, ws;
    // ring i gets distance from the panel's pole d = 1 -/+ u and dd/dx
    auto panel = [&](int count, double c, int first, bool north) {
      gauss_legendre(count, s, ws);
      for (int r = 0; r < count; ++r) {
        const auto rr = static_cast<std::size_t>(r);
        const double x = 0.5 * (s[rr] + 1.0);
        double d = x;
        double dd = 1.0;
        if (c > 0.0) {
          d = std::expm1(c * x) / std::expm1(c);
          dd = c * std::exp(c * x) / std::expm1(c);
        }
        // north rings run outward from the pole, south rings inward to it
        const int i = north ? first + r : first + count - 1 - r;
        const auto ii = static_cast<std::size_t>(i);
        g.cos_theta[ii] = north ? 1.0 - d : d - 1.0;
        g.sin_theta[ii] = std::sqrt(d * (2.0 - d));
        g.theta_nodes[ii] = std::atan2(g.sin_theta[ii], g.cos_theta[ii]);
        for (int k = 0; k < g.n_phi; ++k) g.weights[g.index(i, k)] = 0.5 * ws[rr] * dd * dphi;
      }
    };
    panel(n_north, clustering_north, 0, true);
    panel(n_south, clustering_south, n_north, false);
  }
  // lab = Rz(pole_phi) Ry(pole_theta) local
  const double ca = std::cos(pole_theta), sa = std::sin(pole_theta);
  const double cb = std::cos(pole_phi), sb = std::sin(pole_phi);
  for (int i = 0; i < g.n_theta; ++i) {
    const auto ii = static_cast<std::size_t>(i);
    for (int k = 0; k < g.n_phi; ++k) {
      const double ph = g.phi_nodes[static_cast<std::size_t>(k)];
      const double x0 = g.sin_theta[ii] * std::cos(ph);
      const double y0 = g.sin_theta[ii] * std::sin(ph);
      const double z0 = g.cos_theta[ii];
      const double x1 = ca * x0 + sa * z0;
      const double z = -sa * x0 + ca * z0;
      const double x = cb * x1 - sb * y0;
      const double y = sb * x1 + cb * y0;
      const double rho = std::hypot(x, y);
      const std::size_t idx = g.index(i, k);
      g.node_theta[idx] = std::atan2(rho, z);
      g.node_phi[idx] = std::atan2(y, x);
      g.node_cos_theta[idx] = z / std::hypot(rho, z);
      g.node_sin_theta[idx] = rho / std::hypot(rho, z);
    }
  }
  return g;
}

GridPtr make_shared_grid(int n_theta, int n_phi) {
  return std::make_shared<const SphereGrid>(make_grid(n_theta, n_phi));
}

GridPtr adapted_grid(const DensityMatrix& rho, const GridPtr& base, double nbar) {
  if (!base) throw InvalidGrid("null grid");
  auto clustering = [](double width) { return std::clamp(-std::log(std::max(width, 1e-300)), 2.0, 24.0); };

  const SpinOperators ops = make_spin_operators(rho.spin());
  const double x = expectation(rho, ops.jx).real();
  const double y = expectation(rho, ops.jy).real();
  const double z = expectation(rho, ops.jz).real();
  const double len = std::sqrt(x * x + y * y + z * z);
  const double eps = 1.0 - len / rho.spin().j();
  const bool state_dip = len > 0.0 && eps < 1e-2;
  const bool bath_dip = nbar > 0.0 && nbar < 0.05;
  if (!state_dip && !bath_dip) return base;

  const double c_bath = bath_dip ? clustering(2.0 * nbar) : 0.0;
  if (!state_dip) return std::make_shared<const SphereGrid>(rotated_grid(*base, 0.0, 0.0, c_bath));

  const double c_state = clustering(eps);
  const double axial = std::hypot(x, y) / len;
  if (axial < 1e-9) {
    // minimum of Q on the z axis: at the north pole when <Jz> < 0
    if (z < 0.0) return std::make_shared<const SphereGrid>(rotated_grid(*base, 0.0, 0.0, std::max(c_state, c_bath)));
    return std::make_shared<const SphereGrid>(rotated_grid(*base, 0.0, 0.0, c_bath, c_state));
  }
  return std::make_shared<const SphereGrid>(
      rotated_grid(*base, std::atan2(std::hypot(x, y), -z), std::atan2(-y, -x), c_state, 0.0));
}

CoherentStateVector coherent_state(SpinQuantumNumber j, double theta, double phi) {
  Eigen::VectorXd a, da;
  theta_profile(j, theta, a, da);
  const int d = j.dim();
  CoherentStateVector cs;
  cs.amplitudes.resize(d);
  cs.d_theta.resize(d);
  cs.d_phi.resize(d);
  for (int k = 0; k < d; ++k) {
    const double m = j.m(k);
    const cplx ph = std::polar(1.0, -m * phi);
    cs.amplitudes(k) = a(k) * ph;
    cs.d_theta(k) = da(k) * ph;
    cs.d_phi(k) = cplx(0.0, -m) * cs.amplitudes(k);
  }
  return cs;
}

double HusimiField::normalization() const {
  return (spin.two_j() + 1.0) / (4.0 * kPi) * grid->integrate(q);
}

HusimiField husimi(const DensityMatrix& rho, GridPtr grid) {
  return transform(rho.spin(), rho.matrix(), std::move(grid));
}

HusimiField husimi_of_operator(SpinQuantumNumber j, const Matrix& op, GridPtr grid) {
  return transform(j, op, std::move(grid));
}

double husimi_at(const DensityMatrix& rho, double theta, double phi) {
  const auto cs = coherent_state(rho.spin(), theta, phi);
  return cs.amplitudes.dot(rho.matrix() * cs.amplitudes).real();
}

double wehrl_entropy(const HusimiField& field) {
  const auto& w = field.grid->weights;
  double s = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    const double q = field.q[i];
    if (q > 0.0) s -= w[i] * q * std::log(q);
  }
  return (field.spin.two_j() + 1.0) / (4.0 * kPi) * s;
}

double wehrl_entropy_spin_half(double tau) {
  tau = std::abs(tau);
  if (tau >= 1.0) return 0.5;
  if (tau < 0.1) {
    // ln 2 - sum_k tau^{2k} / (2k (4k^2 - 1))
    double s = std::numbers::ln2;
    double t2k = 1.0;
    for (int k = 1; k <= 12; ++k) {
      t2k *= tau * tau;
      s -= t2k / (2.0 * k * (4.0 * k * k - 1.0));
    }
    return s;
  }
  auto antiderivative = [](double y) { return y > 0.0 ? y * y * (0.5 * std::log(y) - 0.25) : 0.0; };
  const double hi = 0.5 * (1.0 + tau);
  const double lo = 0.5 * (1.0 - tau);
  return -2.0 / tau * (antiderivative(hi) - antiderivative(lo));
}

PhaseSpaceCurrents phase_space_currents(const HusimiField& field) {
  const SphereGrid& g = *field.grid;
  PhaseSpaceCurrents out;
  const std::size_t n = g.size();
  out.j_plus.resize(n);
  out.j_minus.resize(n);
  out.j_z.resize(n);
  const cplx i1(0.0, 1.0);
  for (std::size_t idx = 0; idx < n; ++idx) {
    const double cot = g.node_cos_theta[idx] / g.node_sin_theta[idx];
    const double phi = g.node_phi[idx];
    const double dth = field.dq_dtheta[idx];
    const double dph = field.dq_dphi[idx];
    out.j_plus[idx] = std::polar(1.0, phi) * (dth + i1 * cot * dph);
    out.j_minus[idx] = -std::polar(1.0, -phi) * (dth - i1 * cot * dph);
    out.j_z[idx] = -i1 * dph;
  }
  return out;
}

void write_husimi_csv(const HusimiField& field, std::ostream& out) {
  const SphereGrid& g = *field.grid;
  out << "theta,phi,q\n";
  char buf[96];
  for (std::size_t idx = 0; idx < g.size(); ++idx) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", g.node_theta[idx], g.node_phi[idx], field.q[idx]);
    out << buf;
  }
}

// ---------------------------------------------------------------------------

VFunction::VFunction(const DensityMatrix& rho) : j_(rho.spin()), weighted_(rho.matrix()) {
  const int d = j_.dim();
  const int two_j = j_.two_j();
  Eigen::VectorXd norm(d);
  for (int k = 0; k < d; ++k) norm(k) = std::sqrt(factorial(two_j - k) * factorial(k));
  for (int k = 0; k < d; ++k) {
    for (int l = 0; l < d; ++l) weighted_(k, l) /= norm(k) * norm(l);
  }
}

namespace {

// u_k = alpha^{J+m_k} beta^{J-m_k} and its derivatives in alpha and beta.
struct Monomials {
  Eigen::VectorXcd u, du_alpha, du_beta;
};

Monomials monomials(int two_j, cplx alpha, cplx beta) {
  const int d = two_j + 1;
  Monomials mono;
  mono.u.resize(d);
  mono.du_alpha.resize(d);
  mono.du_beta.resize(d);
  for (int k = 0; k < d; ++k) {
    const int p = two_j - k;
    const int q = k;
    mono.u(k) = ipow(alpha, p) * ipow(beta, q);
    mono.du_alpha(k) = p > 0 ? static_cast<double>(p) * ipow(alpha, p - 1) * ipow(beta, q) : cplx(0.0);
    mono.du_beta(k) = q > 0 ? static_cast<double>(q) * ipow(alpha, p) * ipow(beta, q - 1) : cplx(0.0);
  }
  return mono;
}

}  // namespace

double VFunction::value(cplx alpha, cplx beta) const {
  const auto mono = monomials(j_.two_j(), alpha, beta);
  return mono.u.dot(weighted_ * mono.u).real();
}

VPartials VFunction::partials(cplx alpha, cplx beta) const {
  const auto mono = monomials(j_.two_j(), alpha, beta);
  const Eigen::VectorXcd wu = weighted_ * mono.u;
  VPartials p;
  p.d_alpha = mono.u.dot(weighted_ * mono.du_alpha);
  p.d_beta = mono.u.dot(weighted_ * mono.du_beta);
  p.d_alpha_conj = mono.du_alpha.dot(wu);
  p.d_beta_conj = mono.du_beta.dot(wu);
  return p;
}

double VFunction::husimi(cplx alpha, cplx beta) const {
  const double r2 = std::norm(alpha) + std::norm(beta);
  return std::exp(-r2) * value(alpha, beta) / (kPi * kPi);
}

TssCurrents tss_correspondences(const VFunction& v, cplx alpha, cplx beta, double nbar) {
  const VPartials p = v.partials(alpha, beta);
  const cplx ac = std::conj(alpha);
  const cplx bc = std::conj(beta);
  TssCurrents t;
  t.j_plus = ac * p.d_beta_conj - beta * p.d_alpha;
  t.j_minus = bc * p.d_alpha_conj - alpha * p.d_beta;
  t.j_z = 0.5 * (ac * p.d_alpha_conj + beta * p.d_beta - alpha * p.d_alpha - bc * p.d_beta_conj);
  t.f = (nbar + 1.0) * beta * p.d_alpha - nbar * ac * p.d_beta_conj;
  return t;
}

AngleAction angle_action_map(cplx alpha, cplx beta) {
  const double ra = std::abs(alpha);
  const double rb = std::abs(beta);
  const double action = ra * ra + rb * rb;
  if (!(action > 0.0)) throw UndefinedAngles("angle-action variables are undefined at the origin");
  const double arg_a = ra > 0.0 ? std::arg(alpha) : 0.0;
  const double arg_b = rb > 0.0 ? std::arg(beta) : 0.0;
  AngleAction aa;
  aa.action = action;
  aa.theta = 2.0 * std::atan2(rb, ra);
  aa.phi = arg_b - arg_a;
  aa.psi = -(arg_a + arg_b);
  // Shifting phi by -2 pi k and psi by +2 pi k leaves (alpha, beta) unchanged.
  const double k = std::floor(aa.phi / (2.0 * kPi));
  aa.phi -= 2.0 * kPi * k;
  aa.psi += 2.0 * kPi * k;
  return aa;
}

ModePair angle_action_inverse(const AngleAction& aa) {
  const double r = std::sqrt(aa.action);
  return ModePair{std::polar(r * std::cos(0.5 * aa.theta), -0.5 * (aa.phi + aa.psi)),
                  std::polar(r * std::sin(0.5 * aa.theta), 0.5 * (aa.phi - aa.psi))};
}

}  // namespace spinwehrl
