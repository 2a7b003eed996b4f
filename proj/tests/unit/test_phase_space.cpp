#include <cmath>
#include <numbers>
#include <sstream>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "random_states.hpp"
#include "spinwehrl/errors.hpp"
#include "spinwehrl/phase_space.hpp"

using namespace spinwehrl;

namespace {

constexpr double kPi = std::numbers::pi;

double integrate(const SphereGrid& g, const std::function<double(double, double)>& f) {
  std::vector<double> v(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) v[i] = f(g.node_theta[i], g.node_phi[i]);
  return g.integrate(v);
}

double factorial(int n) { return n <= 1 ? 1.0 : n * factorial(n - 1); }

}  // namespace

TEST(Grid, IntegratesLowDegreeExactly) {
  const SphereGrid g = make_grid(96, 192);
  EXPECT_NEAR(integrate(g, [](double, double) { return 1.0; }), 4 * kPi, 1e-12);
  EXPECT_NEAR(integrate(g, [](double t, double) { return std::cos(t) * std::cos(t); }), 4 * kPi / 3, 1e-12);
  EXPECT_NEAR(integrate(g, [](double t, double p) { return std::pow(std::sin(t) * std::cos(p), 2); }), 4 * kPi / 3,
              1e-12);
}

TEST(Grid, NodesAvoidPoles) {
  const SphereGrid g = make_grid(8, 8);
  for (double t : g.theta_nodes) {
    EXPECT_GT(t, 0.0);
    EXPECT_LT(t, kPi);
  }
  EXPECT_THROW(make_grid(7, 16), InvalidGrid);
  EXPECT_THROW(make_grid(16, 4), InvalidGrid);
}

TEST(Grid, RotatedAndClusteredGridsStayExact) {
  const SphereGrid base = make_grid(48, 96);
  for (const auto& g : {rotated_grid(base, 1.0, 2.0), rotated_grid(base, 2.5, -0.3, 12.0),
                        rotated_grid(base, 0.0, 0.0, 6.0, 20.0)}) {
    EXPECT_NEAR(integrate(g, [](double, double) { return 1.0; }), 4 * kPi, 1e-12);
    EXPECT_NEAR(integrate(g, [](double t, double p) { return std::pow(std::sin(t) * std::sin(p), 2); }), 4 * kPi / 3,
                1e-11);
    EXPECT_NEAR(integrate(g, [](double t, double p) { return std::sin(t) * std::cos(p) * std::cos(t); }), 0.0, 1e-12);
    for (std::size_t i = 0; i < g.size(); ++i) {
      ASSERT_NEAR(std::hypot(g.node_sin_theta[i], g.node_cos_theta[i]), 1.0, 1e-14);
      ASSERT_NEAR(g.node_cos_theta[i], std::cos(g.node_theta[i]), 1e-12);
    }
  }
}

TEST(CoherentState, Examples) {
  const SpinQuantumNumber j(4);
  const auto north = coherent_state(j, 1e-9, 0.3);
  EXPECT_NEAR(std::abs(north.amplitudes(0)), 1.0, 1e-12);
  const auto eq = coherent_state(spin_half(), kPi / 2, 0.0);
  EXPECT_NEAR(eq.amplitudes(0).real(), 1 / std::sqrt(2.0), 1e-15);
  EXPECT_NEAR(eq.amplitudes(1).real(), 1 / std::sqrt(2.0), 1e-15);
}

TEST(CoherentState, NormalizedAndMatchesRotationOracle) {
  gen::Rng rng(21);
  for (int n = 0; n < 100; ++n) {
    const SpinQuantumNumber j(gen::integer(rng, 1, 10));
    const double t = gen::uniform(rng, 0.01, kPi - 0.01);
    const double p = gen::uniform(rng, 0.0, 2 * kPi);
    const auto cs = coherent_state(j, t, p);
    EXPECT_NEAR(cs.amplitudes.squaredNorm(), 1.0, 1e-12);
    const Eigen::VectorXcd ref = oracle::coherent_state(j, t, p);
    EXPECT_NEAR(std::abs(ref.dot(cs.amplitudes)), 1.0, 1e-12);
  }
}

TEST(CoherentState, DerivativesMatchFiniteDifferences) {
  gen::Rng rng(3);
  const SpinQuantumNumber j(3);
  const double h = 1e-6;
  for (int n = 0; n < 20; ++n) {
    const double t = gen::uniform(rng, 0.2, 2.9);
    const double p = gen::uniform(rng, 0.0, 6.0);
    const auto cs = coherent_state(j, t, p);
    const Eigen::VectorXcd dt = (coherent_state(j, t + h, p).amplitudes - coherent_state(j, t - h, p).amplitudes) / (2 * h);
    const Eigen::VectorXcd dp = (coherent_state(j, t, p + h).amplitudes - coherent_state(j, t, p - h).amplitudes) / (2 * h);
    EXPECT_LT((dt - cs.d_theta).cwiseAbs().maxCoeff(), 1e-8);
    EXPECT_LT((dp - cs.d_phi).cwiseAbs().maxCoeff(), 1e-8);
  }
}

TEST(Husimi, MaximallyMixedIsUniform) {
  const SpinQuantumNumber j(5);
  const auto f = husimi(DensityMatrix::maximally_mixed(j), make_shared_grid(16, 32));
  for (double q : f.q) EXPECT_NEAR(q, 1.0 / 6.0, 1e-14);
  for (double d : f.dq_dtheta) EXPECT_NEAR(d, 0.0, 1e-14);
  for (double d : f.dq_dphi) EXPECT_NEAR(d, 0.0, 1e-14);
}

TEST(Husimi, TopStateOverlap) {
  for (int two_j : {1, 2, 5}) {
    const SpinQuantumNumber j(two_j);
    Eigen::VectorXcd top = Eigen::VectorXcd::Zero(j.dim());
    top(0) = 1.0;
    const auto grid = make_shared_grid(16, 32);
    const auto f = husimi(DensityMatrix::pure(j, top), grid);
    for (std::size_t i = 0; i < grid->size(); ++i) {
      EXPECT_NEAR(f.q[i], std::pow(std::cos(grid->node_theta[i] / 2), 2 * two_j), 1e-14);
    }
  }
}

TEST(Husimi, NormalizationAndPositivity) {
  gen::Rng rng(8);
  const auto grid = make_shared_grid();
  for (int n = 0; n < 40; ++n) {
    const SpinQuantumNumber j(gen::integer(rng, 1, 12));
    const auto f = husimi(gen::density(rng, j), grid);
    EXPECT_NEAR(f.normalization(), 1.0, 1e-8);
    for (double q : f.q) ASSERT_GE(q, -1e-12);
  }
}

TEST(Husimi, DerivativesMatchFiniteDifferences) {
  gen::Rng rng(13);
  const auto grid = make_shared_grid(24, 48);
  const double h = 1e-5;
  for (int two_j : {1, 2, 4}) {
    const DensityMatrix rho = gen::density(rng, SpinQuantumNumber(two_j));
    const auto f = husimi(rho, grid);
    for (int n = 0; n < 200; ++n) {
      const auto i = static_cast<std::size_t>(gen::integer(rng, 0, static_cast<int>(grid->size()) - 1));
      const double t = grid->node_theta[i];
      const double p = grid->node_phi[i];
      const double dt = (husimi_at(rho, t + h, p) - husimi_at(rho, t - h, p)) / (2 * h);
      const double dp = (husimi_at(rho, t, p + h) - husimi_at(rho, t, p - h)) / (2 * h);
      ASSERT_NEAR(f.dq_dtheta[i], dt, 1e-7);
      ASSERT_NEAR(f.dq_dphi[i], dp, 1e-7);
      ASSERT_NEAR(f.q[i], husimi_at(rho, t, p), 1e-14);
    }
  }
}

TEST(Husimi, TiltedGridMatchesPointEvaluation) {
  gen::Rng rng(17);
  const auto grid = std::make_shared<const SphereGrid>(rotated_grid(make_grid(16, 32), 1.2, 0.4));
  const DensityMatrix rho = gen::density(rng, SpinQuantumNumber(3));
  const auto f = husimi(rho, grid);
  const double h = 1e-5;
  for (std::size_t i = 0; i < grid->size(); i += 7) {
    const double t = grid->node_theta[i];
    const double p = grid->node_phi[i];
    EXPECT_NEAR(f.q[i], husimi_at(rho, t, p), 1e-14);
    EXPECT_NEAR(f.dq_dtheta[i], (husimi_at(rho, t + h, p) - husimi_at(rho, t - h, p)) / (2 * h), 1e-7);
    EXPECT_NEAR(f.dq_dphi[i], (husimi_at(rho, t, p + h) - husimi_at(rho, t, p - h)) / (2 * h), 1e-7);
  }
  EXPECT_NEAR(f.normalization(), 1.0, 1e-12);
}

TEST(Husimi, RotationAboutZShiftsThePhiGrid) {
  gen::Rng rng(4);
  const SpinQuantumNumber j(3);
  const auto grid = make_shared_grid(16, 32);
  const DensityMatrix rho = gen::density(rng, j);
  const int shift = 5;
  const double alpha = grid->phi_nodes[shift];
  Eigen::VectorXcd ph(j.dim());
  for (int k = 0; k < j.dim(); ++k) ph(k) = std::polar(1.0, -alpha * j.m(k));
  const Matrix u = ph.asDiagonal();
  const DensityMatrix rotated(j, u * rho.matrix() * u.adjoint());
  const auto f = husimi(rho, grid);
  const auto g = husimi(rotated, grid);
  for (int i = 0; i < grid->n_theta; ++i) {
    for (int k = 0; k < grid->n_phi; ++k) {
      EXPECT_NEAR(g.q[grid->index(i, (k + shift) % grid->n_phi)], f.q[grid->index(i, k)], 1e-10);
    }
  }
  EXPECT_NEAR(wehrl_entropy(f), wehrl_entropy(g), 1e-8);
}

TEST(Wehrl, KnownValues) {
  const auto grid = make_shared_grid();
  EXPECT_NEAR(wehrl_entropy(husimi(DensityMatrix::maximally_mixed(spin_half()), grid)), std::log(2.0), 1e-12);
  EXPECT_NEAR(wehrl_entropy_spin_half(0.0), std::log(2.0), 1e-15);
  EXPECT_NEAR(wehrl_entropy_spin_half(1.0), 0.5, 1e-15);
  gen::Rng rng(6);
  for (int n = 0; n < 50; ++n) {
    const BlochVector b = gen::bloch(rng, 1.0);
    EXPECT_NEAR(wehrl_entropy(husimi(bloch_to_rho(b), grid)), wehrl_entropy_spin_half(b.norm()), 1e-10);
  }
}

TEST(Wehrl, CoherentStatesMinimize) {
  gen::Rng rng(7);
  const auto grid = make_shared_grid();
  for (int two_j : {1, 2, 4}) {
    const SpinQuantumNumber j(two_j);
    const auto cs = coherent_state(j, 0.7, 1.9);
    const DensityMatrix top = DensityMatrix::pure(j, cs.amplitudes);
    const double s_min = wehrl_entropy(husimi(top, adapted_grid(top, grid)));
    EXPECT_NEAR(s_min, two_j / (two_j + 1.0), 1e-12);
    for (int n = 0; n < 20; ++n) {
      const DensityMatrix rho = gen::density(rng, j);
      EXPECT_GE(wehrl_entropy(husimi(rho, adapted_grid(rho, grid))), s_min - 1e-10);
    }
  }
}

TEST(Wehrl, BoundsVonNeumann) {
  gen::Rng rng(19);
  const auto grid = make_shared_grid(48, 96);
  double margin = 1e300;
  for (int n = 0; n < 500; ++n) {
    const SpinQuantumNumber j(gen::integer(rng, 1, 6));
    const DensityMatrix rho = gen::density(rng, j);
    const double gap = wehrl_entropy(husimi(rho, grid)) - von_neumann_entropy(rho);
    ASSERT_GT(gap, 0.0);
    margin = std::min(margin, gap);
  }
  RecordProperty("smallest_gap", std::to_string(margin));
}

TEST(Currents, Examples) {
  const auto grid = make_shared_grid(16, 32);
  const auto diag = phase_space_currents(husimi(gibbs_state(SpinQuantumNumber(3), 1.0, 0.7), grid));
  for (const cplx& z : diag.j_z) EXPECT_NEAR(std::abs(z), 0.0, 1e-15);

  const auto x = phase_space_currents(husimi(bloch_to_rho({1, 0, 0}), grid));
  for (std::size_t i = 0; i < grid->size(); ++i) {
    const cplx expect(0.0, 0.5 * std::sin(grid->node_theta[i]) * std::sin(grid->node_phi[i]));
    EXPECT_NEAR(std::abs(x.j_z[i] - expect), 0.0, 1e-14);
  }

  gen::Rng rng(2);
  const auto c = phase_space_currents(husimi(gen::density(rng, SpinQuantumNumber(4)), grid));
  for (std::size_t i = 0; i < grid->size(); ++i) EXPECT_NEAR(std::abs(std::conj(c.j_plus[i]) + c.j_minus[i]), 0.0, 1e-13);
}

TEST(VFunction, EulerHomogeneity) {
  gen::Rng rng(23);
  for (int two_j : {1, 2, 3, 6}) {
    const VFunction v(gen::density(rng, SpinQuantumNumber(two_j)));
    for (int n = 0; n < 100; ++n) {
      const cplx a(gen::uniform(rng, -1.5, 1.5), gen::uniform(rng, -1.5, 1.5));
      const cplx b(gen::uniform(rng, -1.5, 1.5), gen::uniform(rng, -1.5, 1.5));
      const VPartials p = v.partials(a, b);
      const cplx lhs = a * p.d_alpha + b * p.d_beta;
      const double val = v.value(a, b);
      ASSERT_NEAR(std::abs(lhs - two_j * val), 0.0, 1e-10 * std::abs(two_j * val));
    }
  }
}

TEST(VFunction, RelationBetweenRepresentations) {
  gen::Rng rng(29);
  for (int two_j : {1, 2, 5}) {
    const SpinQuantumNumber j(two_j);
    const DensityMatrix rho = gen::density(rng, j);
    const VFunction v(rho);
    for (int n = 0; n < 50; ++n) {
      AngleAction aa;
      aa.action = gen::uniform(rng, 0.1, 6.0);
      aa.theta = gen::uniform(rng, 0.05, 3.1);
      aa.phi = gen::uniform(rng, 0.0, 6.2);
      aa.psi = 0.0;
      const ModePair m = angle_action_inverse(aa);
      const double lhs = v.husimi(m.alpha, m.beta);
      const double rhs = std::exp(-aa.action) * std::pow(aa.action, two_j) / (kPi * kPi * factorial(two_j)) *
                         husimi_at(rho, aa.theta, aa.phi);
      ASSERT_NEAR(lhs, rhs, 1e-12 * std::max(1.0, std::abs(rhs)));
    }
  }
}

TEST(VFunction, DephasingCurrentFromDampingCurrent) {
  gen::Rng rng(31);
  for (int two_j : {1, 2, 4}) {
    const VFunction v(gen::density(rng, SpinQuantumNumber(two_j)));
    const double nbar = gen::uniform(rng, 0.0, 3.0);
    int checked = 0;
    for (int n = 0; n < 200; ++n) {
      const cplx a(gen::uniform(rng, -1.5, 1.5), gen::uniform(rng, -1.5, 1.5));
      const cplx b(gen::uniform(rng, -1.5, 1.5), gen::uniform(rng, -1.5, 1.5));
      const double denom = (nbar + 1.0) * std::norm(b) - nbar * std::norm(a);
      if (std::abs(denom) < 1e-6) continue;
      const TssCurrents c = tss_correspondences(v, a, b, nbar);
      const cplx rhs = (std::conj(c.f) * std::conj(a) * b - c.f * a * std::conj(b)) / denom;
      ASSERT_NEAR(std::abs(c.j_z - rhs), 0.0, 1e-10 * std::max(1.0, std::abs(c.j_z)));
      ++checked;
    }
    EXPECT_GT(checked, 150);
  }
}

TEST(AngleAction, Examples) {
  const AngleAction n = angle_action_map(1.0, 0.0);
  EXPECT_NEAR(n.action, 1.0, 1e-15);
  EXPECT_NEAR(n.theta, 0.0, 1e-15);
  EXPECT_NEAR(std::remainder(n.phi + n.psi, 2 * kPi), 0.0, 1e-15);

  const AngleAction e = angle_action_map(1 / std::sqrt(2.0), 1 / std::sqrt(2.0));
  EXPECT_NEAR(e.action, 1.0, 1e-15);
  EXPECT_NEAR(e.theta, kPi / 2, 1e-15);
  EXPECT_NEAR(e.phi, 0.0, 1e-15);
  EXPECT_NEAR(e.psi, 0.0, 1e-15);

  EXPECT_THROW(angle_action_map(0.0, 0.0), UndefinedAngles);
}

TEST(AngleAction, RoundTrip) {
  gen::Rng rng(37);
  for (int n = 0; n < 1000; ++n) {
    const cplx a(gen::uniform(rng, -2, 2), gen::uniform(rng, -2, 2));
    const cplx b(gen::uniform(rng, -2, 2), gen::uniform(rng, -2, 2));
    const ModePair back = angle_action_inverse(angle_action_map(a, b));
    ASSERT_NEAR(std::abs(back.alpha - a), 0.0, 1e-12);
    ASSERT_NEAR(std::abs(back.beta - b), 0.0, 1e-12);
  }
}

TEST(AdaptedGrid, KeepsBaseForMixedStatesAndTiltsForPureOnes) {
  const auto base = make_shared_grid(32, 64);
  EXPECT_EQ(adapted_grid(bloch_to_rho({0.3, 0.2, 0.1}), base).get(), base.get());
  const auto tilted = adapted_grid(bloch_to_rho({1, 0, 0}), base);
  EXPECT_TRUE(tilted->tilted());
  EXPECT_NEAR(tilted->pole_theta, kPi / 2, 1e-15);
  EXPECT_NEAR(std::abs(tilted->pole_phi), kPi, 1e-15);
  // cold bath alone clusters toward the north pole without tilting
  const auto cold = adapted_grid(bloch_to_rho({0.3, 0.2, 0.1}), base, 1e-4);
  EXPECT_FALSE(cold->tilted());
  EXPECT_LT(1.0 - cold->cos_theta.front(), 1.0 - base->cos_theta.front());
}

TEST(HusimiCsv, OneRowPerNode) {
  const auto grid = make_shared_grid(8, 8);
  std::ostringstream out;
  write_husimi_csv(husimi(DensityMatrix::maximally_mixed(spin_half()), grid), out);
  const std::string s = out.str();
  EXPECT_EQ(s.rfind("theta,phi,q\n", 0), 0u);
  EXPECT_EQ(std::count(s.begin(), s.end(), '\n'), 65);
}
