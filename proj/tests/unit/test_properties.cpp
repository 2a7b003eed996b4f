#include <cmath>

#include <gtest/gtest.h>

#include "random_states.hpp"
#include "spinwehrl/entropy_rates.hpp"

using namespace spinwehrl;

namespace {

double entropy(const DensityMatrix& rho, const GridPtr& grid) { return wehrl_entropy(husimi(rho, grid)); }

// One-sided second-order difference of S along the trajectory starting from
// rho at t (evolve only integrates forward).
double entropy_slope(const DensityMatrix& rho, const HamiltonianSpec& h, const DissipatorSpec& d, double t,
                     const GridPtr& grid, double step = 1e-3) {
  EvolveOptions opts;
  opts.tol = 1e-13;
  const auto traj = evolve(rho, LindbladModel(rho.spin(), h, d), {t, t + step, t + 2 * step}, opts);
  const double s0 = entropy(rho, grid);
  const double s1 = entropy(traj.states[1], grid);
  const double s2 = entropy(traj.states[2], grid);
  return (-3 * s0 + 4 * s1 - s2) / (2 * step);
}

}  // namespace

TEST(Properties, ProductionIsNonNegativeForEveryWehrlMethod) {
  gen::Rng rng(211);
  const auto grid = make_shared_grid(48, 96);
  double worst = 0.0;
  for (int n = 0; n < 1000; ++n) {
    const BathParams bath(gen::uniform(rng, 0.0, 2.0), n % 10 == 0 ? 0.0 : gen::uniform(rng, 0.0, 5.0));
    const double lambda = gen::uniform(rng, 0.0, 2.0);
    const BlochVector b = gen::bloch(rng);
    worst = std::min(worst, dephasing_pi_spin_half(b, lambda));
    worst = std::min(worst, spin_half_damping_rates(b, bath, 1.0).pi);

    const SpinQuantumNumber j(gen::integer(rng, 1, 3));
    const DensityMatrix rho = gen::density(rng, j);
    const auto field = husimi(rho, adapted_grid(rho, grid, bath.nbar()));
    worst = std::min(worst, dephasing_pi_quadrature(field, lambda));
    const auto d = damping_pi_quadrature(field, bath);
    worst = std::min({worst, d.damping_term, d.total()});
  }
  EXPECT_GE(worst, -1e-8);
}

TEST(Properties, EquilibriumProducesNothing) {
  const auto grid = make_shared_grid();
  for (int two_j : {1, 2, 3, 5}) {
    const SpinQuantumNumber j(two_j);
    for (double temp : {0.2, 1.0, 4.0}) {
      const BathParams bath = BathParams::from_temperature(0.8, 1.0, temp);
      const DensityMatrix g = gibbs_state(j, 1.0, temp);
      const auto r = wehrl_rates_quadrature(g, AmplitudeDamping{bath.gamma(), bath.nbar()}, 0.0, 1.0, grid);
      EXPECT_LE(std::abs(r.pi), 1e-8);
      EXPECT_LE(std::abs(r.phi), 1e-8);
      if (two_j == 1) EXPECT_LE(std::abs(spin_half_damping_rates(rho_to_bloch(g), bath, 1.0).pi), 1e-8);
      EXPECT_LE(std::abs(wehrl_rates_quadrature(g, Dephasing{1.0}, 0.0, 1.0, grid).pi), 1e-8);
    }
  }
}

TEST(Properties, QuadratureMatchesSpinHalfClosedForms) {
  gen::Rng rng(223);
  const auto grid = make_shared_grid();
  for (int n = 0; n < 100; ++n) {
    const BlochVector b = gen::bloch(rng, 0.99);
    const BathParams bath(1.0, gen::uniform(rng, 0.1, 5.0));
    const auto q = wehrl_rates_quadrature(bloch_to_rho(b), AmplitudeDamping{1.0, bath.nbar()}, 0.0, 1.0, grid);
    const auto c = spin_half_damping_rates(b, bath, 1.0);
    const double scale = std::max({std::abs(c.pi), std::abs(c.phi), 1e-3});
    ASSERT_LT(std::abs(q.pi - c.pi), 1e-5 * std::max(std::abs(c.pi), 1e-3 * scale));
    ASSERT_LT(std::abs(q.phi - c.phi), 1e-5 * std::max(std::abs(c.phi), 1e-3 * scale));
  }
}

TEST(Properties, ExactFluxMatchesQuadratureAcrossSpinsAndBaths) {
  gen::Rng rng(227);
  const auto grid = make_shared_grid();
  for (int two_j : {1, 2, 3, 4}) {
    const SpinQuantumNumber j(two_j);
    for (double nbar : {0.1, 0.5, 1.0, 5.0}) {
      const BathParams bath(1.0, nbar);
      for (int n = 0; n < 3; ++n) {
        const DensityMatrix rho = DensityMatrix::from_populations(j, gen::populations(rng, j));
        const double e = damping_phi_exact(rho, bath);
        const double q = damping_phi_quadrature(husimi(rho, adapted_grid(rho, grid, nbar)), bath);
        ASSERT_LT(std::abs(e - q), 1e-6 * std::abs(e)) << two_j << " " << nbar;
      }
    }
  }
}

TEST(Properties, EntropyBalanceAlongDissipativeTrajectories) {
  gen::Rng rng(229);
  const auto grid = make_shared_grid();
  for (int two_j : {1, 2}) {
    const SpinQuantumNumber j(two_j);
    for (const DissipatorSpec& d : {DissipatorSpec{Dephasing{1.0}}, DissipatorSpec{AmplitudeDamping{1.0, 0.4}}}) {
      const DensityMatrix rho0 = gen::mixed_density(rng, j, 0.05);
      const auto traj = evolve(rho0, StaticJz{0.0}, d, uniform_time_grid(2.0, 0.5), 1e-12);
      for (std::size_t i = 0; i < traj.times.size(); ++i) {
        const auto r = wehrl_rates_quadrature(traj.states[i], d, traj.times[i], 1.0, grid);
        const double slope = entropy_slope(traj.states[i], StaticJz{0.0}, d, traj.times[i], grid);
        EXPECT_NEAR(slope, r.pi - r.phi, 1e-4);
      }
    }
  }
}

TEST(Properties, LinearHamiltoniansLeaveEntropyRateUnchanged) {
  gen::Rng rng(233);
  const auto grid = make_shared_grid();
  for (int n = 0; n < 4; ++n) {
    const SpinQuantumNumber j(gen::integer(rng, 1, 2));
    const DensityMatrix rho = gen::mixed_density(rng, j, 0.05);
    const DissipatorSpec d = AmplitudeDamping{0.5, 0.3};
    const double with = entropy_slope(rho, RotatingField{2.0, 1.0, 3.0}, d, 0.0, grid, 1e-4);
    const double without = entropy_slope(rho, StaticJz{0.0}, d, 0.0, grid, 1e-4);
    EXPECT_NEAR(with, without, 1e-6);
  }
}

TEST(Properties, RotationsPreserveWehrlEntropy) {
  gen::Rng rng(239);
  const auto grid = make_shared_grid();
  for (int n = 0; n < 20; ++n) {
    const SpinQuantumNumber j(gen::integer(rng, 1, 4));
    const DensityMatrix rho = gen::mixed_density(rng, j, 0.01);
    const auto traj = evolve(rho, RotatingField{1.0, 2.0, 0.7}, Dephasing{0.0}, {0.0, gen::uniform(rng, 0.1, 3.0)}, 1e-12);
    EXPECT_NEAR(entropy(traj.states.back(), grid), entropy(rho, grid), 1e-8);
  }
}
