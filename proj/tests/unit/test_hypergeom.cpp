#include <cmath>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "random_states.hpp"
#include "spinwehrl/errors.hpp"
#include "spinwehrl/hypergeom.hpp"

using namespace spinwehrl;

TEST(Hypergeom, Examples) {
  EXPECT_EQ(gauss_2f1(1.0, 2.5, 4.0, 0.0), 1.0);
  EXPECT_NEAR(gauss_2f1(1.0, 1.0, 2.0, 0.5), -std::log(0.5) / 0.5, 1e-15);
  EXPECT_NEAR(gauss_2f1(1.0, 1.0, 2.0, 0.5), 1.386294, 1e-6);
  EXPECT_NEAR(gauss_2f1(HypergeomParams{1.0, 1.0, 2.0, 0.5}), gauss_2f1(1.0, 1.0, 2.0, 0.5), 0.0);
}

TEST(Hypergeom, LogarithmIdentityAcrossTheBranchSwitch) {
  for (double z : {0.1, 0.5, 0.85, 0.9, 0.9000001, 0.95, 0.999, 0.999999}) {
    EXPECT_NEAR(gauss_2f1(1.0, 1.0, 2.0, z), -std::log1p(-z) / z, 1e-13 * std::abs(std::log1p(-z) / z)) << z;
  }
}

TEST(Hypergeom, MatchesHighPrecisionSeries) {
  gen::Rng rng(59);
  for (int n = 0; n < 200; ++n) {
    const int two_j = gen::integer(rng, 1, 40);
    const int k = gen::integer(rng, 0, two_j);
    const double b = 1.0 + 0.5 * k;
    const double c = 3.0 + two_j;
    const double z = gen::uniform(rng, 0.0, 0.98);
    const double ref = oracle::hypergeom_series(1.0, b, c, z);
    ASSERT_NEAR(gauss_2f1(1.0, b, c, z), ref, 1e-12 * ref) << "b=" << b << " c=" << c << " z=" << z;
  }
}

TEST(Hypergeom, NonIntegerParameters) {
  gen::Rng rng(61);
  for (int n = 0; n < 100; ++n) {
    const double a = gen::uniform(rng, 0.2, 3.0);
    const double b = gen::uniform(rng, 0.2, 3.0);
    const double c = a + b + gen::uniform(rng, 0.1, 3.0);
    const double z = gen::uniform(rng, 0.0, 0.97);
    const double ref = oracle::hypergeom_series(a, b, c, z);
    ASSERT_NEAR(gauss_2f1(a, b, c, z), ref, 1e-12 * ref);
  }
}

TEST(Hypergeom, EulerTransformation) {
  for (const auto& [b, c] : {std::pair{2.0, 4.0}, std::pair{3.5, 6.0}, std::pair{1.5, 3.0}, std::pair{0.7, 4.3}}) {
    for (int k = 0; k < 20; ++k) {
      const double z = 0.049 * k;
      const double lhs = gauss_2f1(1.0, b, c, z);
      const double rhs = std::pow(1.0 - z, c - 1.0 - b) * gauss_2f1(c - 1.0, c - b, c, z);
      ASSERT_NEAR(lhs, rhs, 1e-11 * lhs) << "b=" << b << " c=" << c << " z=" << z;
    }
  }
}

TEST(Hypergeom, IncreasesWithZ) {
  double last = 0.0;
  for (int k = 0; k < 500; ++k) {
    const double v = gauss_2f1(1.0, 3.0, 5.0, 0.002 * k);
    ASSERT_GT(v, last);
    last = v;
  }
}

TEST(Hypergeom, Errors) {
  EXPECT_THROW(gauss_2f1(1.0, 1.0, 2.0, 1.0), UnsupportedParameters);
  EXPECT_THROW(gauss_2f1(1.0, 1.0, 2.0, -0.1), UnsupportedParameters);
  EXPECT_THROW(gauss_2f1(1.0, -1.0, 2.0, 0.5), UnsupportedParameters);
  EXPECT_THROW(gauss_2f1(1.0, 1.0, 0.0, 0.5), UnsupportedParameters);
  EXPECT_THROW(gauss_2f1(1.0, 1.0, 2.0, std::nan("")), UnsupportedParameters);
}
