#include "spdekit/rng.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace spdekit;

TEST(CounterRng, ReproducibleAndIndependentOfOrder) {
  const CounterRng a(42, streams::kGmrf);
  const double x = a.normal(1000);
  for (std::uint64_t i = 0; i < 1000; ++i) a.normal(i);
  EXPECT_EQ(a.normal(1000), x);
  EXPECT_NE(CounterRng(42, streams::kMixing).normal(1000), x);
  EXPECT_NE(CounterRng(43, streams::kGmrf).normal(1000), x);
}

TEST(CounterRng, UniformInOpenUnitInterval) {
  const CounterRng r(7, 1);
  double s = 0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double u = r.uniform(static_cast<std::uint64_t>(i), 0, i % 2);
    ASSERT_GT(u, 0.0);
    ASSERT_LT(u, 1.0);
    s += u;
  }
  EXPECT_NEAR(s / n, 0.5, 5 * std::sqrt(1.0 / 12 / n));
}

TEST(CounterRng, NormalMoments) {
  const CounterRng r(8, 1);
  const int n = 200000;
  double s = 0, s2 = 0, s4 = 0;
  for (int i = 0; i < n; ++i) {
    const double z = r.normal(static_cast<std::uint64_t>(i));
    s += z;
    s2 += z * z;
    s4 += z * z * z * z;
  }
  EXPECT_NEAR(s / n, 0.0, 0.012);
  EXPECT_NEAR(s2 / n, 1.0, 0.015);
  EXPECT_NEAR(s4 / n, 3.0, 0.08);
}

TEST(CounterRng, DerivedSeedsDiffer) {
  EXPECT_NE(CounterRng::derive_seed(1, 0), CounterRng::derive_seed(1, 1));
  EXPECT_EQ(CounterRng::derive_seed(1, 5), CounterRng::derive_seed(1, 5));
}
