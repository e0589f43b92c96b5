#include <gtest/gtest.h>

#include <cmath>

#include "fbmou/rng.hpp"

using namespace fbmou;

TEST(CounterRng, DeterministicAndSeedSensitive) {
    const CounterRng a(42), b(42), c(43);
    EXPECT_EQ(a.normal(0, 0, 0), b.normal(0, 0, 0));
    EXPECT_EQ(a.normal(7, 3, 11), b.normal(7, 3, 11));
    EXPECT_NE(a.normal(0, 0, 0), c.normal(0, 0, 0));
}

TEST(CounterRng, DistinctCountersDecorrelated) {
    const CounterRng rng(1);
    EXPECT_NE(rng.normal(0, 0, 0), rng.normal(1, 0, 0));
    EXPECT_NE(rng.normal(0, 0, 0), rng.normal(0, 1, 0));
    EXPECT_NE(rng.normal(0, 0, 0), rng.normal(0, 0, 1));
}

TEST(CounterRng, UniformInUnitInterval) {
    const CounterRng rng(123);
    double sum = 0.0;
    const int draws = 100000;
    for (int i = 0; i < draws; ++i) {
        const double u = rng.uniform(0, 0, std::uint64_t(i));
        ASSERT_GT(u, 0.0);
        ASSERT_LE(u, 1.0);
        sum += u;
    }
    EXPECT_NEAR(sum / draws, 0.5, 5.0 / std::sqrt(12.0 * draws));
}

TEST(CounterRng, NormalMoments) {
    const CounterRng rng(9001);
    const int draws = 200000;
    double s1 = 0.0, s2 = 0.0, s4 = 0.0;
    for (int i = 0; i < draws; ++i) {
        const double z = rng.normal(std::uint64_t(i), 0, 0);
        s1 += z;
        s2 += z * z;
        s4 += z * z * z * z;
    }
    EXPECT_NEAR(s1 / draws, 0.0, 4.0 / std::sqrt(double(draws)));
    EXPECT_NEAR(s2 / draws, 1.0, 4.0 * std::sqrt(2.0 / double(draws)));
    EXPECT_NEAR(s4 / draws, 3.0, 4.0 * std::sqrt(96.0 / double(draws)));
}
