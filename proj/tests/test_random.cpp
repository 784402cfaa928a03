#include <gtest/gtest.h>

#include <cmath>
#include <stdexcept>

#include <ousv/random.hpp>

#include "support/oracles.hpp"

using namespace ousv;

TEST(Philox, KnownAnswerZero) {
    const auto out = Philox4x32::generate({0, 0, 0, 0}, {0, 0});
    EXPECT_EQ(out[0], 0x6627e8d5u);
    EXPECT_EQ(out[1], 0xe169c58du);
    EXPECT_EQ(out[2], 0xbc57ac4cu);
    EXPECT_EQ(out[3], 0x9b00dbd8u);
}

TEST(Philox, KnownAnswerAllOnes) {
    const auto out = Philox4x32::generate({0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu},
                                          {0xffffffffu, 0xffffffffu});
    EXPECT_EQ(out[0], 0x408f276du);
    EXPECT_EQ(out[1], 0x41c83b0eu);
    EXPECT_EQ(out[2], 0xa20bc7c6u);
    EXPECT_EQ(out[3], 0x6d5451fdu);
}

TEST(Philox, KnownAnswerPi) {
    const auto out = Philox4x32::generate({0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u},
                                          {0xa4093822u, 0x299f31d0u});
    EXPECT_EQ(out[0], 0xd16cfe09u);
    EXPECT_EQ(out[1], 0x94fdccebu);
    EXPECT_EQ(out[2], 0x5001e420u);
    EXPECT_EQ(out[3], 0x24126ea1u);
}

TEST(UniformOpen, StaysInsideUnitInterval) {
    EXPECT_GT(uniform_open(0, 0), 0.0);
    EXPECT_LT(uniform_open(0xffffffffu, 0xffffffffu), 1.0);
    EXPECT_NEAR(uniform_open(0x80000000u, 0), 0.5, 1e-15);
}

TEST(InverseNormal, MatchesBoostQuantile) {
    for (double p : {1e-300, 1e-12, 1e-6, 0.01, 0.025, 0.2, 0.5, 0.7, 0.975, 0.999, 1.0 - 1e-12}) {
        const double x = inverse_normal_cdf(p);
        const double back = oracle::normal_cdf(x);
        EXPECT_NEAR(back / p, 1.0, 1e-12) << p;
    }
    EXPECT_EQ(inverse_normal_cdf(0.5), 0.0);
    EXPECT_EQ(inverse_normal_cdf(0.0), -INFINITY);
    EXPECT_EQ(inverse_normal_cdf(1.0), INFINITY);
}

TEST(InverseNormal, RejectsOutsideUnitInterval) {
    EXPECT_THROW(inverse_normal_cdf(-0.1), std::domain_error);
    EXPECT_THROW(inverse_normal_cdf(1.5), std::domain_error);
    EXPECT_THROW(inverse_normal_cdf(NAN), std::domain_error);
}

TEST(NormalStream, DeterministicPerSeedTagAndPath) {
    NormalStream a(42, StreamTag::OuDriver, 7);
    NormalStream b(42, StreamTag::OuDriver, 7);
    NormalStream other_path(42, StreamTag::OuDriver, 8);
    NormalStream other_tag(42, StreamTag::PriceDriver, 7);
    int same_path = 0, same_tag = 0;
    for (int i = 0; i < 101; ++i) {
        const double x = a.next();
        EXPECT_EQ(x, b.next());
        same_path += x == other_path.next();
        same_tag += x == other_tag.next();
    }
    EXPECT_EQ(same_path, 0);
    EXPECT_EQ(same_tag, 0);
    EXPECT_EQ(a.position(), 101u);
}

TEST(NormalStream, MirroredNegatesEveryDraw) {
    NormalStream a(3, StreamTag::Auxiliary, 11);
    NormalStream m(3, StreamTag::Auxiliary, 11, true);
    for (int i = 0; i < 50; ++i) EXPECT_EQ(a.next(), -m.next());
}

TEST(NormalStream, FirstTwoMomentsOfLongStream) {
    NormalStream s(2024, StreamTag::OuDriver, 0);
    const int n = 200000;
    double sum = 0.0, sum2 = 0.0;
    for (int i = 0; i < n; ++i) {
        const double x = s.next();
        sum += x;
        sum2 += x * x;
    }
    const double mean = sum / n;
    EXPECT_LT(std::fabs(mean), 3.0 / std::sqrt(n));
    EXPECT_LT(std::fabs(sum2 / n - 1.0), 3.0 * std::sqrt(2.0 / n));
}
