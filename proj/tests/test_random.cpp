#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "regime_eq/random.hpp"

using namespace regime_eq;

// Known-answer vectors of the Philox4x32-10 reference implementation.
TEST(Philox, KnownAnswerZero) {
  const auto out = Philox4x32::apply({0, 0, 0, 0}, {0, 0});
  EXPECT_EQ(out, (Philox4x32::Counter{0x6627e8d5u, 0xe169c58du, 0xbc57ac4cu, 0x9b00dbd8u}));
}

TEST(Philox, KnownAnswerOnes) {
  const auto out = Philox4x32::apply({0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu},
                                     {0xffffffffu, 0xffffffffu});
  EXPECT_EQ(out, (Philox4x32::Counter{0x408f276du, 0x41c83b0eu, 0xa20bc7c6u, 0x6d5451fdu}));
}

TEST(Philox, KnownAnswerPi) {
  const auto out = Philox4x32::apply({0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u},
                                     {0xa4093822u, 0x299f31d0u});
  EXPECT_EQ(out, (Philox4x32::Counter{0xd16cfe09u, 0x94fdccebu, 0x5001e420u, 0x24126ea1u}));
}

TEST(RandomStream, SameKeySameSequence) {
  RandomStream a(7, 3, StreamId::brownian), b(7, 3, StreamId::brownian);
  for (int k = 0; k < 100; ++k) {
    EXPECT_EQ(a.uniform(), b.uniform());
    EXPECT_EQ(a.normal(), b.normal());
  }
}

TEST(RandomStream, DistinctKeysDiffer) {
  std::set<double> first;
  for (std::uint64_t seed : {1u, 2u})
    for (std::uint64_t path : {0u, 1u, 1u << 31})
      for (StreamId s : {StreamId::regime, StreamId::brownian, StreamId::bridge}) {
        RandomStream r(seed, path, s);
        first.insert(r.uniform());
      }
  EXPECT_EQ(first.size(), 18u);
}

TEST(RandomStream, UniformRangeAndMoments) {
  RandomStream r(12345, 0, StreamId::regime);
  const int n = 200000;
  double sum = 0.0, sq = 0.0;
  for (int k = 0; k < n; ++k) {
    const double u = r.uniform();
    ASSERT_GT(u, 0.0);
    ASSERT_LE(u, 1.0);
    sum += u;
    sq += u * u;
  }
  const double mean = sum / n, var = sq / n - mean * mean;
  EXPECT_NEAR(mean, 0.5, 4.0 * std::sqrt(1.0 / 12.0 / n));
  EXPECT_NEAR(var, 1.0 / 12.0, 2e-3);
}

TEST(RandomStream, NormalMoments) {
  RandomStream r(99, 5, StreamId::brownian);
  const int n = 400000;
  double s1 = 0.0, s2 = 0.0, s3 = 0.0, s4 = 0.0;
  for (int k = 0; k < n; ++k) {
    const double z = r.normal();
    s1 += z;
    s2 += z * z;
    s3 += z * z * z;
    s4 += z * z * z * z;
  }
  EXPECT_NEAR(s1 / n, 0.0, 4.0 / std::sqrt(n));
  EXPECT_NEAR(s2 / n, 1.0, 4.0 * std::sqrt(2.0 / n));
  EXPECT_NEAR(s3 / n, 0.0, 4.0 * std::sqrt(15.0 / n));
  EXPECT_NEAR(s4 / n, 3.0, 4.0 * std::sqrt(96.0 / n));
}

TEST(RandomStream, ExponentialMeanAndZeroRate) {
  RandomStream r(4, 4, StreamId::regime);
  const int n = 200000;
  double sum = 0.0;
  for (int k = 0; k < n; ++k) sum += r.exponential(2.0);
  EXPECT_NEAR(sum / n, 0.5, 4.0 * 0.5 / std::sqrt(n));
  EXPECT_TRUE(std::isinf(r.exponential(0.0)));
}
