#include <gtest/gtest.h>

#include "energynet/hard_sigmoid.hpp"

using energynet::Error;
using energynet::ErrorCode;
using energynet::HardSigmoid;

TEST(HardSigmoid, DefaultThresholds) {
  const HardSigmoid<> nl;
  EXPECT_EQ(nl.beta1(), -0.5);
  EXPECT_EQ(nl.beta2(), 0.5);
}

TEST(HardSigmoid, HandValues) {
  const HardSigmoid<> nl;
  EXPECT_EQ(nl.rate(0.0), 0.5);
  EXPECT_EQ(nl.rate(-0.5), 0.0);
  EXPECT_EQ(nl.rate(0.5), 1.0);
  EXPECT_EQ(nl.rate(-3.0), 0.0);
  EXPECT_EQ(nl.rate(7.0), 1.0);
  EXPECT_DOUBLE_EQ(nl.rate(0.2), 0.7);
}

TEST(HardSigmoid, SlopeIsOneOnClosedInterval) {
  const HardSigmoid<> nl;
  EXPECT_EQ(nl.slope(-0.5), 1.0);
  EXPECT_EQ(nl.slope(0.5), 1.0);
  EXPECT_EQ(nl.slope(0.0), 1.0);
  EXPECT_EQ(nl.slope(-0.5000001), 0.0);
  EXPECT_EQ(nl.slope(0.5000001), 0.0);
  EXPECT_TRUE(nl.saturated(2.0));
  EXPECT_FALSE(nl.saturated(0.1));
}

TEST(HardSigmoid, KinkDistance) {
  const HardSigmoid<> nl;
  EXPECT_DOUBLE_EQ(nl.kink_distance(0.0), 0.5);
  EXPECT_NEAR(nl.kink_distance(0.49), 0.01, 1e-15);
  EXPECT_NEAR(nl.kink_distance(-0.6), 0.1, 1e-15);
}

TEST(HardSigmoid, ShiftedThresholds) {
  const HardSigmoid<> nl(-0.25);
  EXPECT_EQ(nl.beta2(), 0.75);
  EXPECT_EQ(nl.rate(0.0), 0.25);
  EXPECT_EQ(nl.rate(0.75), 1.0);
}

TEST(HardSigmoid, RejectsThresholdsNotStraddlingZero) {
  EXPECT_THROW(HardSigmoid<>(0.1), Error);
  EXPECT_THROW(HardSigmoid<>(-1.0), Error);
  EXPECT_THROW(HardSigmoid<>(-1.5), Error);
}

TEST(HardSigmoid, RejectsGapOtherThanOne) {
  try {
    HardSigmoid<>(-0.5, 0.6);
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInvalidConfig);
  }
  EXPECT_NO_THROW(HardSigmoid<>(-0.3, 0.7));
}

TEST(HardSigmoid, Lipschitz) {
  const HardSigmoid<> nl;
  for (double a = -2.0; a <= 2.0; a += 0.037) {
    for (double b = -2.0; b <= 2.0; b += 0.041) {
      EXPECT_LE(std::abs(nl.rate(a) - nl.rate(b)), std::abs(a - b) + 1e-15);
    }
  }
}

TEST(HardSigmoid, LongDouble) {
  const HardSigmoid<long double> nl;
  EXPECT_EQ(nl.rate(0.25L), 0.75L);
}
