// Copyright 2026 The Getup Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "getup/reward.h"

#include <cmath>

#include <gtest/gtest.h>

#include "getup/error.h"
#include "getup/rng.h"

namespace getup {
namespace {

const ToleranceSpec kHead{1.55, kInf, 0.37, 0.1};

Eigen::VectorXd v1(double x) { return Eigen::VectorXd::Constant(1, x); }

WeakRewardInputs upright() {
  WeakRewardInputs in;
  in.head_height = 1.6;
  in.com_height = 0.8;
  in.torso_up_z = 0.95;
  in.com_velocity_horizontal = v1(0.0);
  in.feet_distance = 0.3;
  return in;
}

TEST(ToleranceTest, InsideBoundsIsOne) { EXPECT_EQ(tolerance(1.60, kHead), 1.0); }

TEST(ToleranceTest, MarginPointReachesValue) {
  EXPECT_NEAR(tolerance(1.55 - 0.37, kHead), 0.1, 1e-12);
}

TEST(ToleranceTest, HalfMargin) {
  // exp(-(1/8) * 2 ln 10) = 10^(-1/4)
  EXPECT_NEAR(tolerance(1.365, kHead), std::pow(10.0, -0.25), 1e-12);
  EXPECT_NEAR(tolerance(1.365, kHead), 0.5623, 1e-4);
}

TEST(ToleranceTest, ZeroValueClampsAtMargin) {
  const ToleranceSpec spec{0.0, 0.9, 0.38, 0.0};
  EXPECT_NEAR(tolerance(0.9 + 0.38, spec), 1e-3, 1e-15);
}

TEST(ToleranceTest, ZeroMarginIsStep) {
  const ToleranceSpec spec{0.0, 0.0, 0.0, 0.1};
  EXPECT_EQ(tolerance(0.0, spec), 1.0);
  EXPECT_EQ(tolerance(1e-9, spec), 0.0);
}

TEST(ToleranceTest, ContinuousAndMonotoneProperty) {
  Rng rng(1);
  for (int trial = 0; trial < 200; ++trial) {
    const double lo = rng.uniform(-2, 2);
    const ToleranceSpec spec{lo, lo + rng.uniform(0, 1), rng.uniform(0.05, 2), rng.uniform(0, 0.9)};
    EXPECT_NEAR(tolerance(spec.lower - 1e-12, spec), 1.0, 1e-9);
    EXPECT_NEAR(tolerance(spec.upper + 1e-12, spec), 1.0, 1e-9);
    double prev = 1.0;
    for (double d = 0.0; d < 5.0; d += 0.01) {
      const double v = tolerance(spec.upper + d, spec);
      ASSERT_LE(v, prev);
      ASSERT_EQ(v == 1.0, d == 0.0);
      prev = v;
    }
  }
}

TEST(ToleranceTest, InvalidSpecRejected) {
  EXPECT_THROW((ToleranceSpec{1.0, 0.0, 0.1, 0.1}.validate("x")), ConfigError);
  EXPECT_THROW((ToleranceSpec{0.0, 1.0, -0.1, 0.1}.validate("x")), ConfigError);
  EXPECT_THROW((ToleranceSpec{0.0, 1.0, 0.1, 1.0}.validate("x")), ConfigError);
}

TEST(WeakRewardTest, AllTermsInside) {
  const RewardBreakdown r = reward_weak(upright());
  EXPECT_EQ(r.total, 1.0);
  for (const auto& [name, value] : r.terms) EXPECT_EQ(value, 1.0) << name;
}

TEST(WeakRewardTest, LowHeadGivesMarginValue) {
  WeakRewardInputs in = upright();
  in.head_height = 1.18;
  EXPECT_NEAR(reward_weak(in).total, 0.1, 1e-12);
}

TEST(WeakRewardTest, StraightnessGatedByComHeight) {
  WeakRewardInputs in = upright();
  in.com_height = 0.4;
  in.torso_up_z = -1.0;
  EXPECT_EQ(reward_weak(in).terms.at("r_straight"), 1.0);
  in.com_height = 0.6;
  EXPECT_LT(reward_weak(in).terms.at("r_straight"), 1.0);
}

TEST(WeakRewardTest, HeightScaleMovesBounds) {
  RewardConfig c;
  c.height_scale = 0.9;
  WeakRewardInputs in = upright();
  in.head_height = 1.55 * 0.9;
  EXPECT_EQ(reward_weak(in, c).terms.at("r_h"), 1.0);
  EXPECT_LT(reward_weak(in).terms.at("r_h"), 1.0);
}

TEST(WeakRewardTest, PenaltiesOnlyWhenWeighted) {
  WeakRewardInputs in = upright();
  in.normalized_energy = 2.0;
  EXPECT_EQ(reward_weak(in).terms.count("r_energy"), 0u);
  RewardConfig c;
  c.energy_penalty_weight = 0.5;
  EXPECT_NEAR(reward_weak(in, c).total, std::exp(-1.0), 1e-12);
}

TEST(SlowRewardTest, PerfectTracking) {
  SlowRewardInputs in;
  in.orientation_delta = v1(0.0);
  const RewardBreakdown r = reward_slow(in);
  EXPECT_EQ(r.total, 1.0);
  EXPECT_EQ(r.terms.at("r_hip"), 1.0);
}

TEST(SlowRewardTest, HipFloorIsTwoThirds) {
  RewardConfig c;
  c.hip_velocity_tracking = {-0.5, 0.5, 0.0, 0.1};  // step: zero outside the bounds
  SlowRewardInputs in;
  in.orientation_delta = v1(0.0);
  in.hip_velocity_delta = {5.0, -5.0};
  const RewardBreakdown r = reward_slow(in, c);
  EXPECT_EQ(r.terms.at("r_hip"), 0.0);
  EXPECT_NEAR(r.total, 2.0 / 3.0, 1e-15);
}

TEST(SlowRewardTest, ComDeltaAtMargin) {
  SlowRewardInputs in;
  in.orientation_delta = v1(0.0);
  in.com_height_delta = 0.5;
  const RewardBreakdown r = reward_slow(in);
  EXPECT_NEAR(r.terms.at("r_com"), 0.1, 1e-12);
  EXPECT_NEAR(r.total, 0.1, 1e-12);
}

TEST(SlowRewardTest, ThirdFactorBoundedProperty) {
  Rng rng(2);
  for (int trial = 0; trial < 10000; ++trial) {
    SlowRewardInputs in;
    in.com_height_delta = rng.uniform(-2, 2);
    in.orientation_delta = v1(rng.uniform(-2, 2));
    in.hip_velocity_delta = {rng.uniform(-10, 10), rng.uniform(-10, 10)};
    const RewardBreakdown r = reward_slow(in);
    const double third = (r.terms.at("r_hip") + 2.0) / 3.0;
    ASSERT_GE(third, 2.0 / 3.0);
    ASSERT_LE(third, 1.0);
    ASSERT_GE(r.total, 0.0);
    ASSERT_LE(r.total, 1.0);
  }
}

TEST(BalanceRewardTest, FixedPoint) {
  BalanceRewardInputs in;
  in.com_velocity_horizontal = v1(0.0);
  in.com_height = 0.9;
  const Eigen::VectorXd q = Eigen::VectorXd::LinSpaced(11, -0.5, 0.5);
  EXPECT_EQ(reward_balance(in, q, q).total, 1.0);
}

TEST(BalanceRewardTest, PoseTermClosedForm) {
  BalanceRewardInputs in;
  in.com_velocity_horizontal = v1(0.0);
  in.com_height = 0.9;
  const Eigen::VectorXd hat = Eigen::VectorXd::Zero(11);
  Eigen::VectorXd q = hat;
  q[3] = M_PI / 2;
  const double expected = std::exp(-0.25 * M_PI * M_PI / 4.0);
  EXPECT_NEAR(reward_balance(in, q, hat).terms.at("r_pose"), expected, 1e-15);
  double prev = 1.0;
  for (double d = 0.05; d < 3.0; d += 0.05) {
    q[3] = d;
    const double r = reward_balance(in, q, hat).terms.at("r_pose");
    ASSERT_LT(r, prev);
    prev = r;
  }
}

TEST(BalanceRewardTest, DimensionMismatch) {
  BalanceRewardInputs in;
  in.com_velocity_horizontal = v1(0.0);
  EXPECT_THROW(reward_balance(in, Eigen::VectorXd::Zero(3), Eigen::VectorXd::Zero(4)), ConfigError);
}

TEST(RewardFuzz, AllTermsInUnitInterval) {
  Rng rng(3);
  for (int trial = 0; trial < 100000; ++trial) {
    WeakRewardInputs w;
    w.head_height = rng.uniform(-1, 3);
    w.com_height = rng.uniform(-1, 2);
    w.torso_up_z = rng.uniform(-1, 1);
    w.com_velocity_horizontal = v1(rng.uniform(-10, 10));
    w.feet_distance = rng.uniform(0, 3);
    BalanceRewardInputs b;
    b.com_velocity_horizontal = v1(rng.uniform(-10, 10));
    b.torso_up_z = rng.uniform(-1, 1);
    b.com_height = rng.uniform(-1, 2);
    b.com_height_delta = rng.uniform(-2, 2);
    Eigen::VectorXd q(3);
    q << rng.uniform(-3, 3), rng.uniform(-3, 3), rng.uniform(-3, 3);
    for (const RewardBreakdown& r : {reward_weak(w), reward_balance(b, q, Eigen::VectorXd::Zero(3))}) {
      ASSERT_GE(r.total, 0.0);
      ASSERT_LE(r.total, 1.0);
      for (const auto& [name, value] : r.terms) {
        ASSERT_GE(value, 0.0) << name;
        ASSERT_LE(value, 1.0) << name;
      }
    }
  }
}

TEST(RewardConfigTest, JsonRoundTripAndOverride) {
  RewardConfig c;
  c.height_scale = 0.9;
  const RewardConfig back = reward_config_from_json(reward_config_to_json(c));
  EXPECT_EQ(back.height_scale, 0.9);
  EXPECT_EQ(back.head_height.upper, kInf);
  EXPECT_EQ(back.torso_straight.value_at_margin, 0.0);
  const RewardConfig o = reward_config_from_json(Json{{"head_height", {{"margin", 0.5}}}});
  EXPECT_EQ(o.head_height.margin, 0.5);
  EXPECT_EQ(o.head_height.lower, 1.55);
  EXPECT_THROW(reward_config_from_json(Json{{"head_height", {{"bounds", {2.0, 1.0}}}}}), ConfigError);
}

}  // namespace
}  // namespace getup
