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

#ifndef GETUP_REWARD_H_
#define GETUP_REWARD_H_

#include <limits>
#include <map>
#include <string>

#include <Eigen/Core>

#include "getup/json_util.h"

namespace getup {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// Bounded tolerance profile: 1 inside [lower, upper], Gaussian tail outside
// that reaches `value_at_margin` at distance `margin` from the nearest bound.
struct ToleranceSpec {
  double lower = 0.0;
  double upper = 0.0;
  double margin = 0.0;
  double value_at_margin = 0.1;

  void validate(const std::string& path) const;
};

// Floor for value_at_margin; a Gaussian cannot reach exactly zero.
inline constexpr double kMinMarginValue = 1e-3;

double tolerance(double input, const ToleranceSpec& spec);

struct RewardBreakdown {
  std::map<std::string, double> terms;
  double total = 0.0;
};

struct RewardConfig {
  ToleranceSpec head_height{1.55, kInf, 0.37, 0.1};
  ToleranceSpec torso_straight{0.9, kInf, 1.9, 0.0};
  double straight_gate_com_height = 0.5;
  ToleranceSpec com_velocity{-0.3, 0.3, 1.2, 0.1};
  ToleranceSpec feet_distance{0.0, 0.9, 0.38, 0.0};

  ToleranceSpec com_tracking{0.0, 0.0, 0.5, 0.1};
  ToleranceSpec orientation_tracking{-0.03, 0.03, 0.6, 0.3};
  ToleranceSpec hip_velocity_tracking{-0.5, 0.5, 1.3, 0.1};

  ToleranceSpec balance_com_velocity{0.0, 0.0, 1.2, 0.1};
  double pose_tracking_scale = 0.25;

  // Ablation-only penalties; zero weight disables them.
  double energy_penalty_weight = 0.0;
  double joint_velocity_penalty_weight = 0.0;

  // Multiplies the absolute-height bounds, margins and gates so the terms fit
  // a character of different stature.
  double height_scale = 1.0;

  RewardConfig scaled() const;  // with height_scale folded in, scale reset to 1
  void validate() const;
};

RewardConfig reward_config_from_json(const Json& document, RewardConfig base = {});
Json reward_config_to_json(const RewardConfig& config);

struct WeakRewardInputs {
  double head_height = 0.0;
  double com_height = 0.0;
  double torso_up_z = 0.0;
  Eigen::VectorXd com_velocity_horizontal;  // one entry for the planar model
  double feet_distance = 0.0;
  // Optional penalty inputs (used only when the ablation weights are set).
  double normalized_energy = 0.0;
  double normalized_joint_speed = 0.0;
};

// r_h * r_straight * r_v_com * r_feet
RewardBreakdown reward_weak(const WeakRewardInputs& in, const RewardConfig& config = {});

struct SlowRewardInputs {
  double com_height_delta = 0.0;
  Eigen::VectorXd orientation_delta;  // one entry for the planar model
  Eigen::Vector2d hip_velocity_delta{0.0, 0.0};
};

// r_com * r_ori * (r_hip + 2) / 3
RewardBreakdown reward_slow(const SlowRewardInputs& in, const RewardConfig& config = {});

struct BalanceRewardInputs {
  Eigen::VectorXd com_velocity_horizontal;
  double torso_up_z = 1.0;
  double com_height = 0.0;
  double com_height_delta = 0.0;  // against the standing pose
};

// r_v_com(b = [0, 0]) * r_straight * r_com * r_pose
RewardBreakdown reward_balance(const BalanceRewardInputs& in, const Eigen::VectorXd& q,
                               const Eigen::VectorXd& standing_pose,
                               const RewardConfig& config = {});

}  // namespace getup

#endif  // GETUP_REWARD_H_
