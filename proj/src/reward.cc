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

#include <algorithm>
#include <cmath>

#include "getup/error.h"

namespace getup {
namespace {

double mean_tolerance(const Eigen::VectorXd& inputs, const ToleranceSpec& spec) {
  if (inputs.size() == 0) return 1.0;
  double sum = 0.0;
  for (Eigen::Index i = 0; i < inputs.size(); ++i) sum += tolerance(inputs[i], spec);
  return sum / static_cast<double>(inputs.size());
}

double straight_term(double torso_up_z, double com_height, const RewardConfig& config) {
  return com_height > config.straight_gate_com_height ? tolerance(torso_up_z, config.torso_straight)
                                                      : 1.0;
}

Json spec_json(const ToleranceSpec& s) {
  auto bound = [](double b) -> Json {
    if (std::isinf(b)) return b > 0 ? "inf" : "-inf";
    return b;
  };
  return {{"bounds", {bound(s.lower), bound(s.upper)}},
          {"margin", s.margin},
          {"value", s.value_at_margin}};
}

double read_bound(const Json& v, const std::string& path) {
  if (v.is_number()) return v.get<double>();
  if (v.is_string()) {
    const std::string s = v.get<std::string>();
    if (s == "inf" || s == "+inf") return kInf;
    if (s == "-inf") return -kInf;
  }
  throw ConfigError("expected a number or \"inf\"", path);
}

void read_spec(const Json& doc, const std::string& key, ToleranceSpec& spec) {
  auto it = doc.find(key);
  if (it == doc.end()) return;
  const std::string path = "reward." + key;
  if (it->contains("bounds")) {
    const Json& b = (*it)["bounds"];
    if (!b.is_array() || b.size() != 2) throw ConfigError("expected [lower, upper]", path + ".bounds");
    spec.lower = read_bound(b[0], path + ".bounds[0]");
    spec.upper = read_bound(b[1], path + ".bounds[1]");
  }
  read_optional(*it, "margin", path, spec.margin);
  read_optional(*it, "value", path, spec.value_at_margin);
  spec.validate(path);
}

}  // namespace

void ToleranceSpec::validate(const std::string& path) const {
  if (!(lower <= upper)) throw ConfigError("bounds must satisfy lower <= upper", path);
  if (!(margin >= 0.0)) throw ConfigError("margin must be >= 0", path);
  if (!(value_at_margin >= 0.0 && value_at_margin < 1.0)) {
    throw ConfigError("value must lie in [0, 1)", path);
  }
}

double tolerance(double input, const ToleranceSpec& spec) {
  if (input >= spec.lower && input <= spec.upper) return 1.0;
  if (spec.margin <= 0.0) return 0.0;
  const double distance = input < spec.lower ? spec.lower - input : input - spec.upper;
  const double d = distance / spec.margin;
  const double v = std::max(spec.value_at_margin, kMinMarginValue);
  const double scale = std::sqrt(-2.0 * std::log(v));
  return std::exp(-0.5 * (d * scale) * (d * scale));
}

RewardConfig RewardConfig::scaled() const {
  RewardConfig out = *this;
  const double s = height_scale;
  out.head_height.lower *= s;
  out.head_height.margin *= s;
  out.straight_gate_com_height *= s;
  out.com_tracking.margin *= s;
  out.height_scale = 1.0;
  return out;
}

void RewardConfig::validate() const {
  head_height.validate("reward.head_height");
  torso_straight.validate("reward.torso_straight");
  com_velocity.validate("reward.com_velocity");
  feet_distance.validate("reward.feet_distance");
  com_tracking.validate("reward.com_tracking");
  orientation_tracking.validate("reward.orientation_tracking");
  hip_velocity_tracking.validate("reward.hip_velocity_tracking");
  balance_com_velocity.validate("reward.balance_com_velocity");
  if (!(height_scale > 0.0)) throw ConfigError("must be positive", "reward.height_scale");
  if (energy_penalty_weight < 0.0 || joint_velocity_penalty_weight < 0.0) {
    throw ConfigError("penalty weights must be >= 0", "reward");
  }
}

RewardConfig reward_config_from_json(const Json& doc, RewardConfig config) {
  if (!doc.is_object()) throw ConfigError("expected an object", "reward");
  read_spec(doc, "head_height", config.head_height);
  read_spec(doc, "torso_straight", config.torso_straight);
  read_spec(doc, "com_velocity", config.com_velocity);
  read_spec(doc, "feet_distance", config.feet_distance);
  read_spec(doc, "com_tracking", config.com_tracking);
  read_spec(doc, "orientation_tracking", config.orientation_tracking);
  read_spec(doc, "hip_velocity_tracking", config.hip_velocity_tracking);
  read_spec(doc, "balance_com_velocity", config.balance_com_velocity);
  read_optional(doc, "straight_gate_com_height", "reward", config.straight_gate_com_height);
  read_optional(doc, "pose_tracking_scale", "reward", config.pose_tracking_scale);
  read_optional(doc, "energy_penalty_weight", "reward", config.energy_penalty_weight);
  read_optional(doc, "joint_velocity_penalty_weight", "reward", config.joint_velocity_penalty_weight);
  read_optional(doc, "height_scale", "reward", config.height_scale);
  config.validate();
  return config;
}

Json reward_config_to_json(const RewardConfig& c) {
  return {{"head_height", spec_json(c.head_height)},
          {"torso_straight", spec_json(c.torso_straight)},
          {"com_velocity", spec_json(c.com_velocity)},
          {"feet_distance", spec_json(c.feet_distance)},
          {"com_tracking", spec_json(c.com_tracking)},
          {"orientation_tracking", spec_json(c.orientation_tracking)},
          {"hip_velocity_tracking", spec_json(c.hip_velocity_tracking)},
          {"balance_com_velocity", spec_json(c.balance_com_velocity)},
          {"straight_gate_com_height", c.straight_gate_com_height},
          {"pose_tracking_scale", c.pose_tracking_scale},
          {"energy_penalty_weight", c.energy_penalty_weight},
          {"joint_velocity_penalty_weight", c.joint_velocity_penalty_weight},
          {"height_scale", c.height_scale}};
}

RewardBreakdown reward_weak(const WeakRewardInputs& in, const RewardConfig& raw) {
  const RewardConfig config = raw.scaled();
  RewardBreakdown out;
  auto& t = out.terms;
  t["r_h"] = tolerance(in.head_height, config.head_height);
  t["r_straight"] = straight_term(in.torso_up_z, in.com_height, config);
  t["r_v_com"] = mean_tolerance(in.com_velocity_horizontal, config.com_velocity);
  t["r_feet"] = tolerance(in.feet_distance, config.feet_distance);
  out.total = t["r_h"] * t["r_straight"] * t["r_v_com"] * t["r_feet"];
  if (config.energy_penalty_weight > 0.0) {
    t["r_energy"] = std::exp(-config.energy_penalty_weight * in.normalized_energy);
    out.total *= t["r_energy"];
  }
  if (config.joint_velocity_penalty_weight > 0.0) {
    t["r_joint_velocity"] = std::exp(-config.joint_velocity_penalty_weight * in.normalized_joint_speed);
    out.total *= t["r_joint_velocity"];
  }
  return out;
}

RewardBreakdown reward_slow(const SlowRewardInputs& in, const RewardConfig& raw) {
  const RewardConfig config = raw.scaled();
  RewardBreakdown out;
  auto& t = out.terms;
  t["r_com"] = tolerance(in.com_height_delta, config.com_tracking);
  double ori = 1.0;
  for (Eigen::Index i = 0; i < in.orientation_delta.size(); ++i) {
    ori *= tolerance(in.orientation_delta[i], config.orientation_tracking);
  }
  t["r_ori"] = ori;
  t["r_hip"] = 0.5 * (tolerance(in.hip_velocity_delta[0], config.hip_velocity_tracking) +
                      tolerance(in.hip_velocity_delta[1], config.hip_velocity_tracking));
  out.total = t["r_com"] * t["r_ori"] * (t["r_hip"] + 2.0) / 3.0;
  return out;
}

RewardBreakdown reward_balance(const BalanceRewardInputs& in, const Eigen::VectorXd& q,
                               const Eigen::VectorXd& standing_pose, const RewardConfig& raw) {
  if (q.size() != standing_pose.size()) {
    throw ConfigError("joint vector and standing pose differ in dimension", "reward_balance");
  }
  const RewardConfig config = raw.scaled();
  RewardBreakdown out;
  auto& t = out.terms;
  t["r_v_com"] = mean_tolerance(in.com_velocity_horizontal, config.balance_com_velocity);
  t["r_straight"] = straight_term(in.torso_up_z, in.com_height, config);
  t["r_com"] = tolerance(in.com_height_delta, config.com_tracking);
  t["r_pose"] = std::exp(-config.pose_tracking_scale * (q - standing_pose).squaredNorm());
  out.total = t["r_v_com"] * t["r_straight"] * t["r_com"] * t["r_pose"];
  return out;
}

}  // namespace getup
