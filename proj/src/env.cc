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

#include "getup/env.h"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "getup/error.h"
#include "getup/rng.h"

namespace getup {

void EnvConfig::validate() const {
  if (ragdoll_steps < 0) throw ConfigError("must be >= 0", "env.ragdoll_steps");
  if (!(drop_height > 0.0)) throw ConfigError("must be positive", "env.drop_height");
  if (!(ragdoll_action_std >= 0.0)) throw ConfigError("must be >= 0", "env.ragdoll_action_std");
  if (episode_steps <= 0) throw ConfigError("must be positive", "env.episode_steps");
  if (!(control_hz > 0.0)) throw ConfigError("must be positive", "env.control_hz");
}

EnvConfig env_config_from_json(const Json& doc, EnvConfig config) {
  read_optional(doc, "ragdoll_steps", "env", config.ragdoll_steps);
  read_optional(doc, "drop_height", "env", config.drop_height);
  read_optional(doc, "ragdoll_action_std", "env", config.ragdoll_action_std);
  read_optional(doc, "episode_steps", "env", config.episode_steps);
  read_optional(doc, "control_hz", "env", config.control_hz);
  read_optional(doc, "max_reset_retries", "env", config.max_reset_retries);
  read_optional(doc, "mirror_observation", "env", config.mirror_observation);
  config.validate();
  return config;
}

Json env_config_to_json(const EnvConfig& c) {
  return {{"ragdoll_steps", c.ragdoll_steps},       {"drop_height", c.drop_height},
          {"ragdoll_action_std", c.ragdoll_action_std}, {"episode_steps", c.episode_steps},
          {"control_hz", c.control_hz},             {"max_reset_retries", c.max_reset_retries},
          {"mirror_observation", c.mirror_observation}};
}

SimConfig sim_config_from_json(const Json& doc, SimConfig config) {
  read_optional(doc, "dt_sim", "sim", config.dt_sim);
  read_optional(doc, "substeps_per_control", "sim", config.substeps_per_control);
  read_optional(doc, "gravity", "sim", config.gravity);
  read_optional(doc, "contact_stiffness", "sim", config.contact_stiffness);
  read_optional(doc, "contact_damping", "sim", config.contact_damping);
  read_optional(doc, "friction_coefficient", "sim", config.friction_coefficient);
  read_optional(doc, "friction_damping", "sim", config.friction_damping);
  read_optional(doc, "limit_stiffness_per_torque", "sim", config.limit_stiffness_per_torque);
  read_optional(doc, "limit_damping_ratio", "sim", config.limit_damping_ratio);
  config.validate();
  return config;
}

Json sim_config_to_json(const SimConfig& c) {
  return {{"dt_sim", c.dt_sim},
          {"substeps_per_control", c.substeps_per_control},
          {"gravity", c.gravity},
          {"contact_stiffness", c.contact_stiffness},
          {"contact_damping", c.contact_damping},
          {"friction_coefficient", c.friction_coefficient},
          {"friction_damping", c.friction_damping},
          {"limit_stiffness_per_torque", c.limit_stiffness_per_torque},
          {"limit_damping_ratio", c.limit_damping_ratio}};
}

Vec ObservationWeak::flatten() const {
  const Eigen::Index j = joint_angles.size();
  const Eigen::Index e = static_cast<Eigen::Index>(end_effectors.size());
  Vec out(3 * j + 3 + 2 * e + 2);
  out.segment(0, j) = joint_angles.array().sin();
  out.segment(j, j) = joint_angles.array().cos();
  out.segment(2 * j, j) = joint_velocities;
  Eigen::Index at = 3 * j;
  out[at++] = head_height;
  out[at++] = com_velocity.x();
  out[at++] = com_velocity.y();
  for (const Vec2& p : end_effectors) {
    out[at++] = p.x();
    out[at++] = p.y();
  }
  out[at++] = torso_up;
  out[at++] = strength;
  return out;
}

int weak_observation_dim(const CharacterModel& model) {
  return 3 * model.num_actuated() + 3 + 2 * model.num_end_effectors() + 2;
}

ObservationWeak observe_weak(const SimState& state, const CharacterModel& model, double strength,
                             bool mirror) {
  if (!(strength > 0.0 && strength <= 1.0)) throw ContractError("strength must lie in (0, 1]");
  const Kinematics kin = forward_kinematics(model, state.q);
  const int j = model.num_actuated();
  ObservationWeak obs;
  obs.joint_angles = state.q.tail(j);
  obs.joint_velocities = state.qdot.tail(j);
  obs.head_height = kin.head_height;
  obs.com_velocity = com_velocity(model, state.q, state.qdot);
  obs.end_effectors = kin.end_effectors;
  obs.torso_up = std::cos(kin.links[model.torso_index].angle);
  obs.strength = strength;
  if (mirror && std::cos(state.q[2]) < 0.0) {
    obs.com_velocity.x() = -obs.com_velocity.x();
    for (Vec2& p : obs.end_effectors) p.x() = -p.x();
  }
  return obs;
}

double com_height(const CharacterModel& model, const SimState& state) {
  return forward_kinematics(model, state.q).com.y();
}

double feet_distance(const CharacterModel& model, const Kinematics& kin) {
  if (model.foot_effectors[0] < 0 || model.foot_effectors[1] < 0) return 0.0;
  return std::abs(kin.end_effectors[model.foot_effectors[0]].x() -
                  kin.end_effectors[model.foot_effectors[1]].x());
}

WeakRewardInputs weak_reward_inputs(const CharacterModel& model, const SimState& state) {
  const Kinematics kin = forward_kinematics(model, state.q);
  WeakRewardInputs in;
  in.head_height = kin.head_height;
  in.com_height = kin.com.y();
  in.torso_up_z = std::cos(kin.links[model.torso_index].angle);
  in.com_velocity_horizontal = Vec::Constant(1, com_velocity(model, state.q, state.qdot).x());
  in.feet_distance = feet_distance(model, kin);
  const int j = model.num_actuated();
  in.normalized_joint_speed = j > 0 ? state.qdot.tail(j).squaredNorm() / j : 0.0;
  return in;
}

SimState reset_ragdoll(const CharacterModel& model, const EnvConfig& env, const SimConfig& sim,
                       uint64_t seed, std::vector<RagdollFrame>* frames) {
  env.validate();
  const int j = model.num_actuated();
  const Vec limits = model.torque_limits();
  const Vec lower = model.lower_limits();
  const Vec upper = model.upper_limits();
  for (int attempt = 0; attempt <= env.max_reset_retries; ++attempt) {
    Rng rng(attempt == 0 ? seed : derive_seed(seed, static_cast<uint64_t>(attempt)));
    SimState state;
    state.q = Vec::Zero(model.num_dofs());
    state.qdot = Vec::Zero(model.num_dofs());
    state.q[1] = env.drop_height;
    state.q[2] = rng.uniform(-std::numbers::pi, std::numbers::pi);
    for (int k = 0; k < j; ++k) state.q[3 + k] = rng.uniform(lower[k], upper[k]);
    if (frames) frames->clear();
    try {
      for (int step = 0; step < env.ragdoll_steps; ++step) {
        Vec action(j);
        for (int k = 0; k < j; ++k) {
          action[k] = std::clamp(rng.normal(0.0, env.ragdoll_action_std), -1.0, 1.0);
        }
        state = control_step(model, state, limits.cwiseProduct(action), sim);
        if (frames) frames->push_back({state, action});
      }
      return state;
    } catch (const DivergenceError&) {
      continue;
    }
  }
  throw DivergenceError("rag-doll reset diverged on every retry", env.max_reset_retries);
}

StepResult step_env(const CharacterModel& model, const EnvConfig& env, const SimConfig& sim,
                    const RewardConfig& reward, const SimState& state, int step_index,
                    const Vec& action, double scale) {
  if (action.size() != model.num_actuated()) throw ContractError("action dimension mismatch");
  if (action.cwiseAbs().maxCoeff() > scale + 1e-9) {
    throw ContractError("action exceeds the strength bound " + std::to_string(scale));
  }
  const Vec limits = model.torque_limits();
  const Vec torques = limits.cwiseProduct(action);
  StepResult out;
  try {
    out.state = control_step(model, state, torques, sim);
  } catch (const DivergenceError&) {
    out.state = state;
    out.observation = observe_weak(state, model, scale, env.mirror_observation);
    out.reward.total = 0.0;
    out.done = true;
    out.diverged = true;
    return out;
  }
  out.observation = observe_weak(out.state, model, scale, env.mirror_observation);
  WeakRewardInputs inputs = weak_reward_inputs(model, out.state);
  inputs.normalized_energy = action.size() > 0 ? action.squaredNorm() / action.size() : 0.0;
  out.reward = reward_weak(inputs, reward);
  out.done = step_index + 1 >= env.episode_steps;
  return out;
}

GetupEnv::GetupEnv(CharacterModel model, EnvConfig env, SimConfig sim, RewardConfig reward)
    : model_(std::move(model)), env_(env), sim_(sim), reward_(reward) {
  env_.validate();
  sim_.validate();
  reward_.validate();
}

const ObservationWeak& GetupEnv::reset(uint64_t seed, double scale,
                                       std::vector<RagdollFrame>* frames) {
  return reset_to(reset_ragdoll(model_, env_, sim_, seed, frames), scale);
}

const ObservationWeak& GetupEnv::reset_to(const SimState& state, double scale, int step_index) {
  state_ = state;
  scale_ = scale;
  step_index_ = step_index;
  observation_ = observe_weak(state_, model_, scale_, env_.mirror_observation);
  return observation_;
}

StepResult GetupEnv::step(const Vec& action) {
  StepResult result = step_env(model_, env_, sim_, reward_, state_, step_index_, action, scale_);
  state_ = result.state;
  observation_ = result.observation;
  ++step_index_;
  return result;
}

}  // namespace getup
