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

#ifndef GETUP_ENV_H_
#define GETUP_ENV_H_

#include <cstdint>
#include <vector>

#include "getup/character.h"
#include "getup/json_util.h"
#include "getup/reward.h"
#include "getup/sim.h"

namespace getup {

struct EnvConfig {
  int ragdoll_steps = 80;
  double drop_height = 1.5;
  double ragdoll_action_std = 0.1;
  int episode_steps = 250;
  double control_hz = 40.0;
  int max_reset_retries = 8;
  // Mirror x components when the pelvis faces -x.
  bool mirror_observation = false;

  void validate() const;
};

EnvConfig env_config_from_json(const Json& document, EnvConfig base = {});
Json env_config_to_json(const EnvConfig& config);
SimConfig sim_config_from_json(const Json& document, SimConfig base = {});
Json sim_config_to_json(const SimConfig& config);

struct ObservationWeak {
  Vec joint_angles;
  Vec joint_velocities;
  double head_height = 0.0;
  Vec2 com_velocity{0.0, 0.0};  // world (horizontal, vertical)
  std::vector<Vec2> end_effectors;
  double torso_up = 0.0;
  double strength = 1.0;

  // [sin q, cos q, qdot, head height, com velocity, end effectors, o_torso, strength]
  Vec flatten() const;
};

int weak_observation_dim(const CharacterModel& model);

ObservationWeak observe_weak(const SimState& state, const CharacterModel& model, double strength,
                             bool mirror = false);

// Reward inputs measured on a simulator state.
WeakRewardInputs weak_reward_inputs(const CharacterModel& model, const SimState& state);
double com_height(const CharacterModel& model, const SimState& state);
double feet_distance(const CharacterModel& model, const Kinematics& kin);

struct RagdollFrame {
  SimState state;
  Vec action;
};

// Drops the character from drop_height with a random pose and small random
// torques; returns the resting state. Deterministic per seed.
SimState reset_ragdoll(const CharacterModel& model, const EnvConfig& env, const SimConfig& sim,
                       uint64_t seed, std::vector<RagdollFrame>* frames = nullptr);

struct StepResult {
  SimState state;
  ObservationWeak observation;
  RewardBreakdown reward;
  bool done = false;
  bool diverged = false;
};

// One weak-stage control step. `step_index` counts steps already taken after
// the rag-doll phase.
StepResult step_env(const CharacterModel& model, const EnvConfig& env, const SimConfig& sim,
                    const RewardConfig& reward, const SimState& state, int step_index,
                    const Vec& action, double scale);

// Stateful wrapper used by the trainer and rollouts.
class GetupEnv {
 public:
  GetupEnv(CharacterModel model, EnvConfig env, SimConfig sim, RewardConfig reward);

  const ObservationWeak& reset(uint64_t seed, double scale,
                               std::vector<RagdollFrame>* frames = nullptr);
  const ObservationWeak& reset_to(const SimState& state, double scale, int step_index = 0);
  StepResult step(const Vec& action);

  const CharacterModel& model() const { return model_; }
  const EnvConfig& env_config() const { return env_; }
  const SimConfig& sim_config() const { return sim_; }
  const RewardConfig& reward_config() const { return reward_; }
  const SimState& state() const { return state_; }
  const ObservationWeak& observation() const { return observation_; }
  int step_index() const { return step_index_; }
  double scale() const { return scale_; }
  int action_dim() const { return model_.num_actuated(); }
  int observation_dim() const { return weak_observation_dim(model_); }

 private:
  CharacterModel model_;
  EnvConfig env_;
  SimConfig sim_;
  RewardConfig reward_;
  SimState state_;
  ObservationWeak observation_;
  int step_index_ = 0;
  double scale_ = 1.0;
};

}  // namespace getup

#endif  // GETUP_ENV_H_
