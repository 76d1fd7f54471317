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

#ifndef GETUP_IMITATION_H_
#define GETUP_IMITATION_H_

#include <array>
#include <functional>
#include <vector>

#include "getup/character.h"
#include "getup/env.h"
#include "getup/json_util.h"
#include "getup/reward.h"
#include "getup/rng.h"
#include "getup/sim.h"
#include "getup/trajectory_log.h"

namespace getup {

struct ImitationConfig {
  double kappa_low = 0.2;
  double kappa_high = 0.8;
  double rsi_epsilon = 0.3;
  std::array<int, 2> future_offsets{1, 5};
  double com_deviation_limit = 0.5;
  double head_done_height = 1.2;
  int standing_steps = 100;
  double standing_com_floor = 0.5;
  int reference_cap = 250;
  // Policy outputs in (-1, 1) are multiplied by this to give q_r in radians.
  double residual_scale = 1.0;

  void validate() const;
};

ImitationConfig imitation_config_from_json(const Json& document, ImitationConfig base = {});
Json imitation_config_to_json(const ImitationConfig& config);

struct ReferenceFrame {
  Vec q;  // actuated joint angles
  double com_height = 0.0;
  double torso_up = 0.0;
  Vec2 hip_velocities{0.0, 0.0};
  SimState state;
  double source_time = 0.0;  // time index in the unretimed reference

  bool operator==(const ReferenceFrame& other) const;
};

struct ReferenceTrajectory {
  std::vector<ReferenceFrame> frames;
  std::array<int, 2> hip_indices{-1, -1};  // into q
  double dt = 1.0 / 40.0;
  double kappa = 1.0;

  int duration() const { return static_cast<int>(frames.size()) - 1; }
  int length() const { return static_cast<int>(frames.size()); }
};

// Central differences of the hip angles, one-sided at the ends.
void recompute_hip_velocities(ReferenceTrajectory& reference);

ReferenceFrame reference_frame(const CharacterModel& model, const SimState& state);

// Deterministic policy: observation and strength to action.
using ActionFn = std::function<Vec(const Vec& observation, double scale)>;

// Rolls out `policy` from `initial` until the head rises above
// head_done_height. Throws ReferenceFailedError at the frame cap.
ReferenceTrajectory generate_reference(const ActionFn& policy, const CharacterModel& model,
                                       const EnvConfig& env, const SimConfig& sim,
                                       const SimState& initial, double strength,
                                       const ImitationConfig& config);

// Source times min(k * kappa, T) for k = 0 .. ceil(T / kappa).
std::vector<double> retime_source_times(int duration, double kappa);
ReferenceTrajectory retime(const ReferenceTrajectory& reference, double kappa);

// With probability epsilon 0, otherwise uniform in [0, length).
int sample_start(int length, double epsilon, Rng& rng);

ReferenceTrajectory insert_pause(const ReferenceTrajectory& reference, int index, int repeat_count);

struct StandingTarget {
  Vec q;
  double com_height = 0.0;
  double torso_up = 1.0;
};
StandingTarget standing_target(const CharacterModel& model);

int slow_observation_dim(const CharacterModel& model);
Vec observe_slow(const SimState& state, const ReferenceTrajectory& reference, int t,
                 const CharacterModel& model, double strength,
                 std::array<int, 2> offsets = {1, 5}, bool mirror = false);

struct ImitationStepResult {
  SimState state;
  RewardBreakdown reward;
  bool done = false;
  bool truncated = false;  // ended by the step budget only
  bool diverged = false;
  Phase phase = Phase::kGetup;  // phase of the step just taken
  Vec pd_target;
};

struct ImitationContext {
  const CharacterModel* model = nullptr;
  const SimConfig* sim = nullptr;
  const RewardConfig* reward = nullptr;
  const ImitationConfig* config = nullptr;
  double strength = 1.0;
};

Phase imitation_phase(const ReferenceTrajectory& reference, int t);
// PD target for step t: reference frame t + 1 (standing pose once past the
// reference) plus the residual.
Vec pd_target(const ImitationContext& context, const ReferenceTrajectory& reference, int t,
              const Vec& residual);
RewardBreakdown imitation_reward(const ImitationContext& context, const SimState& state,
                                 const ReferenceTrajectory& reference, int t);
ImitationStepResult imitation_step(const ImitationContext& context, const SimState& state,
                                   const Vec& residual, const ReferenceTrajectory& reference, int t);

// Episode driver for slow-stage training and rollouts.
class ImitationEnv {
 public:
  ImitationEnv(CharacterModel model, SimConfig sim, RewardConfig reward, ImitationConfig config,
               double strength);

  const Vec& reset(ReferenceTrajectory reference, int start_index);
  // Residual policy output in (-1, 1); scaled by residual_scale.
  ImitationStepResult step(const Vec& action);

  const Vec& observation() const { return observation_; }
  const SimState& state() const { return state_; }
  const ReferenceTrajectory& reference() const { return reference_; }
  const CharacterModel& model() const { return model_; }
  const ImitationConfig& config() const { return config_; }
  int step_index() const { return t_; }
  int episode_limit() const { return reference_.duration() + config_.standing_steps; }
  int observation_dim() const { return slow_observation_dim(model_); }
  int action_dim() const { return model_.num_actuated(); }
  double strength() const { return strength_; }

 private:
  ImitationContext context() const;

  CharacterModel model_;
  SimConfig sim_;
  RewardConfig reward_;
  ImitationConfig config_;
  double strength_;
  ReferenceTrajectory reference_;
  SimState state_;
  Vec observation_;
  int t_ = 0;
};

}  // namespace getup

#endif  // GETUP_IMITATION_H_
