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

#include "getup/imitation.h"

#include <cmath>
#include <numbers>

#include "getup/error.h"

namespace getup {

void ImitationConfig::validate() const {
  if (!(kappa_low > 0.0 && kappa_low <= kappa_high && kappa_high < 1.0)) {
    throw ConfigError("requires 0 < kappa_low <= kappa_high < 1", "imitation.kappa_low");
  }
  if (!(rsi_epsilon >= 0.0 && rsi_epsilon <= 1.0)) {
    throw ConfigError("must lie in [0, 1]", "imitation.rsi_epsilon");
  }
  for (int offset : future_offsets) {
    if (offset <= 0) throw ConfigError("offsets must be positive", "imitation.future_offsets");
  }
  if (!(com_deviation_limit > 0.0)) {
    throw ConfigError("must be positive", "imitation.com_deviation_limit");
  }
  if (standing_steps < 0) throw ConfigError("must be non-negative", "imitation.standing_steps");
  if (reference_cap < 1) throw ConfigError("must be positive", "imitation.reference_cap");
  if (!(residual_scale > 0.0 && residual_scale <= std::numbers::pi)) {
    throw ConfigError("must lie in (0, pi]", "imitation.residual_scale");
  }
}

ImitationConfig imitation_config_from_json(const Json& doc, ImitationConfig config) {
  read_optional(doc, "kappa_low", "imitation", config.kappa_low);
  read_optional(doc, "kappa_high", "imitation", config.kappa_high);
  read_optional(doc, "rsi_epsilon", "imitation", config.rsi_epsilon);
  read_optional(doc, "future_offsets", "imitation", config.future_offsets);
  read_optional(doc, "com_deviation_limit", "imitation", config.com_deviation_limit);
  read_optional(doc, "head_done_height", "imitation", config.head_done_height);
  read_optional(doc, "standing_steps", "imitation", config.standing_steps);
  read_optional(doc, "standing_com_floor", "imitation", config.standing_com_floor);
  read_optional(doc, "reference_cap", "imitation", config.reference_cap);
  read_optional(doc, "residual_scale", "imitation", config.residual_scale);
  config.validate();
  return config;
}

Json imitation_config_to_json(const ImitationConfig& c) {
  return {{"kappa_low", c.kappa_low},
          {"kappa_high", c.kappa_high},
          {"rsi_epsilon", c.rsi_epsilon},
          {"future_offsets", c.future_offsets},
          {"com_deviation_limit", c.com_deviation_limit},
          {"head_done_height", c.head_done_height},
          {"standing_steps", c.standing_steps},
          {"standing_com_floor", c.standing_com_floor},
          {"reference_cap", c.reference_cap},
          {"residual_scale", c.residual_scale}};
}

bool ReferenceFrame::operator==(const ReferenceFrame& o) const {
  return q == o.q && com_height == o.com_height && torso_up == o.torso_up &&
         hip_velocities == o.hip_velocities && state.q == o.state.q &&
         state.qdot == o.state.qdot && state.time == o.state.time &&
         source_time == o.source_time;
}

void recompute_hip_velocities(ReferenceTrajectory& ref) {
  const int n = ref.length();
  for (int k = 0; k < n; ++k) {
    Vec2 v(0.0, 0.0);
    if (n > 1) {
      const int lo = std::max(0, k - 1);
      const int hi = std::min(n - 1, k + 1);
      for (int h = 0; h < 2; ++h) {
        const int idx = ref.hip_indices[h];
        if (idx < 0) continue;
        v[h] = (ref.frames[hi].q[idx] - ref.frames[lo].q[idx]) / ((hi - lo) * ref.dt);
      }
    }
    ref.frames[k].hip_velocities = v;
  }
}

ReferenceFrame reference_frame(const CharacterModel& model, const SimState& state) {
  const Kinematics kin = forward_kinematics(model, state.q);
  ReferenceFrame f;
  f.q = state.q.tail(model.num_actuated());
  f.com_height = kin.com.y();
  f.torso_up = std::cos(kin.links[model.torso_index].angle);
  f.state = state;
  return f;
}

ReferenceTrajectory generate_reference(const ActionFn& policy, const CharacterModel& model,
                                       const EnvConfig& env, const SimConfig& sim,
                                       const SimState& initial, double strength,
                                       const ImitationConfig& config) {
  ReferenceTrajectory ref;
  ref.hip_indices = model.hip_actuators;
  ref.dt = 1.0 / env.control_hz;
  ref.frames.push_back(reference_frame(model, initial));
  ref.frames.back().source_time = 0.0;
  const Vec limits = model.torque_limits();
  SimState state = initial;
  for (int step = 0; step < config.reference_cap; ++step) {
    const Vec obs = observe_weak(state, model, strength, env.mirror_observation).flatten();
    const Vec action = policy(obs, strength);
    try {
      state = control_step(model, state, limits.cwiseProduct(action), sim);
    } catch (const DivergenceError& e) {
      throw ReferenceFailedError(std::string("reference rollout diverged: ") + e.what());
    }
    ref.frames.push_back(reference_frame(model, state));
    ref.frames.back().source_time = step + 1;
    if (forward_kinematics(model, state.q).head_height > config.head_done_height) {
      recompute_hip_velocities(ref);
      return ref;
    }
  }
  throw ReferenceFailedError("head never rose above " + std::to_string(config.head_done_height) +
                             " m within " + std::to_string(config.reference_cap) + " steps");
}

std::vector<double> retime_source_times(int duration, double kappa) {
  if (!(kappa > 0.0)) throw ContractError("retiming coefficient must be positive");
  if (duration < 0) throw ContractError("negative reference duration");
  const auto count = static_cast<int>(std::ceil(duration / kappa - 1e-9));
  std::vector<double> times(count + 1);
  for (int k = 0; k <= count; ++k) times[k] = std::min(k * kappa, static_cast<double>(duration));
  times[count] = duration;
  return times;
}

ReferenceTrajectory retime(const ReferenceTrajectory& ref, double kappa) {
  if (!(kappa > 0.0)) throw ContractError("retiming coefficient must be positive");
  if (ref.length() < 2) throw ContractError("reference needs at least two frames");
  const int T = ref.duration();
  const std::vector<double> times = retime_source_times(T, kappa);
  ReferenceTrajectory out;
  out.hip_indices = ref.hip_indices;
  out.dt = ref.dt;
  out.kappa = ref.kappa * kappa;
  out.frames.reserve(times.size());
  for (double t : times) {
    const int i = std::min(static_cast<int>(std::floor(t)), T);
    const double f = t - i;
    ReferenceFrame frame;
    if (f == 0.0) {
      frame = ref.frames[i];
    } else {
      const ReferenceFrame& a = ref.frames[i];
      const ReferenceFrame& b = ref.frames[i + 1];
      frame.q = a.q + f * (b.q - a.q);
      frame.com_height = a.com_height + f * (b.com_height - a.com_height);
      frame.torso_up = a.torso_up + f * (b.torso_up - a.torso_up);
      frame.source_time = a.source_time + f * (b.source_time - a.source_time);
      frame.state = ref.frames[f < 0.5 ? i : i + 1].state;
    }
    frame.state.qdot *= kappa;
    out.frames.push_back(std::move(frame));
  }
  recompute_hip_velocities(out);
  return out;
}

int sample_start(int length, double epsilon, Rng& rng) {
  if (length <= 0) throw ContractError("empty reference");
  if (!(epsilon >= 0.0 && epsilon <= 1.0)) throw ContractError("epsilon must lie in [0, 1]");
  if (rng.uniform() < epsilon) return 0;
  return static_cast<int>(rng.index(length));
}

ReferenceTrajectory insert_pause(const ReferenceTrajectory& ref, int index, int repeat_count) {
  if (index < 0 || index >= ref.length()) throw ContractError("pause index out of range");
  if (repeat_count < 0) throw ContractError("negative pause length");
  ReferenceTrajectory out = ref;
  out.frames.insert(out.frames.begin() + index + 1, static_cast<size_t>(repeat_count),
                    ref.frames[index]);
  return out;
}

StandingTarget standing_target(const CharacterModel& model) {
  const SimState standing = standing_state(model);
  const ReferenceFrame f = reference_frame(model, standing);
  return {f.q, f.com_height, f.torso_up};
}

int slow_observation_dim(const CharacterModel& model) {
  return weak_observation_dim(model) + 2 * (model.num_actuated() + 2);
}

Vec observe_slow(const SimState& state, const ReferenceTrajectory& ref, int t,
                 const CharacterModel& model, double strength, std::array<int, 2> offsets,
                 bool mirror) {
  if (t < 0) throw ContractError("negative step index");
  const Vec base = observe_weak(state, model, strength, mirror).flatten();
  const int j = model.num_actuated();
  const StandingTarget standing = standing_target(model);
  Vec obs(base.size() + 2 * (j + 2));
  obs.head(base.size()) = base;
  Eigen::Index at = base.size();
  for (int offset : offsets) {
    const int idx = t + offset;
    if (idx < ref.length()) {
      const ReferenceFrame& f = ref.frames[idx];
      obs.segment(at, j) = f.q;
      obs[at + j] = f.com_height;
      obs[at + j + 1] = f.torso_up;
    } else {
      obs.segment(at, j) = standing.q;
      obs[at + j] = standing.com_height;
      obs[at + j + 1] = standing.torso_up;
    }
    at += j + 2;
  }
  return obs;
}

Phase imitation_phase(const ReferenceTrajectory& ref, int t) {
  return t < ref.duration() ? Phase::kGetup : Phase::kStanding;
}

Vec pd_target(const ImitationContext& ctx, const ReferenceTrajectory& ref, int t,
              const Vec& residual) {
  if (imitation_phase(ref, t) == Phase::kGetup) {
    return ref.frames[std::min(t + 1, ref.duration())].q + residual;
  }
  return standing_target(*ctx.model).q + residual;
}

RewardBreakdown imitation_reward(const ImitationContext& ctx, const SimState& state,
                                 const ReferenceTrajectory& ref, int t) {
  const CharacterModel& model = *ctx.model;
  const ReferenceFrame now = reference_frame(model, state);
  if (imitation_phase(ref, t) == Phase::kGetup) {
    const ReferenceFrame& target = ref.frames[std::min(t + 1, ref.duration())];
    SlowRewardInputs in;
    in.com_height_delta = now.com_height - target.com_height;
    in.orientation_delta = Vec::Constant(1, now.torso_up - target.torso_up);
    for (int h = 0; h < 2; ++h) {
      const int idx = model.hip_actuators[h];
      if (idx < 0) continue;
      in.hip_velocity_delta[h] = state.qdot[3 + idx] - target.hip_velocities[h];
    }
    return reward_slow(in, *ctx.reward);
  }
  const StandingTarget standing = standing_target(model);
  BalanceRewardInputs in;
  in.com_velocity_horizontal = Vec::Constant(1, com_velocity(model, state.q, state.qdot).x());
  in.torso_up_z = now.torso_up;
  in.com_height = now.com_height;
  in.com_height_delta = now.com_height - standing.com_height;
  return reward_balance(in, now.q, standing.q, *ctx.reward);
}

ImitationStepResult imitation_step(const ImitationContext& ctx, const SimState& state,
                                   const Vec& residual, const ReferenceTrajectory& ref, int t) {
  const CharacterModel& model = *ctx.model;
  if (residual.size() != model.num_actuated()) throw ContractError("residual dimension mismatch");
  if ((residual.array().abs() > std::numbers::pi).any()) {
    throw ContractError("residual exceeds pi");
  }
  ImitationStepResult result;
  result.phase = imitation_phase(ref, t);
  result.pd_target = pd_target(ctx, ref, t, residual);
  PdCommand command;
  command.kp = model.torque_limits();
  command.kd = command.kp / 10.0;
  command.target = result.pd_target;
  command.limits = ctx.strength * model.torque_limits();
  try {
    result.state = control_step_pd(model, state, command, *ctx.sim);
  } catch (const DivergenceError&) {
    result.state = state;
    result.done = true;
    result.diverged = true;
    return result;
  }
  result.reward = imitation_reward(ctx, result.state, ref, t);
  const double h = reference_frame(model, result.state).com_height;
  if (result.phase == Phase::kGetup) {
    const double expected = ref.frames[std::min(t + 1, ref.duration())].com_height;
    if (std::abs(h - expected) > ctx.config->com_deviation_limit) result.done = true;
  } else if (h < ctx.config->standing_com_floor) {
    result.done = true;
  }
  if (!result.done && t + 1 >= ref.duration() + ctx.config->standing_steps) {
    result.done = true;
    result.truncated = true;
  }
  return result;
}

ImitationEnv::ImitationEnv(CharacterModel model, SimConfig sim, RewardConfig reward,
                           ImitationConfig config, double strength)
    : model_(std::move(model)),
      sim_(sim),
      reward_(std::move(reward)),
      config_(config),
      strength_(strength) {
  config_.validate();
  if (!(strength > 0.0 && strength <= 1.0)) throw ContractError("strength must lie in (0, 1]");
}

ImitationContext ImitationEnv::context() const {
  return {&model_, &sim_, &reward_, &config_, strength_};
}

const Vec& ImitationEnv::reset(ReferenceTrajectory reference, int start_index) {
  if (start_index < 0 || start_index >= reference.length()) {
    throw ContractError("start index out of range");
  }
  reference_ = std::move(reference);
  t_ = start_index;
  state_ = reference_.frames[start_index].state;
  observation_ = observe_slow(state_, reference_, t_, model_, strength_, config_.future_offsets);
  return observation_;
}

ImitationStepResult ImitationEnv::step(const Vec& action) {
  ImitationStepResult r =
      imitation_step(context(), state_, config_.residual_scale * action, reference_, t_);
  state_ = r.state;
  ++t_;
  observation_ = observe_slow(state_, reference_, t_, model_, strength_, config_.future_offsets);
  return r;
}

}  // namespace getup
