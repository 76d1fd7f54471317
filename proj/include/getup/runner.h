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

#ifndef GETUP_RUNNER_H_
#define GETUP_RUNNER_H_

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "getup/character.h"
#include "getup/checkpoint.h"
#include "getup/curriculum.h"
#include "getup/env.h"
#include "getup/imitation.h"
#include "getup/reward.h"
#include "getup/sac.h"
#include "getup/sim.h"
#include "getup/trajectory_log.h"

namespace getup {

struct TrainingConfig {
  int64_t max_steps = 2000000;
  int64_t eval_interval = 20000;
  int eval_episodes = 10;
  int64_t checkpoint_interval = 100000;
  bool parallel_eval = false;
  bool use_curriculum = true;
  // Fixed torque multiplier for every episode (curriculum disabled).
  std::optional<double> fixed_multiplier;
  double slow_discount = 0.95;
  int64_t slow_max_steps = 2000000;
  // Forces kappa for every slow-stage episode.
  std::optional<double> kappa;
  bool keep_replay_in_checkpoints = true;

  void validate() const;
};

struct ExperimentConfig {
  std::string preset = "desk";
  std::filesystem::path character = "characters/planar_humanoid.json";
  std::string variant = "full";
  uint64_t seed = 0;
  std::filesystem::path output_dir = "runs/default";
  SimConfig sim;
  EnvConfig env;
  RewardConfig reward;
  SacConfig sac;
  CurriculumConfig curriculum;
  ImitationConfig imitation;
  TrainingConfig training;

  void validate() const;
};

// "paper" keeps the published hyperparameters; "desk" shrinks networks,
// batch, curriculum budgets and evaluation interval.
ExperimentConfig preset_config(const std::string& name);
// Sections in `document` override the preset named by its "preset" key (or
// `preset` when given). Relative character paths resolve against the file.
ExperimentConfig experiment_config_from_json(const Json& document,
                                             const std::optional<std::string>& preset = {},
                                             const std::filesystem::path& base_dir = {});
ExperimentConfig load_experiment_config(const std::filesystem::path& path,
                                        const std::optional<std::string>& preset = {});
Json experiment_config_to_json(const ExperimentConfig& config);
// Hash of everything except the output directory.
std::string config_hash(const ExperimentConfig& config);

CharacterModel load_experiment_character(const ExperimentConfig& config);

struct ProgressRow {
  int64_t env_step = 0;
  int64_t episodes = 0;
  int stage = 0;
  double multiplier = 1.0;
  double min_return = 0.0;
  double mean_return = 0.0;
  int64_t budget = 0;
  std::string decision;
  double alpha = 0.0;
  int64_t reference_failures = 0;

  bool operator==(const ProgressRow&) const = default;
};

std::string progress_csv(const std::vector<ProgressRow>& rows);

struct TrainResult {
  Checkpoint checkpoint;
  std::vector<ProgressRow> progress;
  std::filesystem::path final_checkpoint;
  bool curriculum_terminated = false;
};

struct TrainOptions {
  // Resume from this checkpoint instead of initializing.
  std::optional<std::filesystem::path> resume;
  // Stop after this many total env steps (overrides training.max_steps).
  std::optional<int64_t> stop_at;
  bool write_outputs = true;
  bool allow_config_mismatch = false;
  std::function<void(const ProgressRow&)> on_evaluation;
};

TrainResult run_train_weak(const ExperimentConfig& config, const TrainOptions& options = {});
TrainResult run_train_slow(const ExperimentConfig& config, const Checkpoint& weak,
                           const TrainOptions& options = {});

struct Pause {
  int index = 0;
  int count = 0;
};
Pause parse_pause(const std::string& text);  // "IDX:COUNT"

struct RolloutOptions {
  uint64_t seed = 0;
  std::optional<double> kappa;
  std::vector<Pause> pauses;
};

struct RolloutResult {
  TrajectoryLog log;
  std::optional<ReferenceTrajectory> reference;  // retimed and paused, slow only
};

RolloutResult rollout(const ExperimentConfig& config, const Checkpoint& checkpoint,
                      const RolloutOptions& options);

// Initial states for evaluation, fixed by the experiment seed.
std::vector<SimState> evaluation_states(const CharacterModel& model, const ExperimentConfig& config);

}  // namespace getup

#endif  // GETUP_RUNNER_H_
