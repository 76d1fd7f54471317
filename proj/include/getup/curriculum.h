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

#ifndef GETUP_CURRICULUM_H_
#define GETUP_CURRICULUM_H_

#include <cstdint>
#include <string>
#include <vector>

#include "getup/json_util.h"
#include "getup/rng.h"

namespace getup {

struct CurriculumConfig {
  double beta = 0.95;
  double threshold = 60.0;  // omega, in return units
  int64_t min_steps = 300000;
  int64_t max_steps = 800000;
  double growth = 1.5;
  double noise_std = 0.04;
  double min_multiplier = 0.01;
  int test_episodes = 10;
  // "min": minimum of one evaluation; "mean": mean of one evaluation;
  // "running_min": minimum over all evaluations of the current stage.
  std::string statistic = "min";

  void validate() const;
};

CurriculumConfig curriculum_config_from_json(const Json& document, CurriculumConfig base = {});
Json curriculum_config_to_json(const CurriculumConfig& config);

enum class CurriculumDecision { kContinue, kAdvance, kTerminate };
const char* to_string(CurriculumDecision decision);

struct CurriculumState {
  int stage = 0;
  double multiplier = 1.0;     // beta^stage
  int64_t stage_steps = 0;     // N_c
  int64_t previous_steps = 0;  // N_{i-1}
  int64_t budget = 0;          // M_i
  double running_statistic = 0.0;
  int evaluations_in_stage = 0;
  bool terminated = false;

  bool operator==(const CurriculumState&) const = default;
};

Json curriculum_state_to_json(const CurriculumState& state);
CurriculumState curriculum_state_from_json(const Json& document);

class Curriculum {
 public:
  explicit Curriculum(CurriculumConfig config = {});

  const CurriculumConfig& config() const { return config_; }
  const CurriculumState& state() const { return state_; }
  void restore(const CurriculumState& state) { state_ = state; }

  // Per-episode multiplier drawn from N(beta^i, noise_std), clamped to
  // [min_multiplier, 1].
  double sample_multiplier(Rng& rng) const;
  double multiplier_for_noise(double standard_normal) const;
  void record_step() { ++state_.stage_steps; }
  CurriculumDecision on_evaluation(const std::vector<double>& test_returns);

 private:
  CurriculumConfig config_;
  CurriculumState state_;
};

}  // namespace getup

#endif  // GETUP_CURRICULUM_H_
