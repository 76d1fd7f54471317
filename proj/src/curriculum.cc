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

#include "getup/curriculum.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "getup/error.h"

namespace getup {

void CurriculumConfig::validate() const {
  if (!(beta > 0.0 && beta < 1.0)) throw ConfigError("must lie in (0, 1)", "curriculum.beta");
  if (!(noise_std >= 0.0)) throw ConfigError("must be non-negative", "curriculum.noise_std");
  if (min_steps < 0 || max_steps < min_steps) {
    throw ConfigError("requires 0 <= min_steps <= max_steps", "curriculum.max_steps");
  }
  if (!(growth > 0.0)) throw ConfigError("must be positive", "curriculum.growth");
  if (!(min_multiplier > 0.0 && min_multiplier <= 1.0)) {
    throw ConfigError("must lie in (0, 1]", "curriculum.min_multiplier");
  }
  if (test_episodes <= 0) throw ConfigError("must be positive", "curriculum.test_episodes");
  if (statistic != "min" && statistic != "mean" && statistic != "running_min") {
    throw ConfigError("expected min, mean or running_min", "curriculum.statistic");
  }
}

CurriculumConfig curriculum_config_from_json(const Json& doc, CurriculumConfig config) {
  read_optional(doc, "beta", "curriculum", config.beta);
  read_optional(doc, "threshold", "curriculum", config.threshold);
  read_optional(doc, "min_steps", "curriculum", config.min_steps);
  read_optional(doc, "max_steps", "curriculum", config.max_steps);
  read_optional(doc, "growth", "curriculum", config.growth);
  read_optional(doc, "noise_std", "curriculum", config.noise_std);
  read_optional(doc, "min_multiplier", "curriculum", config.min_multiplier);
  read_optional(doc, "test_episodes", "curriculum", config.test_episodes);
  read_optional(doc, "statistic", "curriculum", config.statistic);
  config.validate();
  return config;
}

Json curriculum_config_to_json(const CurriculumConfig& c) {
  return {{"beta", c.beta},           {"threshold", c.threshold},
          {"min_steps", c.min_steps}, {"max_steps", c.max_steps},
          {"growth", c.growth},       {"noise_std", c.noise_std},
          {"min_multiplier", c.min_multiplier}, {"test_episodes", c.test_episodes},
          {"statistic", c.statistic}};
}

const char* to_string(CurriculumDecision decision) {
  switch (decision) {
    case CurriculumDecision::kAdvance:
      return "advance";
    case CurriculumDecision::kTerminate:
      return "terminate";
    case CurriculumDecision::kContinue:
      break;
  }
  return "continue";
}

Json curriculum_state_to_json(const CurriculumState& s) {
  return {{"stage", s.stage},
          {"multiplier", s.multiplier},
          {"stage_steps", s.stage_steps},
          {"previous_steps", s.previous_steps},
          {"budget", s.budget},
          {"running_statistic", s.running_statistic},
          {"evaluations_in_stage", s.evaluations_in_stage},
          {"terminated", s.terminated}};
}

CurriculumState curriculum_state_from_json(const Json& doc) {
  CurriculumState s;
  try {
    s.stage = doc.at("stage").get<int>();
    s.multiplier = doc.at("multiplier").get<double>();
    s.stage_steps = doc.at("stage_steps").get<int64_t>();
    s.previous_steps = doc.at("previous_steps").get<int64_t>();
    s.budget = doc.at("budget").get<int64_t>();
    s.running_statistic = doc.at("running_statistic").get<double>();
    s.evaluations_in_stage = doc.at("evaluations_in_stage").get<int>();
    s.terminated = doc.at("terminated").get<bool>();
  } catch (const Json::exception& e) {
    throw ConfigError(e.what(), "curriculum_state");
  }
  return s;
}

Curriculum::Curriculum(CurriculumConfig config) : config_(std::move(config)) {
  config_.validate();
  state_.budget = config_.min_steps;
}

double Curriculum::multiplier_for_noise(double z) const {
  return std::clamp(state_.multiplier + config_.noise_std * z, config_.min_multiplier, 1.0);
}

double Curriculum::sample_multiplier(Rng& rng) const { return multiplier_for_noise(rng.normal()); }

CurriculumDecision Curriculum::on_evaluation(const std::vector<double>& returns) {
  if (static_cast<int>(returns.size()) < config_.test_episodes) {
    throw ContractError("expected " + std::to_string(config_.test_episodes) +
                        " test returns, got " + std::to_string(returns.size()));
  }
  double stat = 0.0;
  if (config_.statistic == "mean") {
    stat = std::accumulate(returns.begin(), returns.end(), 0.0) / returns.size();
  } else {
    stat = *std::min_element(returns.begin(), returns.end());
    if (config_.statistic == "running_min" && state_.evaluations_in_stage > 0) {
      stat = std::min(stat, state_.running_statistic);
    }
  }
  state_.running_statistic = stat;
  ++state_.evaluations_in_stage;

  if (stat > config_.threshold) {
    state_.previous_steps = state_.stage_steps;
    const auto grown = static_cast<int64_t>(std::llround(config_.growth * state_.stage_steps));
    state_.budget = std::clamp(grown, config_.min_steps, config_.max_steps);
    ++state_.stage;
    state_.multiplier = std::pow(config_.beta, state_.stage);
    state_.stage_steps = 0;
    state_.evaluations_in_stage = 0;
    state_.running_statistic = 0.0;
    return CurriculumDecision::kAdvance;
  }
  // Stage 0 is the discovery phase; the budget only applies once the policy
  // has solved the task at least once.
  if (state_.stage > 0 && state_.stage_steps > state_.budget) {
    state_.terminated = true;
    return CurriculumDecision::kTerminate;
  }
  return CurriculumDecision::kContinue;
}

}  // namespace getup
