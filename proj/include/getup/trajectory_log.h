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

#ifndef GETUP_TRAJECTORY_LOG_H_
#define GETUP_TRAJECTORY_LOG_H_

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "getup/character.h"
#include "getup/json_util.h"
#include "getup/reward.h"
#include "getup/sim.h"

namespace getup {

inline constexpr int kTrajectorySchemaVersion = 1;

enum class Phase { kRagdoll, kGetup, kStanding };
const char* to_string(Phase phase);
Phase phase_from_string(const std::string& text);

struct TrajectoryRecord {
  int64_t step = 0;
  double time = 0.0;
  Phase phase = Phase::kGetup;
  Vec q;
  Vec qdot;
  Vec action;
  std::map<std::string, double> reward_terms;
  double reward = 0.0;
  double scale = 1.0;
  double head_height = 0.0;
  double torso_up = 0.0;
  Vec2 com{0.0, 0.0};
};

// Line-delimited JSON: a header line followed by one line per control step.
struct TrajectoryLog {
  std::string run_id;
  std::vector<std::string> joint_names;     // actuated joints, q order after the root
  std::map<std::string, double> locked_joints;
  Json metadata = Json::object();
  std::vector<TrajectoryRecord> records;
};

TrajectoryRecord make_record(const CharacterModel& model, const SimState& state, int64_t step,
                             Phase phase, const Vec& action, const RewardBreakdown& reward,
                             double scale);
TrajectoryLog make_log(const CharacterModel& model, std::string run_id);

void write_trajectory_log(std::ostream& out, const TrajectoryLog& log);
void write_trajectory_log(const std::filesystem::path& path, const TrajectoryLog& log);
// Malformed lines raise ParseError with the 1-based line number.
TrajectoryLog read_trajectory_log(std::istream& in);
TrajectoryLog read_trajectory_log(const std::filesystem::path& path);

}  // namespace getup

#endif  // GETUP_TRAJECTORY_LOG_H_
