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

#include "getup/trajectory_log.h"

#include <fstream>
#include <sstream>

#include "getup/error.h"

namespace getup {
namespace {

Json vec_json(const Vec& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

Vec json_vec(const Json& j) {
  const auto values = j.get<std::vector<double>>();
  return Eigen::Map<const Vec>(values.data(), static_cast<Eigen::Index>(values.size()));
}

}  // namespace

const char* to_string(Phase phase) {
  switch (phase) {
    case Phase::kRagdoll:
      return "ragdoll";
    case Phase::kStanding:
      return "standing";
    case Phase::kGetup:
      break;
  }
  return "getup";
}

Phase phase_from_string(const std::string& text) {
  if (text == "ragdoll") return Phase::kRagdoll;
  if (text == "getup") return Phase::kGetup;
  if (text == "standing") return Phase::kStanding;
  throw ContractError("unknown phase '" + text + "'");
}

TrajectoryRecord make_record(const CharacterModel& model, const SimState& state, int64_t step,
                             Phase phase, const Vec& action, const RewardBreakdown& reward,
                             double scale) {
  const Kinematics kin = forward_kinematics(model, state.q);
  TrajectoryRecord r;
  r.step = step;
  r.time = state.time;
  r.phase = phase;
  r.q = state.q;
  r.qdot = state.qdot;
  r.action = action;
  r.reward_terms = reward.terms;
  r.reward = reward.total;
  r.scale = scale;
  r.head_height = kin.head_height;
  r.torso_up = torso_up_z(model, state.q);
  r.com = kin.com;
  return r;
}

TrajectoryLog make_log(const CharacterModel& model, std::string run_id) {
  TrajectoryLog log;
  log.run_id = std::move(run_id);
  log.joint_names = model.actuated_names();
  for (const JointSpec& j : model.joints) {
    if (j.locked) log.locked_joints[j.name] = j.locked_angle;
  }
  return log;
}

void write_trajectory_log(std::ostream& out, const TrajectoryLog& log) {
  Json header = {{"schema_version", kTrajectorySchemaVersion},
                 {"kind", "trajectory"},
                 {"run_id", log.run_id},
                 {"joint_names", log.joint_names},
                 {"locked_joints", log.locked_joints},
                 {"metadata", log.metadata}};
  out << header.dump() << '\n';
  for (const TrajectoryRecord& r : log.records) {
    Json line = {{"step", r.step},
                 {"time", r.time},
                 {"phase", to_string(r.phase)},
                 {"q", vec_json(r.q)},
                 {"qdot", vec_json(r.qdot)},
                 {"action", vec_json(r.action)},
                 {"reward_terms", r.reward_terms},
                 {"reward", r.reward},
                 {"scale", r.scale},
                 {"head_height", r.head_height},
                 {"torso_up", r.torso_up},
                 {"com", {r.com.x(), r.com.y()}}};
    out << line.dump() << '\n';
  }
}

void write_trajectory_log(const std::filesystem::path& path, const TrajectoryLog& log) {
  std::ostringstream text;
  text.precision(17);
  write_trajectory_log(text, log);
  write_text_file(path, text.str());
}

TrajectoryLog read_trajectory_log(std::istream& in) {
  TrajectoryLog log;
  std::string line;
  int64_t number = 0;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++number;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    Json j;
    try {
      j = Json::parse(line);
    } catch (const Json::parse_error& e) {
      throw ParseError(e.what(), number);
    }
    try {
      if (!have_header) {
        const int version = j.at("schema_version").get<int>();
        if (version != kTrajectorySchemaVersion) {
          throw SchemaVersionError(version, kTrajectorySchemaVersion);
        }
        log.run_id = j.at("run_id").get<std::string>();
        log.joint_names = j.at("joint_names").get<std::vector<std::string>>();
        if (j.contains("locked_joints")) {
          log.locked_joints = j.at("locked_joints").get<std::map<std::string, double>>();
        }
        if (j.contains("metadata")) log.metadata = j.at("metadata");
        have_header = true;
        continue;
      }
      TrajectoryRecord r;
      r.step = j.at("step").get<int64_t>();
      r.time = j.at("time").get<double>();
      r.phase = phase_from_string(j.at("phase").get<std::string>());
      r.q = json_vec(j.at("q"));
      r.qdot = json_vec(j.at("qdot"));
      r.action = json_vec(j.at("action"));
      r.reward_terms = j.at("reward_terms").get<std::map<std::string, double>>();
      r.reward = j.at("reward").get<double>();
      r.scale = j.at("scale").get<double>();
      r.head_height = j.at("head_height").get<double>();
      r.torso_up = j.at("torso_up").get<double>();
      const auto com = j.at("com").get<std::vector<double>>();
      if (com.size() != 2) throw ParseError("com must have two components", number);
      r.com = Vec2(com[0], com[1]);
      if (r.q.size() != static_cast<Eigen::Index>(log.joint_names.size()) + 3) {
        throw ParseError("q length does not match the header joint list", number);
      }
      log.records.push_back(std::move(r));
    } catch (const Json::exception& e) {
      throw ParseError(e.what(), number);
    } catch (const ContractError& e) {
      throw ParseError(e.what(), number);
    }
  }
  if (!have_header) throw ParseError("missing header line", number + 1);
  return log;
}

TrajectoryLog read_trajectory_log(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open trajectory log '" + path.string() + "'");
  return read_trajectory_log(in);
}

}  // namespace getup
