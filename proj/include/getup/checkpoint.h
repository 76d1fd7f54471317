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

#ifndef GETUP_CHECKPOINT_H_
#define GETUP_CHECKPOINT_H_

#include <filesystem>
#include <map>
#include <optional>
#include <string>

#include "getup/curriculum.h"
#include "getup/json_util.h"
#include "getup/sac.h"

namespace getup {

inline constexpr int kCheckpointSchemaVersion = 1;

enum class PolicyStage { kStrong, kWeak, kSlow };
const char* to_string(PolicyStage stage);
PolicyStage policy_stage_from_string(const std::string& text);

// A checkpoint directory holds manifest.json, params.bin (little-endian
// float64 blocks in manifest order) and optionally replay.bin.
struct Checkpoint {
  PolicyStage stage = PolicyStage::kStrong;
  std::string config_hash;
  Json config = Json::object();
  SacAgent agent;
  // Weak policy used to generate references; for weak checkpoints, the last
  // policy that passed an evaluation.
  std::optional<SquashedGaussianPolicy> reference_policy;
  double reference_strength = 1.0;
  CurriculumState curriculum;
  std::map<std::string, std::string> rng_states;
  Json trainer = Json::object();
  std::optional<ReplayBuffer> replay;
};

struct LoadOptions {
  std::optional<std::string> expected_config_hash;
  bool allow_config_mismatch = false;
  bool load_replay = true;
};

void save_checkpoint(const Checkpoint& checkpoint, const std::filesystem::path& directory);
// Schema mismatch -> SchemaVersionError; payload damage -> IntegrityError;
// config hash mismatch -> ConfigError unless allow_config_mismatch, in which
// case a warning goes to stderr.
Checkpoint load_checkpoint(const std::filesystem::path& directory, const LoadOptions& options = {});

}  // namespace getup

#endif  // GETUP_CHECKPOINT_H_
