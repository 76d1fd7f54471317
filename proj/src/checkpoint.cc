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

#include "getup/checkpoint.h"

#include <cstring>
#include <fstream>
#include <iostream>
#include <sstream>
#include <vector>

#include "getup/error.h"

namespace getup {
namespace {

struct Block {
  std::string name;
  const Vec* data;
};

Json adam_json(const Adam& adam) {
  return {{"steps", adam.steps()}, {"learning_rate", adam.learning_rate()}};
}

std::string read_binary_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_binary_file(const std::filesystem::path& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("write failed for '" + path.string() + "'");
}

}  // namespace

const char* to_string(PolicyStage stage) {
  switch (stage) {
    case PolicyStage::kWeak:
      return "weak";
    case PolicyStage::kSlow:
      return "slow";
    case PolicyStage::kStrong:
      break;
  }
  return "strong";
}

PolicyStage policy_stage_from_string(const std::string& text) {
  if (text == "strong") return PolicyStage::kStrong;
  if (text == "weak") return PolicyStage::kWeak;
  if (text == "slow") return PolicyStage::kSlow;
  throw IntegrityError("unknown stage tag '" + text + "'");
}

void save_checkpoint(const Checkpoint& c, const std::filesystem::path& dir) {
  const SacAgent& a = c.agent;
  std::vector<Vec> owned;
  owned.reserve(16);
  std::vector<Block> blocks;
  auto add = [&](const std::string& name, const Vec& v) { blocks.push_back({name, &v}); };
  auto add_copy = [&](const std::string& name, Vec v) {
    owned.push_back(std::move(v));
    blocks.push_back({name, &owned.back()});
  };
  add("actor", a.policy().network().params());
  for (int i = 0; i < 2; ++i) add("critic_" + std::to_string(i), a.critic(i).params());
  for (int i = 0; i < 2; ++i) add("target_critic_" + std::to_string(i), a.target_critic(i).params());
  add_copy("log_alpha", Vec::Constant(1, a.log_alpha()));
  add("adam_actor_m", a.actor_optimizer().first_moment());
  add("adam_actor_v", a.actor_optimizer().second_moment());
  for (int i = 0; i < 2; ++i) {
    add("adam_critic_" + std::to_string(i) + "_m", a.critic_optimizer(i).first_moment());
    add("adam_critic_" + std::to_string(i) + "_v", a.critic_optimizer(i).second_moment());
  }
  add("adam_temperature_m", a.temperature_optimizer().first_moment());
  add("adam_temperature_v", a.temperature_optimizer().second_moment());
  if (c.reference_policy) add("reference_actor", c.reference_policy->network().params());

  Json layout = Json::array();
  std::string payload;
  int64_t offset = 0;
  for (const Block& b : blocks) {
    layout.push_back({{"name", b.name}, {"offset", offset}, {"count", b.data->size()}});
    payload.append(reinterpret_cast<const char*>(b.data->data()),
                   static_cast<size_t>(b.data->size()) * sizeof(double));
    offset += b.data->size();
  }

  Json manifest;
  manifest["schema_version"] = kCheckpointSchemaVersion;
  manifest["kind"] = "checkpoint";
  manifest["stage"] = to_string(c.stage);
  manifest["config_hash"] = c.config_hash;
  manifest["config"] = c.config;
  manifest["observation_dim"] = a.policy().observation_dim();
  manifest["action_dim"] = a.policy().action_dim();
  manifest["layers"] = {{"actor", a.policy().network().sizes()},
                        {"critic", a.critic(0).sizes()}};
  if (c.reference_policy) {
    manifest["layers"]["reference_actor"] = c.reference_policy->network().sizes();
  }
  manifest["hyperparameters"] = sac_config_to_json(a.config());
  manifest["optimizers"] = {{"actor", adam_json(a.actor_optimizer())},
                            {"critic_0", adam_json(a.critic_optimizer(0))},
                            {"critic_1", adam_json(a.critic_optimizer(1))},
                            {"temperature", adam_json(a.temperature_optimizer())}};
  manifest["reference_strength"] = c.reference_strength;
  manifest["curriculum"] = curriculum_state_to_json(c.curriculum);
  manifest["rng_states"] = c.rng_states;
  manifest["trainer"] = c.trainer;
  manifest["payload"] = {{"file", "params.bin"},
                         {"doubles", offset},
                         {"fnv1a64", hex64(fnv1a64(payload))},
                         {"blocks", layout}};

  std::filesystem::path tmp = dir;
  tmp += ".tmp";
  std::error_code ec;
  std::filesystem::remove_all(tmp, ec);
  std::filesystem::create_directories(tmp, ec);
  if (ec) throw IoError("cannot create '" + tmp.string() + "': " + ec.message());
  write_binary_file(tmp / "params.bin", payload);
  if (c.replay) {
    std::ostringstream replay;
    c.replay->write_binary(replay);
    const std::string bytes = replay.str();
    write_binary_file(tmp / "replay.bin", bytes);
    manifest["replay"] = {{"file", "replay.bin"},
                          {"bytes", bytes.size()},
                          {"fnv1a64", hex64(fnv1a64(bytes))}};
  }
  write_text_file(tmp / "manifest.json", manifest.dump(2) + "\n");
  std::filesystem::remove_all(dir, ec);
  std::filesystem::rename(tmp, dir, ec);
  if (ec) throw IoError("cannot move checkpoint into '" + dir.string() + "': " + ec.message());
}

Checkpoint load_checkpoint(const std::filesystem::path& dir, const LoadOptions& options) {
  const std::filesystem::path manifest_path = dir / "manifest.json";
  if (!std::filesystem::exists(manifest_path)) {
    throw IoError("no checkpoint manifest at '" + manifest_path.string() + "'");
  }
  Json m;
  try {
    m = Json::parse(read_binary_file(manifest_path));
  } catch (const Json::parse_error& e) {
    throw IntegrityError(std::string("manifest is not valid JSON: ") + e.what());
  }
  Checkpoint c;
  try {
    const int version = m.at("schema_version").get<int>();
    if (version != kCheckpointSchemaVersion) {
      throw SchemaVersionError(version, kCheckpointSchemaVersion);
    }
    c.stage = policy_stage_from_string(m.at("stage").get<std::string>());
    c.config_hash = m.at("config_hash").get<std::string>();
    c.config = m.at("config");
    if (options.expected_config_hash && *options.expected_config_hash != c.config_hash) {
      const std::string msg = "checkpoint config hash " + c.config_hash +
                              " differs from the supplied config " +
                              *options.expected_config_hash;
      if (!options.allow_config_mismatch) throw ConfigError(msg + " (pass the proceed flag)", "config");
      std::cerr << "warning: " << msg << "\n";
    }
    const int obs_dim = m.at("observation_dim").get<int>();
    const int act_dim = m.at("action_dim").get<int>();
    const SacConfig sac = sac_config_from_json(m.at("hyperparameters"));
    Rng scratch(0);
    c.agent = SacAgent(obs_dim, act_dim, sac, scratch);
    if (m.at("layers").at("actor").get<std::vector<int>>() != c.agent.policy().network().sizes() ||
        m.at("layers").at("critic").get<std::vector<int>>() != c.agent.critic(0).sizes()) {
      throw IntegrityError("layer shapes disagree with hyperparameters");
    }
    if (m.at("layers").contains("reference_actor")) {
      const auto sizes = m.at("layers").at("reference_actor").get<std::vector<int>>();
      std::vector<int> hidden(sizes.begin() + 1, sizes.end() - 1);
      c.reference_policy = SquashedGaussianPolicy(sizes.front(), sizes.back() / 2, hidden, scratch,
                                                  sac.log_std_min, sac.log_std_max);
    }
    c.reference_strength = m.at("reference_strength").get<double>();
    c.curriculum = curriculum_state_from_json(m.at("curriculum"));
    c.rng_states = m.at("rng_states").get<std::map<std::string, std::string>>();
    c.trainer = m.at("trainer");

    const Json& payload = m.at("payload");
    const std::string bytes = read_binary_file(dir / payload.at("file").get<std::string>());
    const auto doubles = payload.at("doubles").get<int64_t>();
    if (static_cast<int64_t>(bytes.size()) != doubles * static_cast<int64_t>(sizeof(double))) {
      throw IntegrityError("payload has " + std::to_string(bytes.size()) + " bytes, manifest declares " +
                           std::to_string(doubles) + " doubles");
    }
    if (hex64(fnv1a64(bytes)) != payload.at("fnv1a64").get<std::string>()) {
      throw IntegrityError("payload checksum mismatch");
    }
    const auto* data = reinterpret_cast<const double*>(bytes.data());
    std::map<std::string, Vec> blocks;
    for (const Json& b : payload.at("blocks")) {
      const auto offset = b.at("offset").get<int64_t>();
      const auto count = b.at("count").get<int64_t>();
      if (offset < 0 || count < 0 || offset + count > doubles) {
        throw IntegrityError("payload block out of range");
      }
      Vec v(count);
      std::memcpy(v.data(), data + offset, static_cast<size_t>(count) * sizeof(double));
      blocks[b.at("name").get<std::string>()] = std::move(v);
    }
    auto take = [&](const std::string& name, Vec& target) {
      auto it = blocks.find(name);
      if (it == blocks.end()) throw IntegrityError("payload block '" + name + "' missing");
      if (it->second.size() != target.size()) {
        throw IntegrityError("payload block '" + name + "' has the wrong length");
      }
      target = it->second;
    };
    SacAgent& a = c.agent;
    take("actor", a.policy().network().params());
    for (int i = 0; i < 2; ++i) {
      take("critic_" + std::to_string(i), a.critic(i).params());
      take("target_critic_" + std::to_string(i), a.target_critic(i).params());
    }
    Vec log_alpha(1);
    take("log_alpha", log_alpha);
    a.set_log_alpha(log_alpha[0]);
    auto restore_adam = [&](Adam& adam, const std::string& prefix, const std::string& key) {
      Vec first = adam.first_moment(), second = adam.second_moment();
      take(prefix + "_m", first);
      take(prefix + "_v", second);
      adam.restore(m.at("optimizers").at(key).at("steps").get<int64_t>(), std::move(first),
                   std::move(second));
    };
    restore_adam(a.actor_optimizer(), "adam_actor", "actor");
    for (int i = 0; i < 2; ++i) {
      restore_adam(a.critic_optimizer(i), "adam_critic_" + std::to_string(i),
                   "critic_" + std::to_string(i));
    }
    restore_adam(a.temperature_optimizer(), "adam_temperature", "temperature");
    if (c.reference_policy) take("reference_actor", c.reference_policy->network().params());

    if (options.load_replay && m.contains("replay")) {
      const Json& r = m.at("replay");
      const std::string replay_bytes = read_binary_file(dir / r.at("file").get<std::string>());
      if (replay_bytes.size() != r.at("bytes").get<size_t>()) {
        throw IntegrityError("replay file length differs from the manifest");
      }
      if (hex64(fnv1a64(replay_bytes)) != r.at("fnv1a64").get<std::string>()) {
        throw IntegrityError("replay checksum mismatch");
      }
      std::istringstream in(replay_bytes);
      ReplayBuffer buffer;
      buffer.read_binary(in);
      c.replay = std::move(buffer);
    }
  } catch (const Json::exception& e) {
    throw IntegrityError(std::string("malformed manifest: ") + e.what());
  }
  return c;
}

}  // namespace getup
