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

#include "getup/runner.h"

#include <algorithm>
#include <iostream>
#include <numeric>
#include <sstream>

#include "getup/error.h"

#ifndef GETUP_DATA_DIR
#define GETUP_DATA_DIR "."
#endif

namespace getup {
namespace {

enum Stream : uint64_t { kInit = 1, kEnv = 2, kPolicy = 3, kUpdate = 4, kCurriculum = 5, kEpisode = 6 };

constexpr uint64_t kWeakEvalStream = 1000;
constexpr uint64_t kSlowEvalStream = 2000;

Json optional_json(const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); }

void read_optional_double(const Json& doc, const char* key, const std::string& path,
                          std::optional<double>& target) {
  auto it = doc.find(key);
  if (it == doc.end()) return;
  if (it->is_null()) {
    target.reset();
    return;
  }
  if (!it->is_number()) throw ConfigError("expected a number or null", path + "." + key);
  target = it->get<double>();
}

TrainingConfig training_config_from_json(const Json& doc, TrainingConfig c) {
  read_optional(doc, "max_steps", "training", c.max_steps);
  read_optional(doc, "eval_interval", "training", c.eval_interval);
  read_optional(doc, "eval_episodes", "training", c.eval_episodes);
  read_optional(doc, "checkpoint_interval", "training", c.checkpoint_interval);
  read_optional(doc, "parallel_eval", "training", c.parallel_eval);
  read_optional(doc, "use_curriculum", "training", c.use_curriculum);
  read_optional_double(doc, "fixed_multiplier", "training", c.fixed_multiplier);
  read_optional(doc, "slow_discount", "training", c.slow_discount);
  read_optional(doc, "slow_max_steps", "training", c.slow_max_steps);
  read_optional_double(doc, "kappa", "training", c.kappa);
  read_optional(doc, "keep_replay_in_checkpoints", "training", c.keep_replay_in_checkpoints);
  c.validate();
  return c;
}

Json training_config_to_json(const TrainingConfig& c) {
  return {{"max_steps", c.max_steps},
          {"eval_interval", c.eval_interval},
          {"eval_episodes", c.eval_episodes},
          {"checkpoint_interval", c.checkpoint_interval},
          {"parallel_eval", c.parallel_eval},
          {"use_curriculum", c.use_curriculum},
          {"fixed_multiplier", optional_json(c.fixed_multiplier)},
          {"slow_discount", c.slow_discount},
          {"slow_max_steps", c.slow_max_steps},
          {"kappa", optional_json(c.kappa)},
          {"keep_replay_in_checkpoints", c.keep_replay_in_checkpoints}};
}

Json state_json(const SimState& s) {
  return {{"q", std::vector<double>(s.q.data(), s.q.data() + s.q.size())},
          {"qdot", std::vector<double>(s.qdot.data(), s.qdot.data() + s.qdot.size())},
          {"time", s.time}};
}

SimState state_from_json(const Json& j) {
  const auto q = j.at("q").get<std::vector<double>>();
  const auto qdot = j.at("qdot").get<std::vector<double>>();
  SimState s;
  s.q = Eigen::Map<const Vec>(q.data(), static_cast<Eigen::Index>(q.size()));
  s.qdot = Eigen::Map<const Vec>(qdot.data(), static_cast<Eigen::Index>(qdot.size()));
  s.time = j.at("time").get<double>();
  return s;
}

Json progress_json(const std::vector<ProgressRow>& rows) {
  Json out = Json::array();
  for (const ProgressRow& r : rows) {
    out.push_back({{"env_step", r.env_step},
                   {"episodes", r.episodes},
                   {"stage", r.stage},
                   {"multiplier", r.multiplier},
                   {"min_return", r.min_return},
                   {"mean_return", r.mean_return},
                   {"budget", r.budget},
                   {"decision", r.decision},
                   {"alpha", r.alpha},
                   {"reference_failures", r.reference_failures}});
  }
  return out;
}

std::vector<ProgressRow> progress_from_json(const Json& j) {
  std::vector<ProgressRow> rows;
  for (const Json& r : j) {
    ProgressRow row;
    row.env_step = r.at("env_step").get<int64_t>();
    row.episodes = r.at("episodes").get<int64_t>();
    row.stage = r.at("stage").get<int>();
    row.multiplier = r.at("multiplier").get<double>();
    row.min_return = r.at("min_return").get<double>();
    row.mean_return = r.at("mean_return").get<double>();
    row.budget = r.at("budget").get<int64_t>();
    row.decision = r.at("decision").get<std::string>();
    row.alpha = r.at("alpha").get<double>();
    row.reference_failures = r.at("reference_failures").get<int64_t>();
    rows.push_back(std::move(row));
  }
  return rows;
}

// Named RNG streams owned by a trainer.
struct Streams {
  Rng env, policy, update, curriculum, episode;

  explicit Streams(uint64_t seed)
      : env(derive_seed(seed, kEnv)),
        policy(derive_seed(seed, kPolicy)),
        update(derive_seed(seed, kUpdate)),
        curriculum(derive_seed(seed, kCurriculum)),
        episode(derive_seed(seed, kEpisode)) {}

  std::map<std::string, std::string> save() const {
    return {{"env", env.serialize()},
            {"policy", policy.serialize()},
            {"update", update.serialize()},
            {"curriculum", curriculum.serialize()},
            {"episode", episode.serialize()}};
  }

  void load(const std::map<std::string, std::string>& states) {
    auto get = [&](const char* key) -> const std::string& {
      auto it = states.find(key);
      if (it == states.end()) throw IntegrityError(std::string("checkpoint lacks rng state ") + key);
      return it->second;
    };
    env.deserialize(get("env"));
    policy.deserialize(get("policy"));
    update.deserialize(get("update"));
    curriculum.deserialize(get("curriculum"));
    episode.deserialize(get("episode"));
  }
};

Vec uniform_action(int dim, double bound, Rng& rng) {
  Vec a(dim);
  for (int j = 0; j < dim; ++j) a[j] = rng.uniform(-bound, bound);
  return a;
}

void ensure_dir(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create '" + dir.string() + "': " + ec.message());
}

void write_run_manifest(const ExperimentConfig& config, const std::string& status,
                        const std::string& stage, int64_t env_step,
                        const std::filesystem::path& latest) {
  Json j = {{"status", status},
            {"stage", stage},
            {"env_step", env_step},
            {"config_hash", config_hash(config)},
            {"config", "config.json"},
            {"progress", "progress.csv"},
            {"latest_checkpoint", latest.empty() ? Json(nullptr) : Json(latest.string())}};
  write_text_file(config.output_dir / "run.json", j.dump(2) + "\n");
}


}  // namespace

void TrainingConfig::validate() const {
  if (max_steps < 0) throw ConfigError("must be non-negative", "training.max_steps");
  if (eval_interval <= 0) throw ConfigError("must be positive", "training.eval_interval");
  if (eval_episodes <= 0) throw ConfigError("must be positive", "training.eval_episodes");
  if (checkpoint_interval <= 0) throw ConfigError("must be positive", "training.checkpoint_interval");
  if (fixed_multiplier && !(*fixed_multiplier > 0.0 && *fixed_multiplier <= 1.0)) {
    throw ConfigError("must lie in (0, 1]", "training.fixed_multiplier");
  }
  if (!(slow_discount > 0.0 && slow_discount < 1.0)) {
    throw ConfigError("must lie in (0, 1)", "training.slow_discount");
  }
  if (slow_max_steps < 0) throw ConfigError("must be non-negative", "training.slow_max_steps");
  if (kappa && !(*kappa > 0.0 && *kappa <= 1.0)) throw ConfigError("must lie in (0, 1]", "training.kappa");
}

void ExperimentConfig::validate() const {
  if (preset != "paper" && preset != "desk") throw ConfigError("expected paper or desk", "preset");
  sim.validate();
  env.validate();
  reward.validate();
  sac.validate();
  curriculum.validate();
  imitation.validate();
  training.validate();
}

ExperimentConfig preset_config(const std::string& name) {
  ExperimentConfig c;
  c.preset = name;
  c.reward.height_scale = 0.9;
  if (name == "paper") {
    c.sac.hidden = {1024, 1024};
    c.sac.batch_size = 1024;
    c.sac.warmup_steps = 10000;
    c.training.eval_interval = 20000;
    c.training.max_steps = 20000000;
    c.training.checkpoint_interval = 200000;
    c.training.slow_max_steps = 20000000;
  } else if (name == "desk") {
    c.sac.hidden = {256, 256};
    c.sac.batch_size = 256;
    c.sac.warmup_steps = 2000;
    c.sac.replay_capacity = 1000000;
    c.curriculum.min_steps = 30000;
    c.curriculum.max_steps = 80000;
    c.training.eval_interval = 5000;
    c.training.max_steps = 2000000;
    c.training.checkpoint_interval = 50000;
    c.training.slow_max_steps = 1000000;
  } else {
    throw ConfigError("unknown preset '" + name + "' (expected paper or desk)", "preset");
  }
  return c;
}

ExperimentConfig experiment_config_from_json(const Json& doc,
                                             const std::optional<std::string>& preset,
                                             const std::filesystem::path& base_dir) {
  if (!doc.is_object()) throw ConfigError("experiment config must be an object", "");
  static const char* kKeys[] = {"preset", "character", "variant", "seed", "output_dir", "sim",
                                "env", "reward", "sac", "curriculum", "imitation", "training"};
  for (auto it = doc.begin(); it != doc.end(); ++it) {
    if (std::find(std::begin(kKeys), std::end(kKeys), it.key()) == std::end(kKeys)) {
      throw ConfigError("unknown key", it.key());
    }
  }
  std::string name = "desk";
  read_optional(doc, "preset", "", name);
  if (preset) name = *preset;
  ExperimentConfig c = preset_config(name);
  if (doc.contains("character")) {
    std::string path;
    read_optional(doc, "character", "", path);
    c.character = std::filesystem::path(path).is_relative() && !base_dir.empty()
                      ? base_dir / path
                      : std::filesystem::path(path);
  }
  read_optional(doc, "variant", "", c.variant);
  read_optional(doc, "seed", "", c.seed);
  if (doc.contains("output_dir")) {
    std::string out;
    read_optional(doc, "output_dir", "", out);
    c.output_dir = out;
  }
  auto section = [&](const char* key) -> const Json& {
    static const Json kEmpty = Json::object();
    auto it = doc.find(key);
    if (it == doc.end()) return kEmpty;
    if (!it->is_object()) throw ConfigError("expected an object", key);
    return *it;
  };
  // Section keys must be ones the preset serializes, so typos fail loudly.
  const Json known = experiment_config_to_json(c);
  for (const char* key : {"sim", "env", "reward", "sac", "curriculum", "imitation", "training"}) {
    const Json& given = section(key);
    for (auto it = given.begin(); it != given.end(); ++it) {
      if (!known.at(key).contains(it.key())) {
        throw ConfigError("unknown key", std::string(key) + "." + it.key());
      }
    }
  }
  c.sim = sim_config_from_json(section("sim"), c.sim);
  c.env = env_config_from_json(section("env"), c.env);
  c.reward = reward_config_from_json(section("reward"), c.reward);
  c.sac = sac_config_from_json(section("sac"), c.sac);
  c.curriculum = curriculum_config_from_json(section("curriculum"), c.curriculum);
  c.imitation = imitation_config_from_json(section("imitation"), c.imitation);
  c.training = training_config_from_json(section("training"), c.training);
  c.validate();
  return c;
}

ExperimentConfig load_experiment_config(const std::filesystem::path& path,
                                        const std::optional<std::string>& preset) {
  return experiment_config_from_json(read_json_file(path), preset, path.parent_path());
}

Json experiment_config_to_json(const ExperimentConfig& c) {
  return {{"preset", c.preset},
          {"character", c.character.string()},
          {"variant", c.variant},
          {"seed", c.seed},
          {"output_dir", c.output_dir.string()},
          {"sim", sim_config_to_json(c.sim)},
          {"env", env_config_to_json(c.env)},
          {"reward", reward_config_to_json(c.reward)},
          {"sac", sac_config_to_json(c.sac)},
          {"curriculum", curriculum_config_to_json(c.curriculum)},
          {"imitation", imitation_config_to_json(c.imitation)},
          {"training", training_config_to_json(c.training)}};
}

std::string config_hash(const ExperimentConfig& config) {
  Json j = experiment_config_to_json(config);
  j.erase("output_dir");
  j["character"] = config.character.filename().string();
  return hex64(fnv1a64(j.dump()));
}

CharacterModel load_experiment_character(const ExperimentConfig& config) {
  std::filesystem::path path = config.character;
  if (!std::filesystem::exists(path) && path.is_relative()) {
    const std::filesystem::path fallback = std::filesystem::path(GETUP_DATA_DIR) / path;
    if (std::filesystem::exists(fallback)) path = fallback;
  }
  CharacterModel model = load_character_file(path);
  return apply_variant(model, variant_from_name(config.variant));
}

std::vector<SimState> evaluation_states(const CharacterModel& model, const ExperimentConfig& c) {
  std::vector<SimState> states;
  for (int k = 0; k < c.training.eval_episodes; ++k) {
    states.push_back(reset_ragdoll(model, c.env, c.sim, derive_seed(c.seed, kWeakEvalStream + k)));
  }
  return states;
}

std::string progress_csv(const std::vector<ProgressRow>& rows) {
  std::ostringstream out;
  out.precision(17);
  out << "env_step,episodes,stage,multiplier,min_test_return,mean_test_return,budget,decision,"
         "alpha,reference_failures\n";
  for (const ProgressRow& r : rows) {
    out << r.env_step << ',' << r.episodes << ',' << r.stage << ',' << r.multiplier << ','
        << r.min_return << ',' << r.mean_return << ',' << r.budget << ',' << r.decision << ','
        << r.alpha << ',' << r.reference_failures << '\n';
  }
  return out.str();
}

TrainResult run_train_weak(const ExperimentConfig& config, const TrainOptions& options) {
  config.validate();
  const CharacterModel model = load_experiment_character(config);
  GetupEnv env(model, config.env, config.sim, config.reward);
  CurriculumConfig curriculum_config = config.curriculum;
  curriculum_config.test_episodes = config.training.eval_episodes;
  Curriculum curriculum(curriculum_config);
  Streams rng(config.seed);
  Rng init_rng(derive_seed(config.seed, kInit));
  SacAgent agent(env.observation_dim(), env.action_dim(), config.sac, init_rng);
  ReplayBuffer replay(env.observation_dim(), env.action_dim(), config.sac.replay_capacity);
  std::optional<SquashedGaussianPolicy> best;
  double best_strength = 1.0;
  int64_t env_step = 0;
  int64_t episodes = 0;
  std::vector<ProgressRow> progress;
  bool in_episode = false;
  double scale = 1.0;
  Vec obs;
  const std::string hash = config_hash(config);

  if (options.resume) {
    Checkpoint ck = load_checkpoint(*options.resume, {hash, options.allow_config_mismatch, true});
    if (ck.stage == PolicyStage::kSlow) throw ContractError("cannot resume weak training from a slow checkpoint");
    if (!ck.replay) throw IntegrityError("checkpoint has no replay buffer to resume from");
    agent = std::move(ck.agent);
    replay = std::move(*ck.replay);
    curriculum.restore(ck.curriculum);
    rng.load(ck.rng_states);
    best = std::move(ck.reference_policy);
    best_strength = ck.reference_strength;
    try {
      env_step = ck.trainer.at("env_step").get<int64_t>();
      episodes = ck.trainer.at("episodes").get<int64_t>();
      progress = progress_from_json(ck.trainer.at("progress"));
      const Json& ep = ck.trainer.at("episode");
      in_episode = ep.at("active").get<bool>();
      if (in_episode) {
        scale = ep.at("scale").get<double>();
        obs = env.reset_to(state_from_json(ep.at("state")), scale, ep.at("step_index").get<int>())
                  .flatten();
      }
    } catch (const Json::exception& e) {
      throw IntegrityError(std::string("checkpoint trainer state: ") + e.what());
    }
  }

  const std::vector<SimState> eval_states = evaluation_states(model, config);
  const int64_t stop = options.stop_at.value_or(config.training.max_steps);
  const std::filesystem::path latest = config.output_dir / "checkpoints" / "latest";
  if (options.write_outputs) {
    ensure_dir(config.output_dir);
    write_text_file(config.output_dir / "config.json", experiment_config_to_json(config).dump(2) + "\n");
  }

  auto stage_tag = [&] {
    return curriculum.state().stage > 0 ? PolicyStage::kWeak : PolicyStage::kStrong;
  };
  auto snapshot = [&](bool with_replay) {
    Checkpoint ck;
    ck.stage = stage_tag();
    ck.config_hash = hash;
    ck.config = experiment_config_to_json(config);
    ck.agent = agent;
    ck.reference_policy = best;
    ck.reference_strength = best ? best_strength : 1.0;
    ck.curriculum = curriculum.state();
    ck.rng_states = rng.save();
    Json episode = {{"active", in_episode}};
    if (in_episode) {
      episode["scale"] = scale;
      episode["step_index"] = env.step_index();
      episode["state"] = state_json(env.state());
    }
    ck.trainer = {{"kind", "weak"},
                  {"env_step", env_step},
                  {"episodes", episodes},
                  {"progress", progress_json(progress)},
                  {"episode", episode}};
    if (with_replay) ck.replay = replay;
    return ck;
  };

  bool terminated = curriculum.state().terminated;
  const bool curriculum_active = config.training.use_curriculum && !config.training.fixed_multiplier;
  try {
    while (env_step < stop && !terminated) {
      if (!in_episode) {
        if (config.training.fixed_multiplier) {
          scale = *config.training.fixed_multiplier;
        } else {
          scale = curriculum_active ? curriculum.sample_multiplier(rng.curriculum) : 1.0;
        }
        obs = env.reset(rng.env.next_u64(), scale).flatten();
        in_episode = true;
      }
      const Vec action = env_step < config.sac.warmup_steps
                             ? uniform_action(env.action_dim(), scale, rng.policy)
                             : agent.policy().act(obs, scale, false, rng.policy).action;
      const StepResult r = env.step(action);
      Vec next = r.observation.flatten();
      replay.push({obs, action, r.reward.total, next, r.diverged, scale});
      obs = std::move(next);
      ++env_step;
      curriculum.record_step();
      if (r.done) {
        in_episode = false;
        ++episodes;
      }
      if (env_step >= config.sac.warmup_steps && replay.size() >= config.sac.batch_size) {
        for (int u = 0; u < config.sac.updates_per_step; ++u) {
          agent.update(replay.sample(config.sac.batch_size, rng.update), rng.update);
        }
      }
      if (env_step % config.training.eval_interval == 0) {
        const double eval_scale = config.training.fixed_multiplier.value_or(
            curriculum_active ? curriculum.state().multiplier : 1.0);
        const std::vector<double> returns =
            evaluate(agent.policy(), env, eval_states, eval_scale, config.training.parallel_eval);
        CurriculumDecision decision = CurriculumDecision::kContinue;
        if (curriculum_active) decision = curriculum.on_evaluation(returns);
        ProgressRow row;
        row.env_step = env_step;
        row.episodes = episodes;
        row.stage = curriculum.state().stage;
        row.multiplier = eval_scale;
        row.min_return = *std::min_element(returns.begin(), returns.end());
        row.mean_return = std::accumulate(returns.begin(), returns.end(), 0.0) / returns.size();
        row.budget = curriculum.state().budget;
        row.decision = to_string(decision);
        row.alpha = agent.alpha();
        progress.push_back(row);
        if (decision == CurriculumDecision::kAdvance ||
            (!curriculum_active && row.min_return > config.curriculum.threshold)) {
          best = agent.policy();
          best_strength = eval_scale;
        }
        if (decision == CurriculumDecision::kAdvance && options.write_outputs) {
          save_checkpoint(snapshot(false), config.output_dir / "checkpoints" /
                                               ("stage_" + std::to_string(row.stage)));
        }
        if (decision == CurriculumDecision::kTerminate) terminated = true;
        if (options.write_outputs) {
          write_text_file(config.output_dir / "progress.csv", progress_csv(progress));
        }
        if (options.on_evaluation) options.on_evaluation(row);
      }
      if (options.write_outputs && env_step % config.training.checkpoint_interval == 0) {
        save_checkpoint(snapshot(config.training.keep_replay_in_checkpoints), latest);
        write_run_manifest(config, "running", to_string(stage_tag()), env_step, latest);
      }
    }
  } catch (const TrainingDivergedError&) {
    if (options.write_outputs) {
      write_run_manifest(config, "diverged", to_string(stage_tag()), env_step,
                         std::filesystem::exists(latest) ? latest : std::filesystem::path());
    }
    throw;
  }

  TrainResult result;
  result.checkpoint = snapshot(true);
  result.progress = progress;
  result.curriculum_terminated = terminated;
  if (options.write_outputs) {
    result.final_checkpoint = config.output_dir / "final";
    save_checkpoint(result.checkpoint, result.final_checkpoint);
    write_text_file(config.output_dir / "progress.csv", progress_csv(progress));
    write_run_manifest(config, terminated ? "curriculum_terminated" : "completed",
                       to_string(stage_tag()), env_step, result.final_checkpoint);
  }
  return result;
}

namespace {

ActionFn deterministic(const SquashedGaussianPolicy& policy) {
  return [&policy](const Vec& obs, double scale) { return policy.deterministic_action(obs, scale); };
}

const SquashedGaussianPolicy& reference_policy_of(const Checkpoint& ck) {
  return ck.reference_policy ? *ck.reference_policy : ck.agent.policy();
}

}  // namespace

TrainResult run_train_slow(const ExperimentConfig& config, const Checkpoint& weak,
                           const TrainOptions& options) {
  config.validate();
  if (weak.stage != PolicyStage::kWeak) {
    throw ContractError(std::string("slow training needs a weak checkpoint, got ") +
                        to_string(weak.stage));
  }
  const CharacterModel model = load_experiment_character(config);
  const SquashedGaussianPolicy& weak_policy = reference_policy_of(weak);
  const double strength = weak.reference_strength;
  if (weak_policy.observation_dim() != weak_observation_dim(model) ||
      weak_policy.action_dim() != model.num_actuated()) {
    throw ContractError("weak policy does not match the configured character");
  }
  const ActionFn weak_act = deterministic(weak_policy);
  ImitationEnv ienv(model, config.sim, config.reward, config.imitation, strength);

  SacConfig sac = config.sac;
  sac.discount = config.training.slow_discount;
  Streams rng(derive_seed(config.seed, 77));
  Rng init_rng(derive_seed(config.seed, 78));
  SacAgent agent(ienv.observation_dim(), ienv.action_dim(), sac, init_rng);
  ReplayBuffer replay(ienv.observation_dim(), ienv.action_dim(), sac.replay_capacity);
  int64_t env_step = 0, episodes = 0, failures = 0;
  std::vector<ProgressRow> progress;
  const std::string hash = config_hash(config);

  if (options.resume) {
    Checkpoint ck = load_checkpoint(*options.resume, {hash, options.allow_config_mismatch, true});
    if (ck.stage != PolicyStage::kSlow) throw ContractError("resume needs a slow checkpoint");
    if (!ck.replay) throw IntegrityError("checkpoint has no replay buffer to resume from");
    agent = std::move(ck.agent);
    replay = std::move(*ck.replay);
    rng.load(ck.rng_states);
    try {
      env_step = ck.trainer.at("env_step").get<int64_t>();
      episodes = ck.trainer.at("episodes").get<int64_t>();
      failures = ck.trainer.at("reference_failures").get<int64_t>();
      progress = progress_from_json(ck.trainer.at("progress"));
    } catch (const Json::exception& e) {
      throw IntegrityError(std::string("checkpoint trainer state: ") + e.what());
    }
  }

  // Fixed evaluation references at the midpoint retiming.
  const double eval_kappa =
      config.training.kappa.value_or(0.5 * (config.imitation.kappa_low + config.imitation.kappa_high));
  std::vector<ReferenceTrajectory> eval_refs;
  for (int k = 0; k < 10 * config.training.eval_episodes &&
                  static_cast<int>(eval_refs.size()) < config.training.eval_episodes;
       ++k) {
    const SimState s0 = reset_ragdoll(model, config.env, config.sim,
                                      derive_seed(config.seed, kSlowEvalStream + k));
    try {
      eval_refs.push_back(retime(
          generate_reference(weak_act, model, config.env, config.sim, s0, strength, config.imitation),
          eval_kappa));
    } catch (const ReferenceFailedError&) {
    }
  }
  if (static_cast<int>(eval_refs.size()) < config.training.eval_episodes) {
    throw ReferenceFailedError("weak policy produced only " + std::to_string(eval_refs.size()) +
                               " evaluation references");
  }

  const int64_t stop = options.stop_at.value_or(config.training.slow_max_steps);
  const std::filesystem::path out = config.output_dir;
  const std::filesystem::path latest = out / "checkpoints" / "latest_slow";
  if (options.write_outputs) {
    ensure_dir(out);
    write_text_file(out / "config.json", experiment_config_to_json(config).dump(2) + "\n");
  }
  auto snapshot = [&](bool with_replay) {
    Checkpoint ck;
    ck.stage = PolicyStage::kSlow;
    ck.config_hash = hash;
    ck.config = experiment_config_to_json(config);
    ck.agent = agent;
    ck.reference_policy = weak_policy;
    ck.reference_strength = strength;
    ck.curriculum = weak.curriculum;
    ck.rng_states = rng.save();
    ck.trainer = {{"kind", "slow"},
                  {"env_step", env_step},
                  {"episodes", episodes},
                  {"reference_failures", failures},
                  {"progress", progress_json(progress)}};
    if (with_replay) ck.replay = replay;
    return ck;
  };
  auto eval_episode = [&](int k) {
    ImitationEnv local = ienv;
    Vec o = local.reset(eval_refs[k], 0);
    double total = 0.0;
    while (true) {
      ImitationStepResult r = local.step(agent.policy().deterministic_action(o, 1.0));
      total += r.reward.total;
      if (r.done) break;
      o = local.observation();
    }
    return total;
  };

  int64_t next_checkpoint = (env_step / config.training.checkpoint_interval + 1) *
                            config.training.checkpoint_interval;
  int consecutive_failures = 0;
  try {
    // Episodes always run to completion so checkpoints fall on boundaries.
    while (env_step < stop) {
      const SimState s0 = reset_ragdoll(model, config.env, config.sim, rng.env.next_u64());
      ReferenceTrajectory reference;
      try {
        reference = generate_reference(weak_act, model, config.env, config.sim, s0, strength,
                                       config.imitation);
        consecutive_failures = 0;
      } catch (const ReferenceFailedError&) {
        ++failures;
        if (++consecutive_failures > 100) {
          throw ReferenceFailedError("100 consecutive reference failures");
        }
        continue;
      }
      const double kappa = config.training.kappa.value_or(
          rng.episode.uniform(config.imitation.kappa_low, config.imitation.kappa_high));
      ReferenceTrajectory slow = retime(reference, kappa);
      const int start = sample_start(slow.length(), config.imitation.rsi_epsilon, rng.episode);
      Vec obs = ienv.reset(std::move(slow), start);
      bool done = false;
      while (!done) {
        const Vec action = env_step < sac.warmup_steps
                               ? uniform_action(ienv.action_dim(), 1.0, rng.policy)
                               : agent.policy().act(obs, 1.0, false, rng.policy).action;
        const ImitationStepResult r = ienv.step(action);
        const Vec& next = ienv.observation();
        replay.push({obs, action, r.reward.total, next, r.done && !r.truncated, 1.0});
        obs = next;
        done = r.done;
        ++env_step;
        if (env_step >= sac.warmup_steps && replay.size() >= sac.batch_size) {
          for (int u = 0; u < sac.updates_per_step; ++u) {
            agent.update(replay.sample(sac.batch_size, rng.update), rng.update);
          }
        }
        if (env_step % config.training.eval_interval == 0) {
          const std::vector<double> returns = run_episodes(
              static_cast<int>(eval_refs.size()), eval_episode, config.training.parallel_eval);
          ProgressRow row;
          row.env_step = env_step;
          row.episodes = episodes;
          row.multiplier = strength;
          row.min_return = *std::min_element(returns.begin(), returns.end());
          row.mean_return = std::accumulate(returns.begin(), returns.end(), 0.0) / returns.size();
          row.decision = "continue";
          row.alpha = agent.alpha();
          row.reference_failures = failures;
          progress.push_back(row);
          if (options.write_outputs) write_text_file(out / "progress_slow.csv", progress_csv(progress));
          if (options.on_evaluation) options.on_evaluation(row);
        }
      }
      ++episodes;
      if (options.write_outputs && env_step >= next_checkpoint) {
        save_checkpoint(snapshot(config.training.keep_replay_in_checkpoints), latest);
        write_run_manifest(config, "running", "slow", env_step, latest);
        next_checkpoint = (env_step / config.training.checkpoint_interval + 1) *
                          config.training.checkpoint_interval;
      }
    }
  } catch (const TrainingDivergedError&) {
    if (options.write_outputs) {
      write_run_manifest(config, "diverged", "slow", env_step,
                         std::filesystem::exists(latest) ? latest : std::filesystem::path());
    }
    throw;
  }

  TrainResult result;
  result.checkpoint = snapshot(true);
  result.progress = progress;
  if (options.write_outputs) {
    result.final_checkpoint = out / "final_slow";
    save_checkpoint(result.checkpoint, result.final_checkpoint);
    write_text_file(out / "progress_slow.csv", progress_csv(progress));
    write_run_manifest(config, "completed", "slow", env_step, result.final_checkpoint);
  }
  return result;
}

Pause parse_pause(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) throw ConfigError("expected IDX:COUNT", "--pause");
  try {
    size_t used = 0;
    Pause p;
    p.index = std::stoi(text.substr(0, colon), &used);
    if (used != colon) throw std::invalid_argument("index");
    const std::string count = text.substr(colon + 1);
    p.count = std::stoi(count, &used);
    if (used != count.size()) throw std::invalid_argument("count");
    if (p.index < 0 || p.count < 0) throw std::invalid_argument("negative");
    return p;
  } catch (const std::logic_error&) {
    throw ConfigError("expected IDX:COUNT with non-negative integers, got '" + text + "'", "--pause");
  }
}

RolloutResult rollout(const ExperimentConfig& config, const Checkpoint& ck,
                      const RolloutOptions& options) {
  const CharacterModel model = load_experiment_character(config);
  const bool slow = ck.stage == PolicyStage::kSlow;
  if (!slow && options.kappa) throw ContractError("kappa applies only to slow checkpoints");
  if (!slow && !options.pauses.empty()) throw ContractError("pauses apply only to slow checkpoints");
  if (slow && !options.kappa) throw ContractError("slow checkpoints need a kappa");

  RolloutResult result;
  TrajectoryLog& log = result.log;
  log = make_log(model, "seed" + std::to_string(options.seed));
  log.metadata = {{"stage", to_string(ck.stage)}, {"seed", options.seed}};

  std::vector<RagdollFrame> frames;
  const SimState s0 = reset_ragdoll(model, config.env, config.sim, options.seed, &frames);
  int64_t step = 0;
  for (const RagdollFrame& f : frames) {
    log.records.push_back(make_record(model, f.state, step++, Phase::kRagdoll, f.action, {}, 1.0));
  }

  if (!slow) {
    const SquashedGaussianPolicy& policy = reference_policy_of(ck);
    const double strength = ck.reference_policy ? ck.reference_strength : 1.0;
    log.metadata["strength"] = strength;
    GetupEnv env(model, config.env, config.sim, config.reward);
    Vec obs = env.reset_to(s0, strength).flatten();
    bool standing = false;
    while (true) {
      const Vec action = policy.deterministic_action(obs, strength);
      const StepResult r = env.step(action);
      standing = standing ||
                 forward_kinematics(model, r.state.q).head_height > config.imitation.head_done_height;
      log.records.push_back(make_record(model, r.state, step++,
                                        standing ? Phase::kStanding : Phase::kGetup, action,
                                        r.reward, strength));
      if (r.done) break;
      obs = r.observation.flatten();
    }
    return result;
  }

  if (!ck.reference_policy) throw IntegrityError("slow checkpoint lacks its weak policy");
  const double kappa = *options.kappa;
  if (kappa < config.imitation.kappa_low || kappa > config.imitation.kappa_high) {
    std::cerr << "warning: kappa " << kappa << " lies outside the training range ["
              << config.imitation.kappa_low << ", " << config.imitation.kappa_high << "]\n";
  }
  const double strength = ck.reference_strength;
  ReferenceTrajectory ref = retime(generate_reference(deterministic(*ck.reference_policy), model,
                                                      config.env, config.sim, s0, strength,
                                                      config.imitation),
                                   kappa);
  std::vector<Pause> pauses = options.pauses;
  std::sort(pauses.begin(), pauses.end(), [](const Pause& a, const Pause& b) { return a.index > b.index; });
  for (const Pause& p : pauses) ref = insert_pause(ref, p.index, p.count);
  log.metadata["kappa"] = kappa;
  log.metadata["strength"] = strength;
  log.metadata["reference_frames"] = ref.length();
  Json pause_json = Json::array();
  for (const Pause& p : options.pauses) pause_json.push_back({p.index, p.count});
  log.metadata["pauses"] = pause_json;
  Json ref_com = Json::array();
  for (const ReferenceFrame& f : ref.frames) ref_com.push_back(f.com_height);
  log.metadata["reference_com_height"] = ref_com;

  ImitationEnv ienv(model, config.sim, config.reward, config.imitation, strength);
  Vec obs = ienv.reset(ref, 0);
  while (true) {
    const Vec action = ck.agent.policy().deterministic_action(obs, 1.0);
    const ImitationStepResult r = ienv.step(action);
    log.records.push_back(make_record(model, r.state, step++, r.phase, action, r.reward, strength));
    if (r.done) break;
    obs = ienv.observation();
  }
  result.reference = std::move(ref);
  return result;
}

}  // namespace getup
