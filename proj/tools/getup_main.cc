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

// Command-line front end: training, rollouts and trajectory analysis.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "getup/analysis.h"
#include "getup/checkpoint.h"
#include "getup/error.h"
#include "getup/runner.h"
#include "getup/trajectory_log.h"

namespace fs = std::filesystem;
using namespace getup;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitDivergence = 3;
constexpr int kExitIo = 4;

struct CommonFlags {
  std::string config;
  std::string preset;
  std::optional<uint64_t> seed;
  std::string out;
};

void add_common(CLI::App* cmd, CommonFlags& f) {
  cmd->add_option("--config", f.config, "experiment config JSON");
  cmd->add_option("--preset", f.preset, "paper or desk")->check(CLI::IsMember({"paper", "desk"}));
  cmd->add_option("--seed", f.seed, "experiment seed");
  cmd->add_option("--out", f.out, "output directory");
}

ExperimentConfig resolve_config(const CommonFlags& f) {
  std::optional<std::string> preset;
  if (!f.preset.empty()) preset = f.preset;
  ExperimentConfig c = f.config.empty() ? preset_config(preset.value_or("desk"))
                                        : load_experiment_config(f.config, preset);
  if (f.seed) c.seed = *f.seed;
  if (!f.out.empty()) c.output_dir = f.out;
  return c;
}

ExperimentConfig config_from_checkpoint(const Checkpoint& ck, const CommonFlags& f) {
  if (!f.config.empty()) return resolve_config(f);
  ExperimentConfig c = experiment_config_from_json(ck.config);
  if (!f.out.empty()) c.output_dir = f.out;
  return c;
}

void log_row(const ProgressRow& r) {
  std::fprintf(stderr, "step %lld  stage %d  multiplier %.4f  min %.2f  mean %.2f  %s\n",
               static_cast<long long>(r.env_step), r.stage, r.multiplier, r.min_return,
               r.mean_return, r.decision.c_str());
}

std::vector<Pause> parse_pauses(const std::vector<std::string>& texts) {
  std::vector<Pause> out;
  for (const std::string& t : texts) out.push_back(parse_pause(t));
  return out;
}

void write_rollout(const RolloutResult& r, const fs::path& out, uint64_t seed) {
  fs::path file = out;
  if (out.empty()) file = "rollout_seed" + std::to_string(seed) + ".jsonl";
  else if (fs::is_directory(out) || !out.has_extension()) {
    fs::create_directories(out);
    file = out / ("rollout_seed" + std::to_string(seed) + ".jsonl");
  }
  write_trajectory_log(file, r.log);
  std::cout << file.string() << "\n";
}

int run(int argc, char** argv) {
  CLI::App app{"Physics-based get-up controller training and analysis"};
  app.require_subcommand(1);

  CommonFlags weak_flags;
  std::string weak_resume;
  std::optional<int64_t> weak_max_steps;
  bool weak_allow = false;
  auto* train_weak = app.add_subcommand("train-weak", "train the strong-to-weak policy");
  add_common(train_weak, weak_flags);
  train_weak->add_option("--checkpoint", weak_resume, "resume from this checkpoint");
  train_weak->add_option("--max-steps", weak_max_steps, "stop after this many env steps");
  train_weak->add_flag("--allow-config-mismatch", weak_allow, "resume despite a config hash mismatch");

  CommonFlags slow_flags;
  std::string slow_checkpoint;
  std::optional<double> slow_kappa;
  std::optional<int64_t> slow_max_steps;
  auto* train_slow = app.add_subcommand("train-slow", "train the retimed imitation policy");
  add_common(train_slow, slow_flags);
  train_slow->add_option("--checkpoint", slow_checkpoint, "weak checkpoint")->required();
  train_slow->add_option("--kappa", slow_kappa, "fixed retiming coefficient");
  train_slow->add_option("--max-steps", slow_max_steps, "stop after this many env steps");

  CommonFlags roll_flags;
  std::string roll_checkpoint;
  std::optional<double> roll_kappa;
  std::vector<std::string> roll_pauses;
  auto* roll = app.add_subcommand("rollout", "deterministic rollout to a trajectory log");
  add_common(roll, roll_flags);
  roll->add_option("--checkpoint", roll_checkpoint, "checkpoint directory")->required();
  roll->add_option("--kappa", roll_kappa, "retiming coefficient (slow checkpoints)");
  roll->add_option("--pause", roll_pauses, "IDX:COUNT, repeatable");

  CommonFlags demo_flags;
  std::string demo_checkpoint;
  double demo_kappa = 1.0;
  std::vector<std::string> demo_pauses;
  auto* demo = app.add_subcommand("pause-demo", "rollouts with and without paused references");
  add_common(demo, demo_flags);
  demo->add_option("--checkpoint", demo_checkpoint, "slow checkpoint")->required();
  demo->add_option("--kappa", demo_kappa, "retiming coefficient");
  demo->add_option("--pause", demo_pauses, "IDX:COUNT, repeatable (default: 40 frames in the first third)");

  auto* analyze = app.add_subcommand("analyze", "trajectory diagnostics");
  analyze->require_subcommand(1);
  std::vector<std::string> logs;
  std::string analysis_out = "analysis";
  double perplexity = 10.0;
  uint64_t analysis_seed = 0;
  int standing_keep = 5;
  int iterations = 1000;
  auto* tsne = analyze->add_subcommand("tsne", "exact t-SNE embedding to 3-D");
  auto* pca = analyze->add_subcommand("pca", "PCA projection to 3-D");
  auto* profile = analyze->add_subcommand("head-profile", "head height vs. lateral distance");
  for (CLI::App* a : {tsne, pca, profile}) {
    a->add_option("logs", logs, "trajectory logs")->required()->check(CLI::ExistingFile);
    a->add_option("--out", analysis_out, "output directory");
  }
  for (CLI::App* a : {tsne, pca}) {
    a->add_option("--standing-keep", standing_keep, "standing frames kept per log");
  }
  tsne->add_option("--perplexity", perplexity, "target perplexity");
  tsne->add_option("--seed", analysis_seed, "embedding seed");
  tsne->add_option("--iterations", iterations, "gradient iterations");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  if (*train_weak) {
    ExperimentConfig c = resolve_config(weak_flags);
    TrainOptions opts;
    if (!weak_resume.empty()) opts.resume = fs::path(weak_resume);
    opts.stop_at = weak_max_steps;
    opts.allow_config_mismatch = weak_allow;
    opts.on_evaluation = log_row;
    TrainResult r = run_train_weak(c, opts);
    std::cout << r.final_checkpoint.string() << "\n";
    return 0;
  }
  if (*train_slow) {
    ExperimentConfig c = resolve_config(slow_flags);
    if (slow_kappa) c.training.kappa = slow_kappa;
    Checkpoint weak = load_checkpoint(slow_checkpoint, {std::nullopt, true, false});
    TrainOptions opts;
    opts.stop_at = slow_max_steps;
    opts.on_evaluation = log_row;
    TrainResult r = run_train_slow(c, weak, opts);
    std::cout << r.final_checkpoint.string() << "\n";
    return 0;
  }
  if (*roll) {
    Checkpoint ck = load_checkpoint(roll_checkpoint, {std::nullopt, true, false});
    ExperimentConfig c = config_from_checkpoint(ck, roll_flags);
    RolloutOptions opts;
    opts.seed = roll_flags.seed.value_or(0);
    opts.kappa = roll_kappa;
    opts.pauses = parse_pauses(roll_pauses);
    write_rollout(rollout(c, ck, opts), roll_flags.out, opts.seed);
    return 0;
  }
  if (*demo) {
    Checkpoint ck = load_checkpoint(demo_checkpoint, {std::nullopt, true, false});
    ExperimentConfig c = config_from_checkpoint(ck, demo_flags);
    RolloutOptions opts;
    opts.seed = demo_flags.seed.value_or(0);
    opts.kappa = demo_kappa;
    const RolloutResult plain = rollout(c, ck, opts);
    opts.pauses = parse_pauses(demo_pauses);
    // Middle of the first third of the retimed reference.
    if (opts.pauses.empty()) opts.pauses.push_back({plain.reference->length() / 6, 40});
    const RolloutResult paused = rollout(c, ck, opts);
    const fs::path out = demo_flags.out.empty() ? fs::path("pause_demo") : fs::path(demo_flags.out);
    fs::create_directories(out);
    write_trajectory_log(out / "plain.jsonl", plain.log);
    write_trajectory_log(out / "paused.jsonl", paused.log);
    write_text_file(out / "head_profile.svg",
                    profile_svg({head_lateral_profile(plain.log), head_lateral_profile(paused.log)},
                                {"reference timing", "with pause"}));
    std::cout << (out / "paused.jsonl").string() << "\n";
    return 0;
  }
  if (*analyze) {
    fs::create_directories(analysis_out);
    std::vector<TrajectoryLog> parsed;
    for (const std::string& path : logs) parsed.push_back(read_trajectory_log(fs::path(path)));
    if (*profile) {
      std::vector<std::vector<Vec2>> lines;
      std::vector<std::string> labels;
      for (size_t k = 0; k < parsed.size(); ++k) {
        lines.push_back(head_lateral_profile(parsed[k]));
        labels.push_back(fs::path(logs[k]).stem().string());
        write_profile_csv(fs::path(analysis_out) / (labels.back() + "_profile.csv"), lines.back());
      }
      write_text_file(fs::path(analysis_out) / "head_profile.svg", profile_svg(lines, labels));
      std::cout << (fs::path(analysis_out) / "head_profile.svg").string() << "\n";
      return 0;
    }
    FeatureOptions fopts;
    fopts.standing_keep = standing_keep;
    std::vector<FeatureMatrix> parts;
    for (size_t k = 0; k < parsed.size(); ++k) {
      if (parsed[k].run_id.empty() || parsed.size() > 1) parsed[k].run_id = fs::path(logs[k]).stem().string();
      parts.push_back(extract_features(parsed[k], fopts));
    }
    const FeatureMatrix features = concatenate(parts);
    if (*tsne) {
      TsneConfig tc;
      tc.perplexity = perplexity;
      tc.seed = analysis_seed;
      tc.iterations = iterations;
      const TsneResult r = tsne_embed(features.values, tc);
      write_points_csv(fs::path(analysis_out) / "tsne.csv", r.embedding, features);
      std::fprintf(stderr, "t-SNE: %lld points, KL %.4f -> %.4f\n",
                   static_cast<long long>(features.values.rows()), r.initial_kl, r.final_kl);
      std::cout << (fs::path(analysis_out) / "tsne.csv").string() << "\n";
    } else {
      const PcaResult r = pca_embed(features.values, 3);
      if (r.degenerate) std::fprintf(stderr, "warning: zero-variance features, PCA output is zero\n");
      write_points_csv(fs::path(analysis_out) / "pca.csv", r.embedding, features);
      std::fprintf(stderr, "PCA explained variance: %.6g %.6g %.6g\n", r.explained_variance[0],
                   r.explained_variance[1], r.explained_variance[2]);
      std::cout << (fs::path(analysis_out) / "pca.csv").string() << "\n";
    }
    return 0;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const ContractError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const DivergenceError& e) {
    std::cerr << "divergence: " << e.what() << "\n";
    return kExitDivergence;
  } catch (const TrainingDivergedError& e) {
    std::cerr << "training diverged: " << e.what() << "\n";
    return kExitDivergence;
  } catch (const ReferenceFailedError& e) {
    std::cerr << "reference failed: " << e.what() << "\n";
    return kExitDivergence;
  } catch (const IoError& e) {
    std::cerr << "i/o error: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
