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

#ifndef GETUP_SAC_H_
#define GETUP_SAC_H_

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <vector>

#include "getup/env.h"
#include "getup/json_util.h"
#include "getup/nn.h"
#include "getup/rng.h"

namespace getup {

struct SacConfig {
  std::vector<int> hidden{256, 256};
  double critic_lr = 1e-4;
  double actor_lr = 1e-5;
  double initial_temperature = 0.1;
  double temperature_lr = 1e-4;
  double tau = 5e-3;
  int batch_size = 256;
  double discount = 0.97;
  int updates_per_step = 1;
  int64_t warmup_steps = 10000;
  int64_t replay_capacity = 1000000;
  double reward_scale = 1.0;
  double log_std_min = -5.0;
  double log_std_max = 2.0;
  // Defaults to -action_dim when unset.
  std::optional<double> target_entropy;

  void validate() const;
};

SacConfig sac_config_from_json(const Json& document, SacConfig base = {});
Json sac_config_to_json(const SacConfig& config);

// log(1 - tanh(u)^2) without cancellation for large |u|.
double log1m_tanh2(double u);

// Log-density of a = scale * tanh(u) where u ~ N(mean, exp(log_std)).
double squashed_log_prob(const Vec& u, const Vec& mean, const Vec& log_std, double scale);

struct PolicySample {
  Vec action;
  double log_prob = 0.0;
};

class SquashedGaussianPolicy {
 public:
  SquashedGaussianPolicy() = default;
  SquashedGaussianPolicy(int observation_dim, int action_dim, const std::vector<int>& hidden,
                         Rng& rng, double log_std_min = -5.0, double log_std_max = 2.0);

  int observation_dim() const { return network_.input_dim(); }
  int action_dim() const { return action_dim_; }
  double log_std_min() const { return log_std_min_; }
  double log_std_max() const { return log_std_max_; }
  DenseNetwork& network() { return network_; }
  const DenseNetwork& network() const { return network_; }

  // Mean and clamped log std heads for a column batch.
  void heads(const Mat& observations, Mat* mean, Mat* log_std,
             DenseNetwork::Cache* cache = nullptr) const;

  PolicySample act(const Vec& observation, double scale, bool deterministic, Rng& rng) const;
  // Reparameterized sample with caller-provided standard normal noise.
  PolicySample act_with_noise(const Vec& observation, double scale, const Vec& noise) const;
  Vec deterministic_action(const Vec& observation, double scale) const;

 private:
  DenseNetwork network_;
  int action_dim_ = 0;
  double log_std_min_ = -5.0;
  double log_std_max_ = 2.0;
};

struct Transition {
  Vec observation;
  Vec action;  // absolute, already multiplied by the episode's scale
  double reward = 0.0;
  Vec next_observation;
  bool done = false;
  double scale = 1.0;
};

struct Batch {
  Mat observations;       // obs_dim x B
  Mat actions;            // action_dim x B
  Vec rewards;            // B
  Mat next_observations;  // obs_dim x B
  Vec dones;              // B, 1 for terminal
  Vec scales;             // B
};

// FIFO ring buffer. Storage grows until capacity, then overwrites the oldest.
class ReplayBuffer {
 public:
  ReplayBuffer() = default;
  ReplayBuffer(int observation_dim, int action_dim, int64_t capacity);

  void push(const Transition& transition);
  int64_t size() const { return size_; }
  int64_t capacity() const { return capacity_; }
  int64_t total_pushed() const { return total_; }
  int observation_dim() const { return obs_dim_; }
  int action_dim() const { return act_dim_; }
  // i = 0 is the oldest stored transition.
  Transition at(int64_t i) const;
  Batch sample(int batch_size, Rng& rng) const;

  void write_binary(std::ostream& out) const;
  void read_binary(std::istream& in);
  bool operator==(const ReplayBuffer& other) const;

 private:
  int64_t slot(int64_t i) const;

  int obs_dim_ = 0;
  int act_dim_ = 0;
  int64_t capacity_ = 0;
  int64_t size_ = 0;
  int64_t head_ = 0;  // next write slot
  int64_t total_ = 0;
  std::vector<double> obs_;
  std::vector<double> next_obs_;
  std::vector<double> act_;
  std::vector<double> reward_;
  std::vector<double> done_;
  std::vector<double> scale_;
};

struct SacDiagnostics {
  double critic_loss = 0.0;
  double actor_loss = 0.0;
  double temperature_loss = 0.0;
  double alpha = 0.0;
  double entropy = 0.0;  // -mean log prob of fresh samples
  double q_mean = 0.0;
};

class SacAgent {
 public:
  SacAgent() = default;
  SacAgent(int observation_dim, int action_dim, const SacConfig& config, Rng& rng);

  SacDiagnostics update(const Batch& batch, Rng& rng);

  // Bellman targets r + gamma (1 - d) (min Q'(s', a') - alpha log pi(a'|s')).
  Vec critic_targets(const Batch& batch, const Mat& next_noise) const;
  // 0.5 * mean (Q(s, a) - y)^2.
  static double critic_loss(const DenseNetwork& critic, const Mat& observations, const Mat& actions,
                            const Vec& targets, Vec* grad);
  // mean (alpha log pi - min Q) with reparameterized samples from `noise`.
  double actor_loss(const Mat& observations, const Vec& scales, const Mat& noise, Vec* grad,
                    Vec* log_probs = nullptr) const;
  // -mean(log_alpha * (log_prob + target_entropy)).
  double temperature_loss(double log_alpha, const Vec& log_probs, double* grad) const;
  void soft_update(double tau);

  const SacConfig& config() const { return config_; }
  double target_entropy() const { return target_entropy_; }
  double log_alpha() const { return log_alpha_[0]; }
  double alpha() const;
  void set_log_alpha(double value) { log_alpha_[0] = value; }

  SquashedGaussianPolicy& policy() { return policy_; }
  const SquashedGaussianPolicy& policy() const { return policy_; }
  DenseNetwork& critic(int i) { return critics_[i]; }
  const DenseNetwork& critic(int i) const { return critics_[i]; }
  DenseNetwork& target_critic(int i) { return targets_[i]; }
  const DenseNetwork& target_critic(int i) const { return targets_[i]; }
  Adam& actor_optimizer() { return actor_opt_; }
  Adam& critic_optimizer(int i) { return critic_opt_[i]; }
  Adam& temperature_optimizer() { return alpha_opt_; }
  const Adam& actor_optimizer() const { return actor_opt_; }
  const Adam& critic_optimizer(int i) const { return critic_opt_[i]; }
  const Adam& temperature_optimizer() const { return alpha_opt_; }

 private:
  SacConfig config_;
  double target_entropy_ = 0.0;
  SquashedGaussianPolicy policy_;
  DenseNetwork critics_[2];
  DenseNetwork targets_[2];
  Adam actor_opt_;
  Adam critic_opt_[2];
  Adam alpha_opt_;
  Vec log_alpha_ = Vec::Zero(1);
};

// Undiscounted returns of deterministic weak-stage episodes, one per
// initial state. Episodes use independent copies of `env`.
std::vector<double> evaluate(const SquashedGaussianPolicy& policy, const GetupEnv& env,
                             const std::vector<SimState>& initial_states, double scale,
                             bool parallel = false);

// Runs `episode(k)` for k in [0, count), optionally across OpenMP threads.
std::vector<double> run_episodes(int count, const std::function<double(int)>& episode,
                                 bool parallel);

}  // namespace getup

#endif  // GETUP_SAC_H_
