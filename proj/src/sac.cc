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

#include "getup/sac.h"

#include <bit>
#include <cmath>
#include <istream>
#include <numbers>
#include <ostream>

#include "getup/error.h"

namespace getup {
namespace {

constexpr double kHalfLog2Pi = 0.91893853320467274178;

Mat normal_matrix(Eigen::Index rows, Eigen::Index cols, Rng& rng) {
  Mat m(rows, cols);
  for (Eigen::Index c = 0; c < cols; ++c) {
    for (Eigen::Index r = 0; r < rows; ++r) m(r, c) = rng.normal();
  }
  return m;
}

Mat stack(const Mat& top, const Mat& bottom) {
  Mat out(top.rows() + bottom.rows(), top.cols());
  out.topRows(top.rows()) = top;
  out.bottomRows(bottom.rows()) = bottom;
  return out;
}

bool all_finite(const Mat& m) { return m.allFinite(); }

// Batched reparameterized sampling shared by the actor loss and targets.
struct SampledActions {
  Mat mean, log_std, u, tanh_u, actions;
  Vec log_probs;
  DenseNetwork::Cache cache;
  Mat raw_log_std;
};

SampledActions sample_actions(const SquashedGaussianPolicy& policy, const Mat& obs,
                              const Vec& scales, const Mat& noise, bool keep_cache) {
  SampledActions s;
  Mat out = policy.network().forward(obs, keep_cache ? &s.cache : nullptr);
  if (!all_finite(out)) throw TrainingDivergedError("policy network produced non-finite output");
  const int a = policy.action_dim();
  s.mean = out.topRows(a);
  s.raw_log_std = out.bottomRows(a);
  s.log_std = s.raw_log_std.cwiseMax(policy.log_std_min()).cwiseMin(policy.log_std_max());
  s.u = s.mean + (s.log_std.array().exp() * noise.array()).matrix();
  s.tanh_u = s.u.array().tanh();
  s.actions = s.tanh_u * scales.asDiagonal();
  s.log_probs.resize(obs.cols());
  for (Eigen::Index b = 0; b < obs.cols(); ++b) {
    double lp = 0.0;
    for (int j = 0; j < a; ++j) {
      lp += -0.5 * noise(j, b) * noise(j, b) - s.log_std(j, b) - kHalfLog2Pi -
            std::log(scales[b]) - log1m_tanh2(s.u(j, b));
    }
    s.log_probs[b] = lp;
  }
  return s;
}

}  // namespace

void SacConfig::validate() const {
  if (hidden.empty()) throw ConfigError("at least one hidden layer required", "sac.hidden");
  for (int h : hidden) {
    if (h <= 0) throw ConfigError("layer sizes must be positive", "sac.hidden");
  }
  auto positive = [](double v, const char* key) {
    if (!(v > 0.0)) throw ConfigError("must be positive", std::string("sac.") + key);
  };
  positive(critic_lr, "critic_lr");
  positive(actor_lr, "actor_lr");
  positive(initial_temperature, "initial_temperature");
  positive(temperature_lr, "temperature_lr");
  positive(reward_scale, "reward_scale");
  if (!(tau > 0.0 && tau <= 1.0)) throw ConfigError("must lie in (0, 1]", "sac.tau");
  if (!(discount > 0.0 && discount < 1.0)) throw ConfigError("must lie in (0, 1)", "sac.discount");
  if (batch_size <= 0) throw ConfigError("must be positive", "sac.batch_size");
  if (updates_per_step < 0) throw ConfigError("must be non-negative", "sac.updates_per_step");
  if (warmup_steps < 0) throw ConfigError("must be non-negative", "sac.warmup_steps");
  if (replay_capacity <= 0) throw ConfigError("must be positive", "sac.replay_capacity");
  if (!(log_std_min < log_std_max)) throw ConfigError("min must be below max", "sac.log_std_min");
}

SacConfig sac_config_from_json(const Json& doc, SacConfig config) {
  read_optional(doc, "hidden", "sac", config.hidden);
  read_optional(doc, "critic_lr", "sac", config.critic_lr);
  read_optional(doc, "actor_lr", "sac", config.actor_lr);
  read_optional(doc, "initial_temperature", "sac", config.initial_temperature);
  read_optional(doc, "temperature_lr", "sac", config.temperature_lr);
  read_optional(doc, "tau", "sac", config.tau);
  read_optional(doc, "batch_size", "sac", config.batch_size);
  read_optional(doc, "discount", "sac", config.discount);
  read_optional(doc, "updates_per_step", "sac", config.updates_per_step);
  read_optional(doc, "warmup_steps", "sac", config.warmup_steps);
  read_optional(doc, "replay_capacity", "sac", config.replay_capacity);
  read_optional(doc, "reward_scale", "sac", config.reward_scale);
  read_optional(doc, "log_std_min", "sac", config.log_std_min);
  read_optional(doc, "log_std_max", "sac", config.log_std_max);
  if (auto it = doc.find("target_entropy"); it != doc.end() && !it->is_null()) {
    double value = 0.0;
    read_optional(doc, "target_entropy", "sac", value);
    config.target_entropy = value;
  }
  config.validate();
  return config;
}

Json sac_config_to_json(const SacConfig& c) {
  Json j = {{"hidden", c.hidden},
            {"critic_lr", c.critic_lr},
            {"actor_lr", c.actor_lr},
            {"initial_temperature", c.initial_temperature},
            {"temperature_lr", c.temperature_lr},
            {"tau", c.tau},
            {"batch_size", c.batch_size},
            {"discount", c.discount},
            {"updates_per_step", c.updates_per_step},
            {"warmup_steps", c.warmup_steps},
            {"replay_capacity", c.replay_capacity},
            {"reward_scale", c.reward_scale},
            {"log_std_min", c.log_std_min},
            {"log_std_max", c.log_std_max}};
  j["target_entropy"] = c.target_entropy ? Json(*c.target_entropy) : Json(nullptr);
  return j;
}

double log1m_tanh2(double u) {
  // 1 - tanh^2 u = 4 / (e^u + e^-u)^2
  const double x = std::abs(u);
  return 2.0 * (std::numbers::ln2 - x - std::log1p(std::exp(-2.0 * x)));
}

double squashed_log_prob(const Vec& u, const Vec& mean, const Vec& log_std, double scale) {
  double lp = 0.0;
  for (Eigen::Index j = 0; j < u.size(); ++j) {
    const double z = (u[j] - mean[j]) * std::exp(-log_std[j]);
    lp += -0.5 * z * z - log_std[j] - kHalfLog2Pi - std::log(scale) - log1m_tanh2(u[j]);
  }
  return lp;
}

SquashedGaussianPolicy::SquashedGaussianPolicy(int observation_dim, int action_dim,
                                               const std::vector<int>& hidden, Rng& rng,
                                               double log_std_min, double log_std_max)
    : action_dim_(action_dim), log_std_min_(log_std_min), log_std_max_(log_std_max) {
  std::vector<int> sizes{observation_dim};
  sizes.insert(sizes.end(), hidden.begin(), hidden.end());
  sizes.push_back(2 * action_dim);
  network_ = DenseNetwork(sizes, rng);
}

void SquashedGaussianPolicy::heads(const Mat& obs, Mat* mean, Mat* log_std,
                                   DenseNetwork::Cache* cache) const {
  Mat out = network_.forward(obs, cache);
  if (!all_finite(out)) throw TrainingDivergedError("policy network produced non-finite output");
  *mean = out.topRows(action_dim_);
  *log_std = out.bottomRows(action_dim_).cwiseMax(log_std_min_).cwiseMin(log_std_max_);
}

PolicySample SquashedGaussianPolicy::act(const Vec& observation, double scale, bool deterministic,
                                         Rng& rng) const {
  Vec noise = Vec::Zero(action_dim_);
  if (!deterministic) {
    for (int j = 0; j < action_dim_; ++j) noise[j] = rng.normal();
  }
  return act_with_noise(observation, scale, noise);
}

PolicySample SquashedGaussianPolicy::act_with_noise(const Vec& observation, double scale,
                                                    const Vec& noise) const {
  if (!(scale > 0.0 && scale <= 1.0)) throw ContractError("action scale must lie in (0, 1]");
  Mat mean, log_std;
  heads(observation, &mean, &log_std);
  Vec u = mean.col(0) + (log_std.col(0).array().exp() * noise.array()).matrix();
  PolicySample sample;
  sample.action = scale * u.array().tanh();
  // tanh saturates to exactly 1 in double for |u| > ~19; keep the open bound.
  for (Eigen::Index j = 0; j < sample.action.size(); ++j) {
    if (std::abs(sample.action[j]) >= scale) {
      sample.action[j] = std::copysign(std::nextafter(scale, 0.0), sample.action[j]);
    }
  }
  sample.log_prob = squashed_log_prob(u, mean.col(0), log_std.col(0), scale);
  return sample;
}

Vec SquashedGaussianPolicy::deterministic_action(const Vec& observation, double scale) const {
  return act_with_noise(observation, scale, Vec::Zero(action_dim_)).action;
}

ReplayBuffer::ReplayBuffer(int observation_dim, int action_dim, int64_t capacity)
    : obs_dim_(observation_dim), act_dim_(action_dim), capacity_(capacity) {
  if (capacity <= 0) throw ContractError("replay capacity must be positive");
}

int64_t ReplayBuffer::slot(int64_t i) const {
  return size_ < capacity_ ? i : (head_ + i) % capacity_;
}

void ReplayBuffer::push(const Transition& t) {
  if (t.observation.size() != obs_dim_ || t.next_observation.size() != obs_dim_ ||
      t.action.size() != act_dim_) {
    throw ContractError("transition dimension mismatch");
  }
  if (size_ < capacity_) {
    obs_.insert(obs_.end(), t.observation.data(), t.observation.data() + obs_dim_);
    next_obs_.insert(next_obs_.end(), t.next_observation.data(),
                     t.next_observation.data() + obs_dim_);
    act_.insert(act_.end(), t.action.data(), t.action.data() + act_dim_);
    reward_.push_back(t.reward);
    done_.push_back(t.done ? 1.0 : 0.0);
    scale_.push_back(t.scale);
    ++size_;
    head_ = size_ % capacity_;
  } else {
    std::copy_n(t.observation.data(), obs_dim_, obs_.begin() + head_ * obs_dim_);
    std::copy_n(t.next_observation.data(), obs_dim_, next_obs_.begin() + head_ * obs_dim_);
    std::copy_n(t.action.data(), act_dim_, act_.begin() + head_ * act_dim_);
    reward_[head_] = t.reward;
    done_[head_] = t.done ? 1.0 : 0.0;
    scale_[head_] = t.scale;
    head_ = (head_ + 1) % capacity_;
  }
  ++total_;
}

Transition ReplayBuffer::at(int64_t i) const {
  if (i < 0 || i >= size_) throw ContractError("replay index out of range");
  const int64_t s = slot(i);
  Transition t;
  t.observation = Eigen::Map<const Vec>(obs_.data() + s * obs_dim_, obs_dim_);
  t.next_observation = Eigen::Map<const Vec>(next_obs_.data() + s * obs_dim_, obs_dim_);
  t.action = Eigen::Map<const Vec>(act_.data() + s * act_dim_, act_dim_);
  t.reward = reward_[s];
  t.done = done_[s] != 0.0;
  t.scale = scale_[s];
  return t;
}

Batch ReplayBuffer::sample(int batch_size, Rng& rng) const {
  if (size_ == 0) throw ContractError("cannot sample from an empty replay buffer");
  Batch b;
  b.observations.resize(obs_dim_, batch_size);
  b.next_observations.resize(obs_dim_, batch_size);
  b.actions.resize(act_dim_, batch_size);
  b.rewards.resize(batch_size);
  b.dones.resize(batch_size);
  b.scales.resize(batch_size);
  for (int k = 0; k < batch_size; ++k) {
    const int64_t s = rng.index(size_);
    b.observations.col(k) = Eigen::Map<const Vec>(obs_.data() + s * obs_dim_, obs_dim_);
    b.next_observations.col(k) = Eigen::Map<const Vec>(next_obs_.data() + s * obs_dim_, obs_dim_);
    b.actions.col(k) = Eigen::Map<const Vec>(act_.data() + s * act_dim_, act_dim_);
    b.rewards[k] = reward_[s];
    b.dones[k] = done_[s];
    b.scales[k] = scale_[s];
  }
  return b;
}

namespace {

static_assert(std::endian::native == std::endian::little, "payloads are little-endian");

template <typename T>
void write_pod(std::ostream& out, const T& value) {
  out.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <typename T>
void read_pod(std::istream& in, T& value) {
  in.read(reinterpret_cast<char*>(&value), sizeof(T));
  if (!in) throw IntegrityError("replay payload truncated");
}

void write_doubles(std::ostream& out, const std::vector<double>& v) {
  out.write(reinterpret_cast<const char*>(v.data()),
            static_cast<std::streamsize>(v.size() * sizeof(double)));
}

void read_doubles(std::istream& in, std::vector<double>& v, size_t count) {
  v.resize(count);
  in.read(reinterpret_cast<char*>(v.data()), static_cast<std::streamsize>(count * sizeof(double)));
  if (!in) throw IntegrityError("replay payload truncated");
}

}  // namespace

void ReplayBuffer::write_binary(std::ostream& out) const {
  const int64_t header[] = {obs_dim_, act_dim_, capacity_, size_, head_, total_};
  for (int64_t h : header) write_pod(out, h);
  write_doubles(out, obs_);
  write_doubles(out, next_obs_);
  write_doubles(out, act_);
  write_doubles(out, reward_);
  write_doubles(out, done_);
  write_doubles(out, scale_);
}

void ReplayBuffer::read_binary(std::istream& in) {
  int64_t header[6];
  for (int64_t& h : header) read_pod(in, h);
  obs_dim_ = static_cast<int>(header[0]);
  act_dim_ = static_cast<int>(header[1]);
  capacity_ = header[2];
  size_ = header[3];
  head_ = header[4];
  total_ = header[5];
  if (obs_dim_ < 0 || act_dim_ < 0 || size_ < 0 || size_ > capacity_) {
    throw IntegrityError("replay header is inconsistent");
  }
  const auto n = static_cast<size_t>(size_);
  read_doubles(in, obs_, n * obs_dim_);
  read_doubles(in, next_obs_, n * obs_dim_);
  read_doubles(in, act_, n * act_dim_);
  read_doubles(in, reward_, n);
  read_doubles(in, done_, n);
  read_doubles(in, scale_, n);
}

bool ReplayBuffer::operator==(const ReplayBuffer& o) const {
  return obs_dim_ == o.obs_dim_ && act_dim_ == o.act_dim_ && capacity_ == o.capacity_ &&
         size_ == o.size_ && head_ == o.head_ && total_ == o.total_ && obs_ == o.obs_ &&
         next_obs_ == o.next_obs_ && act_ == o.act_ && reward_ == o.reward_ &&
         done_ == o.done_ && scale_ == o.scale_;
}

SacAgent::SacAgent(int observation_dim, int action_dim, const SacConfig& config, Rng& rng)
    : config_(config) {
  config_.validate();
  target_entropy_ = config_.target_entropy.value_or(-static_cast<double>(action_dim));
  policy_ = SquashedGaussianPolicy(observation_dim, action_dim, config_.hidden, rng,
                                   config_.log_std_min, config_.log_std_max);
  std::vector<int> sizes{observation_dim + action_dim};
  sizes.insert(sizes.end(), config_.hidden.begin(), config_.hidden.end());
  sizes.push_back(1);
  for (int i = 0; i < 2; ++i) {
    critics_[i] = DenseNetwork(sizes, rng);
    targets_[i] = critics_[i];
    critic_opt_[i] = Adam(critics_[i].num_params(), config_.critic_lr);
  }
  actor_opt_ = Adam(policy_.network().num_params(), config_.actor_lr);
  alpha_opt_ = Adam(1, config_.temperature_lr);
  log_alpha_[0] = std::log(config_.initial_temperature);
}

double SacAgent::alpha() const { return std::exp(log_alpha_[0]); }

Vec SacAgent::critic_targets(const Batch& batch, const Mat& next_noise) const {
  SampledActions next =
      sample_actions(policy_, batch.next_observations, batch.scales, next_noise, false);
  const Mat input = stack(batch.next_observations, next.actions);
  const Vec q1 = targets_[0].forward(input).row(0).transpose();
  const Vec q2 = targets_[1].forward(input).row(0).transpose();
  const Vec soft = q1.cwiseMin(q2) - alpha() * next.log_probs;
  return config_.reward_scale * batch.rewards +
         config_.discount * (Vec::Ones(batch.dones.size()) - batch.dones).cwiseProduct(soft);
}

double SacAgent::critic_loss(const DenseNetwork& critic, const Mat& obs, const Mat& actions,
                             const Vec& targets, Vec* grad) {
  DenseNetwork::Cache cache;
  const Mat q = critic.forward(stack(obs, actions), grad ? &cache : nullptr);
  const Vec err = q.row(0).transpose() - targets;
  const double n = static_cast<double>(targets.size());
  if (grad) {
    Mat g = err.transpose() / n;
    critic.backward(cache, g, grad);
  }
  return 0.5 * err.squaredNorm() / n;
}

double SacAgent::actor_loss(const Mat& obs, const Vec& scales, const Mat& noise, Vec* grad,
                            Vec* log_probs) const {
  SampledActions s = sample_actions(policy_, obs, scales, noise, grad != nullptr);
  const Mat input = stack(obs, s.actions);
  DenseNetwork::Cache c1, c2;
  const Vec q1 = critics_[0].forward(input, grad ? &c1 : nullptr).row(0).transpose();
  const Vec q2 = critics_[1].forward(input, grad ? &c2 : nullptr).row(0).transpose();
  const Vec min_q = q1.cwiseMin(q2);
  const double a = alpha();
  const double n = static_cast<double>(obs.cols());
  const double loss = (a * s.log_probs - min_q).sum() / n;
  if (log_probs) *log_probs = s.log_probs;
  if (!grad) return loss;

  // d loss / d min Q = -1/n routed to whichever critic attains the minimum.
  Mat g1 = Mat::Zero(1, obs.cols());
  Mat g2 = Mat::Zero(1, obs.cols());
  for (Eigen::Index b = 0; b < obs.cols(); ++b) {
    (q1[b] <= q2[b] ? g1 : g2)(0, b) = -1.0 / n;
  }
  const Mat din = critics_[0].backward(c1, g1, nullptr) + critics_[1].backward(c2, g2, nullptr);
  const Mat dq_da = din.bottomRows(policy_.action_dim());

  const Mat one_minus_t2 = (1.0 - s.tanh_u.array().square()).matrix();
  const Mat du = (a / n) * 2.0 * s.tanh_u +
                 (dq_da.array() * one_minus_t2.array()).matrix() * scales.asDiagonal();
  const Mat std_dev = s.log_std.array().exp();
  Mat dls = (du.array() * std_dev.array() * noise.array()).matrix();
  dls.array() -= a / n;
  const Mat inside = ((s.raw_log_std.array() >= policy_.log_std_min()) &&
                      (s.raw_log_std.array() <= policy_.log_std_max()))
                         .cast<double>();
  dls = dls.cwiseProduct(inside);
  policy_.network().backward(s.cache, stack(du, dls), grad);
  return loss;
}

double SacAgent::temperature_loss(double log_alpha, const Vec& log_probs, double* grad) const {
  const double m = (log_probs.array() + target_entropy_).mean();
  if (grad) *grad = -m;
  return -log_alpha * m;
}

void SacAgent::soft_update(double tau) {
  // Scalar loop: packet math may fuse the multiply-add and round differently.
  for (int i = 0; i < 2; ++i) {
    Vec& target = targets_[i].params();
    const Vec& online = critics_[i].params();
    for (Eigen::Index k = 0; k < target.size(); ++k) {
      target[k] = (1.0 - tau) * target[k] + tau * online[k];
    }
  }
}

SacDiagnostics SacAgent::update(const Batch& batch, Rng& rng) {
  SacDiagnostics d;
  const int a = policy_.action_dim();
  const auto n = batch.observations.cols();

  const Vec targets = critic_targets(batch, normal_matrix(a, n, rng));
  for (int i = 0; i < 2; ++i) {
    Vec grad = Vec::Zero(critics_[i].num_params());
    d.critic_loss += critic_loss(critics_[i], batch.observations, batch.actions, targets, &grad);
    critic_opt_[i].step(critics_[i].params(), grad);
  }

  Vec grad = Vec::Zero(policy_.network().num_params());
  Vec log_probs;
  d.actor_loss = actor_loss(batch.observations, batch.scales, normal_matrix(a, n, rng), &grad,
                            &log_probs);
  actor_opt_.step(policy_.network().params(), grad);

  double alpha_grad = 0.0;
  d.temperature_loss = temperature_loss(log_alpha_[0], log_probs, &alpha_grad);
  alpha_opt_.step(log_alpha_, Vec::Constant(1, alpha_grad));

  soft_update(config_.tau);

  d.alpha = alpha();
  d.entropy = -log_probs.mean();
  d.q_mean = targets.mean();
  if (!std::isfinite(d.critic_loss) || !std::isfinite(d.actor_loss) ||
      !std::isfinite(d.temperature_loss) || !policy_.network().params().allFinite() ||
      !critics_[0].params().allFinite() || !critics_[1].params().allFinite()) {
    throw TrainingDivergedError("non-finite SAC loss (critic " + std::to_string(d.critic_loss) +
                                ", actor " + std::to_string(d.actor_loss) + ", alpha " +
                                std::to_string(d.alpha) + ")");
  }
  return d;
}

std::vector<double> run_episodes(int count, const std::function<double(int)>& episode,
                                 bool parallel) {
  std::vector<double> returns(count, 0.0);
  if (!parallel) {
    for (int k = 0; k < count; ++k) returns[k] = episode(k);
    return returns;
  }
  std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic)
  for (int k = 0; k < count; ++k) {
    try {
      returns[k] = episode(k);
    } catch (...) {
#pragma omp critical
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  return returns;
}

std::vector<double> evaluate(const SquashedGaussianPolicy& policy, const GetupEnv& env,
                             const std::vector<SimState>& initial_states, double scale,
                             bool parallel) {
  return run_episodes(
      static_cast<int>(initial_states.size()),
      [&](int k) {
        GetupEnv local = env;
        const ObservationWeak* obs = &local.reset_to(initial_states[k], scale);
        double total = 0.0;
        while (true) {
          StepResult r = local.step(policy.deterministic_action(obs->flatten(), scale));
          total += r.reward.total;
          if (r.done) break;
          obs = &local.observation();
        }
        return total;
      },
      parallel);
}

}  // namespace getup
