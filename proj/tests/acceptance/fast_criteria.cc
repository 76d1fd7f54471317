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

#include <algorithm>
#include <cmath>
#include <filesystem>

#include <Eigen/Cholesky>

#include "criteria.h"
#include "getup/analysis.h"
#include "getup/checkpoint.h"
#include "getup/curriculum.h"
#include "getup/error.h"
#include "getup/imitation.h"
#include "getup/reward.h"
#include "getup/runner.h"
#include "getup/sac.h"
#include "getup/sim.h"
#include "test_support.h"

namespace getup::acceptance {
namespace {

namespace fs = std::filesystem;

double relative_error(double a, double b) {
  return std::abs(a - b) / std::max(1e-6, std::abs(a) + std::abs(b));
}

Mat random_mat(int rows, int cols, Rng& rng) {
  Mat m(rows, cols);
  for (int i = 0; i < m.size(); ++i) m.data()[i] = rng.normal();
  return m;
}

Outcome tolerance_function() {
  Checker c;
  const std::vector<ToleranceSpec> specs = {
      {1.55, kInf, 0.37, 0.1}, {-0.3, 0.3, 1.2, 0.1}, {0.0, 0.0, 0.5, 0.1},
      {-0.03, 0.03, 0.6, 0.3}, {0.9, kInf, 1.9, 0.0}, {0.0, 0.9, 0.38, 0.0},
      {-2.0, 5.0, 3.0, 0.7}};
  double worst_margin = 0.0, worst_jump = 0.0;
  Rng rng(1);
  for (const ToleranceSpec& s : specs) {
    const double v_eff = std::max(s.value_at_margin, kMinMarginValue);
    for (int i = 0; i < 1000; ++i) {
      const double hi = std::isinf(s.upper) ? s.lower + 10.0 : s.upper;
      c.expect(tolerance(rng.uniform(s.lower, hi), s) == 1.0, "interior value is not 1");
    }
    c.expect(tolerance(s.lower, s) == 1.0, "value at lower bound is not 1");
    worst_margin = std::max(worst_margin, std::abs(tolerance(s.lower - s.margin, s) - v_eff));
    worst_jump = std::max(worst_jump, std::abs(tolerance(std::nextafter(s.lower, -kInf), s) - 1.0));
    // Gaussian profile: half the margin gives v_eff^(1/4).
    c.expect(std::abs(tolerance(s.lower - 0.5 * s.margin, s) - std::pow(v_eff, 0.25)) < 1e-12,
             "tail is not Gaussian");
    if (!std::isinf(s.upper)) {
      c.expect(tolerance(s.upper, s) == 1.0, "value at upper bound is not 1");
      worst_margin = std::max(worst_margin, std::abs(tolerance(s.upper + s.margin, s) - v_eff));
      worst_jump = std::max(worst_jump, std::abs(tolerance(std::nextafter(s.upper, kInf), s) - 1.0));
    }
  }
  c.expect(worst_margin < 1e-9, "value at margin differs from v_eff by >= 1e-9");
  c.expect(worst_jump < 1e-9, "discontinuity at a bound >= 1e-9");
  c.note("max|f(margin)-v_eff|", worst_margin);
  c.note("max_bound_jump", worst_jump);
  return c.outcome();
}

Outcome reward_fuzz() {
  Checker c;
  Rng rng(2);
  auto v1 = [](double x) { return Eigen::VectorXd::Constant(1, x); };
  double third_min = 1.0, third_max = 0.0;
  for (int trial = 0; trial < 100000; ++trial) {
    WeakRewardInputs w;
    w.head_height = rng.uniform(-1, 3);
    w.com_height = rng.uniform(-1, 2);
    w.torso_up_z = rng.uniform(-1, 1);
    w.com_velocity_horizontal = v1(rng.uniform(-10, 10));
    w.feet_distance = rng.uniform(0, 3);
    SlowRewardInputs s;
    s.com_height_delta = rng.uniform(-2, 2);
    s.orientation_delta = v1(rng.uniform(-2, 2));
    s.hip_velocity_delta = {rng.uniform(-10, 10), rng.uniform(-10, 10)};
    BalanceRewardInputs b;
    b.com_velocity_horizontal = v1(rng.uniform(-10, 10));
    b.torso_up_z = rng.uniform(-1, 1);
    b.com_height = rng.uniform(-1, 2);
    b.com_height_delta = rng.uniform(-2, 2);
    Eigen::VectorXd q(3);
    q << rng.uniform(-3, 3), rng.uniform(-3, 3), rng.uniform(-3, 3);
    RewardConfig config;
    config.height_scale = rng.uniform(0.5, 1.5);
    const RewardBreakdown slow = reward_slow(s, config);
    for (const RewardBreakdown& r :
         {reward_weak(w, config), slow, reward_balance(b, q, Eigen::VectorXd::Zero(3), config)}) {
      c.expect(r.total >= 0.0 && r.total <= 1.0, "composed reward outside [0, 1]");
      for (const auto& [name, value] : r.terms) {
        c.expect(value >= 0.0 && value <= 1.0, "term " + name + " outside [0, 1]");
      }
    }
    const double third = (slow.terms.at("r_hip") + 2.0) / 3.0;
    third_min = std::min(third_min, third);
    third_max = std::max(third_max, third);
    c.expect(third >= 2.0 / 3.0 && third <= 1.0, "third factor outside [2/3, 1]");
  }
  c.note("samples", 100000);
  c.note("third_factor_range", "[" + std::to_string(third_min) + "," + std::to_string(third_max) + "]");
  return c.outcome();
}

std::vector<double> returns_with_min(double low) {
  std::vector<double> r(10, 100.0);
  r[3] = low;
  return r;
}

Outcome curriculum_trace() {
  Checker c;
  struct Row {
    int64_t steps;
    double min_return;
    int stage;
    int64_t budget;
    CurriculumDecision decision;
  };
  const std::vector<Row> trace = {
      {100000, 10, 0, 300000, CurriculumDecision::kContinue},
      {50000, 60, 0, 300000, CurriculumDecision::kContinue},    // 60 is not above omega
      {10000, 61, 1, 300000, CurriculumDecision::kAdvance},     // 1.5 * 160000 clipped up
      {700000, 75, 2, 800000, CurriculumDecision::kAdvance},    // 1.5 * 700000 clipped down
      {400000, 30, 2, 800000, CurriculumDecision::kContinue},
      {100000, 80, 3, 750000, CurriculumDecision::kAdvance},    // 1.5 * 500000
      {750000, 0, 3, 750000, CurriculumDecision::kContinue},    // N_c == M
      {1, 0, 3, 750000, CurriculumDecision::kTerminate},
  };
  Curriculum curriculum;
  c.expect(curriculum.config().min_steps == 300000 && curriculum.config().max_steps == 800000,
           "default clip bounds are not 3e5/8e5");
  c.expect(curriculum.config().beta == 0.95 && curriculum.config().threshold == 60.0,
           "beta or omega differ from 0.95 / 60");
  int row_index = 0;
  for (const Row& row : trace) {
    for (int64_t i = 0; i < row.steps; ++i) curriculum.record_step();
    const CurriculumDecision d = curriculum.on_evaluation(returns_with_min(row.min_return));
    const CurriculumState& s = curriculum.state();
    const std::string at = " at row " + std::to_string(row_index++);
    c.expect(d == row.decision, std::string("decision ") + to_string(d) + at);
    c.expect(s.stage == row.stage, "stage" + at);
    c.expect(s.multiplier == std::pow(0.95, row.stage), "multiplier" + at);
    c.expect(s.budget == row.budget, "budget" + at);
  }
  c.expect(curriculum.state().terminated, "not terminated at the end");
  c.note("rows", trace.size());
  return c.outcome();
}

ReferenceTrajectory ramp_reference(int frames) {
  ReferenceTrajectory ref;
  ref.hip_indices = {0, 2};
  for (int k = 0; k < frames; ++k) {
    ReferenceFrame f;
    f.q = Vec(3);
    f.q << 0.1 * k, -0.05 * k * k, std::sin(k);
    f.com_height = 0.2 + 0.1 * k;
    f.torso_up = std::cos(0.3 * k);
    f.source_time = k;
    f.state.q = Vec::Constant(6, k);
    f.state.qdot = Vec::Constant(6, 1.0 + k);
    ref.frames.push_back(f);
  }
  recompute_hip_velocities(ref);
  return ref;
}

Outcome retiming() {
  Checker c;
  const ReferenceTrajectory ref = ramp_reference(9);
  const ReferenceTrajectory same = retime(ref, 1.0);
  c.expect(same.length() == ref.length(), "kappa 1 changes the length");
  for (int k = 0; k < ref.length() && same.length() == ref.length(); ++k) {
    c.expect(same.frames[k] == ref.frames[k], "kappa 1 is not the identity");
  }
  const ReferenceTrajectory half = retime(ref, 0.5);
  c.expect(half.length() == 2 * ref.duration() + 1, "kappa 0.5 frame count");
  double mid_err = 0.0;
  for (int k = 0; k + 1 < ref.length(); ++k) {
    const Vec mid = 0.5 * (ref.frames[k].q + ref.frames[k + 1].q);
    mid_err = std::max(mid_err, (half.frames[2 * k + 1].q - mid).cwiseAbs().maxCoeff());
    mid_err = std::max(mid_err, std::abs(half.frames[2 * k + 1].com_height -
                                         0.5 * (ref.frames[k].com_height + ref.frames[k + 1].com_height)));
    c.expect(half.frames[2 * k].q == ref.frames[k].q, "kappa 0.5 even frames differ from the source");
  }
  c.expect(mid_err < 1e-12, "kappa 0.5 midpoints");
  Rng rng(4);
  for (int trial = 0; trial < 100; ++trial) {
    const double kappa = rng.uniform(0.05, 1.0);
    const ReferenceTrajectory out = retime(ref, kappa);
    c.expect(out.frames.front().q == ref.frames.front().q &&
                 out.frames.front().com_height == ref.frames.front().com_height &&
                 out.frames.front().torso_up == ref.frames.front().torso_up,
             "first frame not preserved");
    c.expect(out.frames.back().q == ref.frames.back().q &&
                 out.frames.back().com_height == ref.frames.back().com_height,
             "last frame not preserved");
    const std::vector<double> times = retime_source_times(ref.duration(), kappa);
    c.expect(times.front() == 0.0 && times.back() == ref.duration(), "source time endpoints");
    for (size_t k = 1; k < times.size(); ++k) {
      c.expect(times[k] > times[k - 1], "source times not strictly increasing");
      c.expect(out.frames[k].source_time == times[k], "frame source time differs from the map");
    }
  }
  c.note("random_kappas", 100);
  c.note("max_midpoint_error", mid_err);
  return c.outcome();
}

Outcome rsi_statistics() {
  Checker c;
  const int len = 25, n = 10000;
  Rng rng(5);
  for (double eps : {0.0, 0.3, 1.0}) {
    int zeros = 0;
    for (int i = 0; i < n; ++i) {
      const int s = sample_start(len, eps, rng);
      c.expect(s >= 0 && s < len, "start outside the reference");
      zeros += s == 0;
    }
    const double p = eps + (1.0 - eps) / len;
    const double sd = std::sqrt(p * (1.0 - p) / n);
    const double freq = static_cast<double>(zeros) / n;
    c.expect(std::abs(freq - p) <= 3.0 * sd, "zero-start frequency off for eps " + std::to_string(eps));
    c.note("eps" + std::to_string(eps).substr(0, 3), std::to_string(freq) + "/" + std::to_string(p));
  }
  return c.outcome();
}

Outcome sac_numerics() {
  Checker c;
  Rng rng(6);
  SacConfig tiny;
  tiny.hidden = {2};
  double worst = 0.0;
  const double h = 1e-6;

  DenseNetwork critic({3 + 2, 2, 2, 1}, rng);
  const Mat obs = random_mat(3, 6, rng), act = random_mat(2, 6, rng);
  const Vec targets = random_mat(6, 1, rng).col(0);
  Vec grad = Vec::Zero(critic.num_params());
  SacAgent::critic_loss(critic, obs, act, targets, &grad);
  for (Eigen::Index i = 0; i < critic.num_params(); ++i) {
    DenseNetwork p = critic, m = critic;
    p.params()[i] += h;
    m.params()[i] -= h;
    const double fd = (SacAgent::critic_loss(p, obs, act, targets, nullptr) -
                       SacAgent::critic_loss(m, obs, act, targets, nullptr)) / (2 * h);
    worst = std::max(worst, relative_error(grad[i], fd));
  }

  SacAgent agent(3, 2, tiny, rng);
  agent.set_log_alpha(std::log(0.3));
  const Mat aobs = random_mat(3, 7, rng);
  Vec scales(7);
  for (int k = 0; k < 7; ++k) scales[k] = rng.uniform(0.3, 1.0);
  const Mat noise = random_mat(2, 7, rng);
  Vec agrad = Vec::Zero(agent.policy().network().num_params());
  Vec log_probs;
  agent.actor_loss(aobs, scales, noise, &agrad, &log_probs);
  Vec& params = agent.policy().network().params();
  for (Eigen::Index i = 0; i < params.size(); ++i) {
    const double saved = params[i];
    params[i] = saved + h;
    const double lp = agent.actor_loss(aobs, scales, noise, nullptr);
    params[i] = saved - h;
    const double lm = agent.actor_loss(aobs, scales, noise, nullptr);
    params[i] = saved;
    worst = std::max(worst, relative_error(agrad[i], (lp - lm) / (2 * h)));
  }

  double tgrad = 0.0;
  agent.temperature_loss(-0.4, log_probs, &tgrad);
  const double tfd = (agent.temperature_loss(-0.4 + h, log_probs, nullptr) -
                      agent.temperature_loss(-0.4 - h, log_probs, nullptr)) / (2 * h);
  worst = std::max(worst, relative_error(tgrad, tfd));
  c.expect(worst < 1e-4, "finite-difference relative error >= 1e-4");
  c.note("max_fd_rel_err", worst);

  double worst_mass = 0.0;
  for (int trial = 0; trial < 5; ++trial) {
    const double beta = rng.uniform(0.1, 1.0);
    const Vec mean = Vec::Constant(1, rng.uniform(-1, 1));
    const Vec log_std = Vec::Constant(1, rng.uniform(-1.5, 0.3));
    const int n = 400000;
    const double da = 2 * beta / n;
    double total = 0.0;
    for (int i = 0; i < n; ++i) {
      const double a = -beta + (i + 0.5) * da;
      total += std::exp(squashed_log_prob(Vec::Constant(1, std::atanh(a / beta)), mean, log_std, beta)) * da;
    }
    worst_mass = std::max(worst_mass, std::abs(total - 1.0));
  }
  c.expect(worst_mass < 1e-3, "squashed density does not integrate to 1 within 1e-3");
  c.note("max|mass-1|", worst_mass);

  SquashedGaussianPolicy policy(4, 1, {8}, rng);
  policy.network().params().tail(2).setConstant(3.0);
  const double beta_hat = 0.37;
  const Vec probe = Vec::Ones(4);
  double largest = 0.0;
  for (int i = 0; i < 1000000; ++i) {
    largest = std::max(largest, std::abs(policy.act(probe, beta_hat, false, rng).action[0]));
  }
  c.expect(largest <= beta_hat, "sampled action exceeds the torque multiplier");
  c.note("max|a|/beta", largest / beta_hat);

  for (double tau : {1.0, 5e-3}) {
    SacAgent a(3, 2, tiny, rng);
    a.critic(0).params() = random_mat(a.critic(0).num_params(), 1, rng).col(0);
    a.critic(1).params() = random_mat(a.critic(1).num_params(), 1, rng).col(0);
    Vec expected[2];
    for (int k = 0; k < 2; ++k) {
      const Vec& t = a.target_critic(k).params();
      const Vec& o = a.critic(k).params();
      expected[k] = Vec(t.size());
      for (Eigen::Index i = 0; i < t.size(); ++i) expected[k][i] = (1.0 - tau) * t[i] + tau * o[i];
    }
    a.soft_update(tau);
    for (int k = 0; k < 2; ++k) {
      c.expect(a.target_critic(k).params() == expected[k], "soft update not exact for tau " + std::to_string(tau));
    }
    if (tau == 1.0) c.expect(a.target_critic(0).params() == a.critic(0).params(), "tau 1 is not a copy");
  }
  return c.outcome();
}

double potential_energy(const CharacterModel& m, const Vec& q, double g) {
  const Kinematics k = forward_kinematics(m, q);
  double v = 0.0;
  for (size_t i = 0; i < m.links.size(); ++i) v += m.links[i].mass * g * k.links[i].com.y();
  return v;
}

Outcome physics() {
  Checker c;
  const CharacterModel humanoid = testing::humanoid();
  const CharacterModel chain = load_character(testing::pendulum_json(2));
  Rng rng(7);
  auto random_q = [&](const CharacterModel& m) {
    Vec q(m.num_dofs());
    for (int i = 0; i < q.size(); ++i) q[i] = rng.uniform(-1.5, 1.5);
    q[1] = 1.0;
    return q;
  };

  double residual = 0.0;
  for (int trial = 0; trial < 200; ++trial) {
    const Vec q = random_q(humanoid);
    Vec qdot(humanoid.num_dofs()), qddot(humanoid.num_dofs());
    for (int i = 0; i < qdot.size(); ++i) {
      qdot[i] = rng.uniform(-2, 2);
      qddot[i] = rng.uniform(-10, 10);
    }
    const Mat mass = mass_matrix(humanoid, q);
    const Vec bias = bias_forces(humanoid, q, qdot);
    const Vec tau = mass * qddot + bias;
    residual = std::max(residual, (mass.llt().solve(tau - bias) - qddot).cwiseAbs().maxCoeff());
  }
  c.expect(residual < 1e-8, "inverse-dynamics residual >= 1e-8");
  c.note("id_residual", residual);

  double asym = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    const Mat mass = mass_matrix(humanoid, random_q(humanoid));
    asym = std::max(asym, (mass - mass.transpose()).cwiseAbs().maxCoeff());
    Eigen::LLT<Mat> llt(mass);
    c.expect(llt.info() == Eigen::Success, "mass matrix not positive definite");
  }
  c.expect(asym <= 1e-12, "mass matrix not symmetric");
  c.note("max_asymmetry", asym);

  SimConfig config;
  config.substeps_per_control = 1;
  SimState s;
  s.q = Vec::Zero(5);
  s.qdot = Vec::Zero(5);
  s.q[3] = 1.2;
  s.q[4] = -0.7;
  const double rest = potential_energy(chain, Vec::Zero(5), config.gravity);
  auto energy = [&](const SimState& st) {
    return 0.5 * st.qdot.dot(mass_matrix(chain, st.q) * st.qdot) +
           potential_energy(chain, st.q, config.gravity) - rest;
  };
  const double e0 = energy(s);
  double drift = 0.0;
  for (int k = 0; k < 800; ++k) {
    s = control_step(chain, s, Vec::Zero(2), config);
    drift = std::max(drift, std::abs(energy(s) - e0) / e0);
  }
  c.expect(drift < 0.005, "double-pendulum energy drift >= 0.5%");
  c.note("energy_drift", drift);

  SimState fall = standing_state(humanoid);
  fall.q[1] += 3.0;
  SimConfig ballistic;
  ballistic.substeps_per_control = 80;
  const double z0 = forward_kinematics(humanoid, fall.q).com.y();
  const SimState after = control_step(humanoid, fall, Vec::Zero(humanoid.num_actuated()), ballistic);
  const double drop = z0 - forward_kinematics(humanoid, after.q).com.y();
  const double drop_err = std::abs(drop - 0.5 * ballistic.gravity * 0.01);
  c.expect(drop_err < 1e-4, "free-fall drop differs from g t^2 / 2 by >= 1e-4 m");
  c.note("drop_error", drop_err);
  return c.outcome();
}

Mat clustered_points(int n, int dims, Rng& rng) {
  Mat x(n, dims);
  for (int i = 0; i < n; ++i) {
    const double center = 4.0 * (i % 3);
    for (int j = 0; j < dims; ++j) x(i, j) = center + rng.normal();
  }
  return x;
}

Outcome embedding_diagnostics() {
  Checker c;
  Rng rng(8);
  const Mat x = clustered_points(150, 8, rng);
  TsneConfig config;
  config.perplexity = 20.0;
  config.iterations = 300;
  config.exaggeration_iterations = 100;
  config.seed = 3;
  const TsneResult a = tsne_embed(x, config);
  const double perp_err = (a.row_perplexity.array() - config.perplexity).abs().maxCoeff();
  c.expect(perp_err < 1e-3, "row perplexity off by >= 1e-3");
  c.note("max_perplexity_error", perp_err);
  const TsneResult b = tsne_embed(x, config);
  c.expect(a.embedding == b.embedding, "t-SNE not deterministic for a fixed seed");
  config.parallel = true;
  c.expect(tsne_embed(x, config).embedding == a.embedding, "parallel t-SNE differs from serial");

  const PcaResult p = pca_embed(x, 3);
  const double ortho = (p.components.transpose() * p.components - Mat::Identity(3, 3)).cwiseAbs().maxCoeff();
  c.expect(ortho < 1e-10, "PCA components not orthonormal within 1e-10");
  c.expect(pca_embed(x, 3).embedding == p.embedding, "PCA not deterministic");
  c.note("pca_orthonormality", ortho);
  return c.outcome();
}

void expect_same_agent(Checker& c, const SacAgent& a, const SacAgent& b, const std::string& what) {
  bool same = a.policy().network().params() == b.policy().network().params() &&
              a.log_alpha() == b.log_alpha() &&
              a.actor_optimizer().first_moment() == b.actor_optimizer().first_moment() &&
              a.actor_optimizer().second_moment() == b.actor_optimizer().second_moment() &&
              a.actor_optimizer().steps() == b.actor_optimizer().steps();
  for (int i = 0; i < 2; ++i) {
    same = same && a.critic(i).params() == b.critic(i).params() &&
           a.target_critic(i).params() == b.target_critic(i).params() &&
           a.critic_optimizer(i).first_moment() == b.critic_optimizer(i).first_moment() &&
           a.critic_optimizer(i).second_moment() == b.critic_optimizer(i).second_moment();
  }
  c.expect(same, what);
}

Outcome checkpoint_resume(const fs::path& out_dir) {
  Checker c;
  ExperimentConfig config = preset_config("desk");
  config.character = testing::source_path("characters/planar_humanoid.json");
  config.training.max_steps = 10000;
  config.training.checkpoint_interval = 5000;
  config.output_dir = out_dir / "c13_full";
  fs::remove_all(config.output_dir);
  const TrainResult full = run_train_weak(config);

  const Checkpoint loaded = load_checkpoint(full.final_checkpoint);
  expect_same_agent(c, loaded.agent, full.checkpoint.agent, "reloaded agent differs");
  c.expect(loaded.replay && *loaded.replay == *full.checkpoint.replay, "reloaded replay differs");
  c.expect(loaded.curriculum == full.checkpoint.curriculum, "reloaded curriculum differs");
  c.expect(loaded.rng_states == full.checkpoint.rng_states, "reloaded rng states differ");
  Rng rng(9);
  for (int i = 0; i < 100; ++i) {
    Vec obs(loaded.agent.policy().observation_dim());
    for (int j = 0; j < obs.size(); ++j) obs[j] = rng.normal();
    c.expect(loaded.agent.policy().deterministic_action(obs, 0.8) ==
                 full.checkpoint.agent.policy().deterministic_action(obs, 0.8),
             "reloaded policy output differs");
  }

  ExperimentConfig split = config;
  split.output_dir = out_dir / "c13_split";
  fs::remove_all(split.output_dir);
  TrainOptions first;
  first.stop_at = 5000;
  run_train_weak(split, first);
  TrainOptions second;
  second.resume = split.output_dir / "checkpoints" / "latest";
  const TrainResult resumed = run_train_weak(split, second);
  c.expect(resumed.progress == full.progress, "resumed progress trace differs");
  expect_same_agent(c, resumed.checkpoint.agent, full.checkpoint.agent, "resumed agent differs");
  c.expect(*resumed.checkpoint.replay == *full.checkpoint.replay, "resumed replay differs");
  c.expect(resumed.checkpoint.rng_states == full.checkpoint.rng_states, "resumed rng states differ");
  c.note("steps", config.training.max_steps);
  c.note("evaluations", full.progress.size());
  c.note("optimizer_steps", full.checkpoint.agent.actor_optimizer().steps());
  return c.outcome();
}

}  // namespace

std::vector<Criterion> fast_criteria(const fs::path& out_dir) {
  return {
      {1, "tolerance function", false, tolerance_function},
      {2, "reward compositions", false, reward_fuzz},
      {3, "curriculum trace", false, curriculum_trace},
      {4, "retiming", false, retiming},
      {5, "eps-RSI statistics", false, rsi_statistics},
      {6, "SAC numerics", false, sac_numerics},
      {7, "physics", false, physics},
      {12, "embedding diagnostics", false, embedding_diagnostics},
      {13, "checkpoint round trip and resume", false, [out_dir] { return checkpoint_resume(out_dir); }},
  };
}

}  // namespace getup::acceptance
