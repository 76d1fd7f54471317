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

#include "getup/analysis.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "getup/error.h"
#include "getup/json_util.h"
#include "getup/kernels.h"
#include "getup/rng.h"

namespace getup {
namespace {

// Column source: index into q, or a locked constant.
struct JointColumn {
  int q_index = -1;
  double constant = 0.0;
};

JointColumn joint_column(const TrajectoryLog& log, const std::string& name) {
  for (size_t k = 0; k < log.joint_names.size(); ++k) {
    if (log.joint_names[k] == name) return {static_cast<int>(3 + k), 0.0};
  }
  if (auto it = log.locked_joints.find(name); it != log.locked_joints.end()) {
    return {-1, it->second};
  }
  throw ContractError("trajectory log has no joint '" + name + "'");
}

}  // namespace

FeatureMatrix extract_features(const TrajectoryLog& log, const FeatureOptions& options) {
  std::vector<std::string> names;
  for (const auto* group : {&options.ankle_joints, &options.knee_joints, &options.hip_joints}) {
    names.insert(names.end(), group->begin(), group->end());
  }
  std::vector<JointColumn> joints;
  for (const std::string& name : names) joints.push_back(joint_column(log, name));

  FeatureMatrix out;
  out.columns = names;
  out.columns.push_back("head_height");
  out.columns.push_back("torso_up");
  std::vector<const TrajectoryRecord*> kept;
  int standing = 0;
  for (const TrajectoryRecord& r : log.records) {
    if (r.phase == Phase::kRagdoll) continue;
    if (r.phase == Phase::kStanding && standing++ >= options.standing_keep) continue;
    kept.push_back(&r);
  }
  const auto cols = static_cast<Eigen::Index>(out.columns.size());
  out.values.resize(static_cast<Eigen::Index>(kept.size()), cols);
  for (size_t row = 0; row < kept.size(); ++row) {
    const TrajectoryRecord& r = *kept[row];
    for (size_t c = 0; c < joints.size(); ++c) {
      out.values(row, c) = joints[c].q_index >= 0 ? r.q[joints[c].q_index] : joints[c].constant;
    }
    out.values(row, cols - 2) = r.head_height;
    out.values(row, cols - 1) = r.torso_up;
    out.run_ids.push_back(log.run_id);
    out.frames.push_back(r.step);
  }
  if (!out.values.allFinite()) throw ContractError("non-finite feature values");
  return out;
}

FeatureMatrix concatenate(const std::vector<FeatureMatrix>& parts) {
  FeatureMatrix out;
  if (parts.empty()) return out;
  out.columns = parts.front().columns;
  Eigen::Index rows = 0;
  for (const FeatureMatrix& p : parts) {
    if (p.columns != out.columns) throw ContractError("feature columns differ");
    rows += p.values.rows();
  }
  out.values.resize(rows, static_cast<Eigen::Index>(out.columns.size()));
  Eigen::Index at = 0;
  for (const FeatureMatrix& p : parts) {
    out.values.middleRows(at, p.values.rows()) = p.values;
    at += p.values.rows();
    out.run_ids.insert(out.run_ids.end(), p.run_ids.begin(), p.run_ids.end());
    out.frames.insert(out.frames.end(), p.frames.begin(), p.frames.end());
  }
  return out;
}

TsneResult tsne_embed(const Mat& x, const TsneConfig& config) {
  const Eigen::Index n = x.rows();
  if (!(config.perplexity > 1.0)) throw ContractError("perplexity must exceed 1");
  if (!(static_cast<double>(n) > 3.0 * config.perplexity)) {
    throw ContractError("t-SNE needs more than 3 * perplexity rows");
  }
  if (config.out_dims < 1) throw ContractError("output dimension must be positive");

  const bool par = config.parallel;
  const Mat d = par ? kernels::pairwise_sq_distances_omp(x) : kernels::pairwise_sq_distances_serial(x);
  kernels::Affinities aff = par ? kernels::conditional_affinities_omp(d, config.perplexity)
                                : kernels::conditional_affinities_serial(d, config.perplexity);
  Mat p = (aff.conditional + aff.conditional.transpose()) / (2.0 * static_cast<double>(n));
  p /= p.sum();

  Rng rng(config.seed);
  Mat y(n, config.out_dims);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (int k = 0; k < config.out_dims; ++k) y(i, k) = rng.normal(0.0, config.init_std);
  }
  Mat update = Mat::Zero(n, config.out_dims);
  Mat gains = Mat::Ones(n, config.out_dims);
  Mat grad;
  auto gradient = [&](double exaggeration) {
    return par ? kernels::tsne_gradient_omp(p, y, exaggeration, &grad)
               : kernels::tsne_gradient_serial(p, y, exaggeration, &grad);
  };

  TsneResult result;
  result.initial_kl = gradient(1.0);
  for (int it = 0; it < config.iterations; ++it) {
    const bool early = it < config.exaggeration_iterations;
    const double kl = gradient(early ? config.exaggeration : 1.0);
    if (config.kl_every > 0 && it % config.kl_every == 0) result.kl_history.push_back(kl);
    const double momentum = early ? config.momentum_initial : config.momentum_final;
    for (Eigen::Index i = 0; i < n; ++i) {
      for (int k = 0; k < config.out_dims; ++k) {
        const bool same = (grad(i, k) > 0.0) == (update(i, k) > 0.0);
        gains(i, k) = std::max(same ? gains(i, k) * 0.8 : gains(i, k) + 0.2, config.min_gain);
        update(i, k) = momentum * update(i, k) - config.learning_rate * gains(i, k) * grad(i, k);
        y(i, k) += update(i, k);
      }
    }
    y.rowwise() -= y.colwise().mean();
  }
  result.final_kl = gradient(1.0);
  result.embedding = std::move(y);
  result.conditional = std::move(aff.conditional);
  result.row_perplexity = std::move(aff.perplexity);
  return result;
}

PcaResult pca_embed(const Mat& x, int out_dims) {
  const Eigen::Index n = x.rows();
  const Eigen::Index f = x.cols();
  if (out_dims < 1 || n < out_dims || f < out_dims) {
    throw ContractError("PCA needs at least out_dims rows and columns");
  }
  PcaResult r;
  r.mean = x.colwise().mean().transpose();
  const Mat centered = x.rowwise() - r.mean.transpose();
  const Mat cov = centered.transpose() * centered / std::max<double>(1.0, static_cast<double>(n - 1));
  Eigen::SelfAdjointEigenSolver<Mat> solver(cov);
  if (solver.info() != Eigen::Success) throw ContractError("eigendecomposition failed");
  r.eigenvalues = solver.eigenvalues().reverse();
  r.components.resize(f, out_dims);
  for (int k = 0; k < out_dims; ++k) {
    Vec v = solver.eigenvectors().col(f - 1 - k);
    Eigen::Index big = 0;
    v.cwiseAbs().maxCoeff(&big);
    if (v[big] < 0.0) v = -v;
    r.components.col(k) = v;
  }
  r.explained_variance = r.eigenvalues.head(out_dims);
  const double scale = std::max(1.0, cov.diagonal().cwiseAbs().maxCoeff());
  if (r.eigenvalues[0] <= 1e-14 * scale) {
    r.degenerate = true;
    r.embedding = Mat::Zero(n, out_dims);
    return r;
  }
  r.embedding = centered * r.components;
  return r;
}

std::vector<Vec2> head_lateral_profile(const TrajectoryLog& log) {
  std::vector<Vec2> out;
  bool have_origin = false;
  double origin = 0.0;
  for (const TrajectoryRecord& r : log.records) {
    if (r.phase == Phase::kRagdoll) continue;
    if (!have_origin) {
      origin = r.q[0];
      have_origin = true;
    }
    out.emplace_back(std::abs(r.q[0] - origin), r.head_height);
  }
  return out;
}

void write_points_csv(const std::filesystem::path& path, const Mat& points,
                      const FeatureMatrix& features) {
  if (points.rows() != static_cast<Eigen::Index>(features.run_ids.size())) {
    throw ContractError("point count does not match feature rows");
  }
  static const char* kAxes[] = {"x", "y", "z"};
  std::ostringstream out;
  out.precision(17);
  for (Eigen::Index k = 0; k < points.cols(); ++k) {
    out << (k < 3 ? kAxes[k] : "d" + std::to_string(k)) << ',';
  }
  out << "run_id,frame\n";
  for (Eigen::Index i = 0; i < points.rows(); ++i) {
    for (Eigen::Index k = 0; k < points.cols(); ++k) out << points(i, k) << ',';
    out << features.run_ids[i] << ',' << features.frames[i] << '\n';
  }
  write_text_file(path, out.str());
}

void write_profile_csv(const std::filesystem::path& path, const std::vector<Vec2>& profile) {
  std::ostringstream out;
  out.precision(17);
  out << "distance,head_height\n";
  for (const Vec2& p : profile) out << p.x() << ',' << p.y() << '\n';
  write_text_file(path, out.str());
}

std::string profile_svg(const std::vector<std::vector<Vec2>>& polylines,
                        const std::vector<std::string>& labels) {
  constexpr double kWidth = 640.0, kHeight = 400.0, kPad = 48.0;
  double max_x = 0.1, max_y = 0.1;
  for (const auto& line : polylines) {
    for (const Vec2& p : line) {
      max_x = std::max(max_x, p.x());
      max_y = std::max(max_y, p.y());
    }
  }
  auto sx = [&](double v) { return kPad + v / max_x * (kWidth - 2 * kPad); };
  auto sy = [&](double v) { return kHeight - kPad - v / max_y * (kHeight - 2 * kPad); };
  static const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e"};
  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\""
      << kHeight << "\">\n";
  svg << "<line x1=\"" << kPad << "\" y1=\"" << sy(0) << "\" x2=\"" << kWidth - kPad << "\" y2=\""
      << sy(0) << "\" stroke=\"black\"/>\n";
  svg << "<line x1=\"" << kPad << "\" y1=\"" << sy(0) << "\" x2=\"" << kPad << "\" y2=\"" << kPad
      << "\" stroke=\"black\"/>\n";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.2f m", max_x);
  svg << "<text x=\"" << kWidth - kPad << "\" y=\"" << kHeight - kPad / 2
      << "\" text-anchor=\"end\" font-size=\"12\">distance " << buf << "</text>\n";
  std::snprintf(buf, sizeof buf, "%.2f m", max_y);
  svg << "<text x=\"4\" y=\"" << kPad - 8 << "\" font-size=\"12\">head " << buf << "</text>\n";
  for (size_t l = 0; l < polylines.size(); ++l) {
    const char* color = kColors[l % 5];
    svg << "<polyline fill=\"none\" stroke=\"" << color << "\" points=\"";
    for (const Vec2& p : polylines[l]) svg << sx(p.x()) << ',' << sy(p.y()) << ' ';
    svg << "\"/>\n";
    for (const Vec2& p : polylines[l]) {
      svg << "<circle cx=\"" << sx(p.x()) << "\" cy=\"" << sy(p.y()) << "\" r=\"1.5\" fill=\""
          << color << "\"/>\n";
    }
    if (l < labels.size()) {
      svg << "<text x=\"" << kWidth - kPad << "\" y=\"" << kPad + 14.0 * l
          << "\" text-anchor=\"end\" font-size=\"12\" fill=\"" << color << "\">" << labels[l]
          << "</text>\n";
    }
  }
  svg << "</svg>\n";
  return svg.str();
}

}  // namespace getup
