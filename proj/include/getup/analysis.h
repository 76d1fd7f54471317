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

#ifndef GETUP_ANALYSIS_H_
#define GETUP_ANALYSIS_H_

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "getup/nn.h"
#include "getup/sim.h"
#include "getup/trajectory_log.h"

namespace getup {

struct FeatureOptions {
  int standing_keep = 5;
  std::vector<std::string> ankle_joints{"ankle_y_l", "ankle_y_r"};
  std::vector<std::string> knee_joints{"knee_l", "knee_r"};
  std::vector<std::string> hip_joints{"hip_y_l", "hip_y_r"};
};

struct FeatureMatrix {
  Mat values;  // rows are frames
  std::vector<std::string> columns;
  std::vector<std::string> run_ids;
  std::vector<int64_t> frames;  // record step per row
};

// Drops rag-doll frames and keeps only the first `standing_keep` standing
// frames. Locked joints contribute their locked angle.
FeatureMatrix extract_features(const TrajectoryLog& log, const FeatureOptions& options = {});
FeatureMatrix concatenate(const std::vector<FeatureMatrix>& parts);

struct TsneConfig {
  double perplexity = 10.0;
  int out_dims = 3;
  int iterations = 1000;
  int exaggeration_iterations = 250;
  double exaggeration = 12.0;
  double learning_rate = 200.0;
  double momentum_initial = 0.5;
  double momentum_final = 0.8;
  double init_std = 1e-4;
  double min_gain = 0.01;
  uint64_t seed = 0;
  bool parallel = false;
  int kl_every = 50;
};

struct TsneResult {
  Mat embedding;            // rows x out_dims
  Mat conditional;          // row-stochastic P before symmetrization
  Vec row_perplexity;       // realized per row
  double initial_kl = 0.0;  // KL(P || Q) at the initial embedding
  double final_kl = 0.0;
  std::vector<double> kl_history;  // every kl_every iterations
};

// Exact t-SNE.
TsneResult tsne_embed(const Mat& x, const TsneConfig& config);

struct PcaResult {
  Mat embedding;   // rows x out_dims
  Mat components;  // features x out_dims, orthonormal columns
  Vec explained_variance;
  Vec eigenvalues;  // all, descending, of the unbiased covariance
  Vec mean;
  bool degenerate = false;
};

PcaResult pca_embed(const Mat& x, int out_dims = 3);

// (|root x - episode origin x|, head height) per non-rag-doll control step.
std::vector<Vec2> head_lateral_profile(const TrajectoryLog& log);

void write_points_csv(const std::filesystem::path& path, const Mat& points,
                      const FeatureMatrix& features);
void write_profile_csv(const std::filesystem::path& path, const std::vector<Vec2>& profile);
std::string profile_svg(const std::vector<std::vector<Vec2>>& polylines,
                        const std::vector<std::string>& labels);

}  // namespace getup

#endif  // GETUP_ANALYSIS_H_
