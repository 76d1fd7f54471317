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

#ifndef GETUP_KERNELS_H_
#define GETUP_KERNELS_H_

#include <Eigen/Core>

namespace getup::kernels {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;

// Row-conditional affinities p_{j|i} with a per-row precision found by
// bisection so that exp(entropy) matches the target perplexity.
struct Affinities {
  Mat conditional;  // row-stochastic, zero diagonal
  Vec precision;    // 1 / (2 sigma^2) per row
  Vec perplexity;   // realized per row
};

// The serial functions are the reference; the OpenMP variants split work by
// row and sum per-row partials in row order, so results are bit-identical.
Mat pairwise_sq_distances_serial(const Mat& points);
Mat pairwise_sq_distances_omp(const Mat& points);

Affinities conditional_affinities_serial(const Mat& sq_distances, double perplexity,
                                         double entropy_tolerance = 1e-10, int max_iterations = 200);
Affinities conditional_affinities_omp(const Mat& sq_distances, double perplexity,
                                      double entropy_tolerance = 1e-10, int max_iterations = 200);

// Gradient of KL(P || Q) for the Student-t embedding `y` with P scaled by
// `exaggeration`. Returns KL(P || Q) for the unscaled P.
double tsne_gradient_serial(const Mat& joint_p, const Mat& y, double exaggeration, Mat* grad);
double tsne_gradient_omp(const Mat& joint_p, const Mat& y, double exaggeration, Mat* grad);

}  // namespace getup::kernels

#endif  // GETUP_KERNELS_H_
