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

#include <cmath>
#include <limits>

#include "getup/error.h"
#include "getup/kernels.h"
#include "kernels_row.h"

namespace getup::kernels {

Mat pairwise_sq_distances_serial(const Mat& x) {
  const Eigen::Index n = x.rows();
  Mat d(n, n);
  for (Eigen::Index i = 0; i < n; ++i) detail::distance_row(x, i, d);
  return d;
}

Affinities conditional_affinities_serial(const Mat& d, double perplexity, double tol, int max_it) {
  if (!(perplexity > 1.0)) throw ContractError("perplexity must exceed 1");
  const Eigen::Index n = d.rows();
  Affinities a{Mat::Zero(n, n), Vec::Zero(n), Vec::Zero(n)};
  for (Eigen::Index i = 0; i < n; ++i) detail::affinity_row(d, i, perplexity, tol, max_it, a);
  return a;
}

double tsne_gradient_serial(const Mat& p, const Mat& y, double exaggeration, Mat* grad) {
  const Eigen::Index n = y.rows();
  Mat num(n, n);
  Vec row_sum(n);
  for (Eigen::Index i = 0; i < n; ++i) row_sum[i] = detail::student_row(y, i, num);
  const double z = row_sum.sum();
  Vec row_kl(n);
  grad->resize(n, y.cols());
  for (Eigen::Index i = 0; i < n; ++i) {
    row_kl[i] = detail::gradient_row(p, y, num, z, exaggeration, i, *grad);
  }
  return row_kl.sum();
}

}  // namespace getup::kernels
