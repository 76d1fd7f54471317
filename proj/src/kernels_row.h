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

#ifndef GETUP_SRC_KERNELS_ROW_H_
#define GETUP_SRC_KERNELS_ROW_H_

// Per-row bodies shared by the serial and OpenMP kernels.

#include <cmath>
#include <limits>

#include "getup/kernels.h"

namespace getup::kernels::detail {

inline void distance_row(const Mat& x, Eigen::Index i, Mat& d) {
  for (Eigen::Index j = 0; j < x.rows(); ++j) d(i, j) = (x.row(i) - x.row(j)).squaredNorm();
}

// Entropy (nats) of row i at precision beta; fills d's row of probabilities.
inline double row_entropy(const Mat& d, Eigen::Index i, double beta, double shift, Mat& p) {
  double z = 0.0;
  double weighted = 0.0;
  for (Eigen::Index j = 0; j < d.cols(); ++j) {
    if (j == i) {
      p(i, j) = 0.0;
      continue;
    }
    const double e = std::exp(-beta * (d(i, j) - shift));
    p(i, j) = e;
    z += e;
    weighted += e * (d(i, j) - shift);
  }
  for (Eigen::Index j = 0; j < d.cols(); ++j) p(i, j) /= z;
  return std::log(z) + beta * weighted / z;
}

inline void affinity_row(const Mat& d, Eigen::Index i, double perplexity, double tol, int max_it,
                         Affinities& a) {
  const double target = std::log(perplexity);
  double shift = std::numeric_limits<double>::infinity();
  for (Eigen::Index j = 0; j < d.cols(); ++j) {
    if (j != i) shift = std::min(shift, d(i, j));
  }
  double beta = 1.0;
  double lo = 0.0;
  double hi = std::numeric_limits<double>::infinity();
  double h = row_entropy(d, i, beta, shift, a.conditional);
  for (int it = 0; it < max_it && std::abs(h - target) > tol; ++it) {
    if (h > target) {
      lo = beta;
      beta = std::isinf(hi) ? beta * 2.0 : 0.5 * (beta + hi);
    } else {
      hi = beta;
      beta = 0.5 * (beta + lo);
    }
    h = row_entropy(d, i, beta, shift, a.conditional);
  }
  a.precision[i] = beta;
  a.perplexity[i] = std::exp(h);
}

// Fills row i of the Student-t kernel and returns its off-diagonal sum.
inline double student_row(const Mat& y, Eigen::Index i, Mat& num) {
  double s = 0.0;
  for (Eigen::Index j = 0; j < y.rows(); ++j) {
    if (j == i) {
      num(i, j) = 0.0;
      continue;
    }
    num(i, j) = 1.0 / (1.0 + (y.row(i) - y.row(j)).squaredNorm());
    s += num(i, j);
  }
  return s;
}

inline double gradient_row(const Mat& p, const Mat& y, const Mat& num, double z,
                           double exaggeration, Eigen::Index i, Mat& grad) {
  constexpr double kFloor = 1e-300;
  double kl = 0.0;
  grad.row(i).setZero();
  for (Eigen::Index j = 0; j < y.rows(); ++j) {
    if (j == i) continue;
    const double q = num(i, j) / z;
    const double coeff = 4.0 * (exaggeration * p(i, j) - q) * num(i, j);
    grad.row(i) += coeff * (y.row(i) - y.row(j));
    if (p(i, j) > 0.0) kl += p(i, j) * std::log(p(i, j) / std::max(q, kFloor));
  }
  return kl;
}

}  // namespace getup::kernels::detail

#endif  // GETUP_SRC_KERNELS_ROW_H_
