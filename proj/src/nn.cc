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

#include "getup/nn.h"

#include <cmath>

#include "getup/error.h"

namespace getup {

DenseNetwork::DenseNetwork(std::vector<int> sizes, Rng& rng) : sizes_(std::move(sizes)) {
  if (sizes_.size() < 2) throw ContractError("network needs an input and an output size");
  Eigen::Index total = 0;
  for (int l = 0; l < num_layers(); ++l) {
    offsets_.push_back(total);
    total += static_cast<Eigen::Index>(sizes_[l + 1]) * (sizes_[l] + 1);
  }
  params_.resize(total);
  for (int l = 0; l < num_layers(); ++l) {
    const double bound = 1.0 / std::sqrt(static_cast<double>(sizes_[l]));
    const Eigen::Index count = static_cast<Eigen::Index>(sizes_[l + 1]) * (sizes_[l] + 1);
    for (Eigen::Index i = 0; i < count; ++i) params_[offsets_[l] + i] = rng.uniform(-bound, bound);
  }
}

Eigen::Map<const Mat> DenseNetwork::weight(int layer) const {
  return Eigen::Map<const Mat>(params_.data() + offsets_[layer], sizes_[layer + 1], sizes_[layer]);
}

Eigen::Map<const Vec> DenseNetwork::bias(int layer) const {
  return Eigen::Map<const Vec>(
      params_.data() + offsets_[layer] + static_cast<Eigen::Index>(sizes_[layer + 1]) * sizes_[layer],
      sizes_[layer + 1]);
}

Mat DenseNetwork::forward(const Mat& input, Cache* cache) const {
  if (input.rows() != input_dim()) throw ContractError("network input dimension mismatch");
  if (cache) {
    cache->activations.resize(num_layers());
    cache->activations[0] = input;
  }
  Mat x = input;
  for (int l = 0; l < num_layers(); ++l) {
    Mat y = weight(l) * x;
    y.colwise() += bias(l);
    if (l + 1 < num_layers()) {
      y = y.cwiseMax(0.0);
      if (cache) cache->activations[l + 1] = y;
    }
    x = std::move(y);
  }
  return x;
}

Mat DenseNetwork::backward(const Cache& cache, const Mat& grad_output, Vec* grad) const {
  Mat g = grad_output;
  for (int l = num_layers() - 1; l >= 0; --l) {
    const Mat& input = cache.activations[l];
    if (grad) {
      Eigen::Map<Mat> dw(grad->data() + offsets_[l], sizes_[l + 1], sizes_[l]);
      Eigen::Map<Vec> db(grad->data() + offsets_[l] + static_cast<Eigen::Index>(sizes_[l + 1]) * sizes_[l],
                         sizes_[l + 1]);
      dw.noalias() += g * input.transpose();
      db.noalias() += g.rowwise().sum();
    }
    Mat below = weight(l).transpose() * g;
    if (l > 0) below = (input.array() > 0.0).select(below, 0.0);
    g = std::move(below);
  }
  return g;
}

Adam::Adam(Eigen::Index size, double learning_rate, double beta1, double beta2, double epsilon)
    : lr_(learning_rate),
      beta1_(beta1),
      beta2_(beta2),
      eps_(epsilon),
      m_(Vec::Zero(size)),
      v_(Vec::Zero(size)) {}

void Adam::step(Vec& params, const Vec& grad) {
  ++t_;
  m_ = beta1_ * m_ + (1.0 - beta1_) * grad;
  v_ = beta2_ * v_ + (1.0 - beta2_) * grad.cwiseAbs2();
  const double c1 = 1.0 - std::pow(beta1_, static_cast<double>(t_));
  const double c2 = 1.0 - std::pow(beta2_, static_cast<double>(t_));
  params.array() -= lr_ * (m_.array() / c1) / ((v_.array() / c2).sqrt() + eps_);
}

void Adam::restore(int64_t steps, Vec first, Vec second) {
  if (first.size() != m_.size() || second.size() != v_.size()) {
    throw ContractError("optimizer state size mismatch");
  }
  t_ = steps;
  m_ = std::move(first);
  v_ = std::move(second);
}

}  // namespace getup
