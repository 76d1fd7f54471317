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

#ifndef GETUP_NN_H_
#define GETUP_NN_H_

#include <cstdint>
#include <vector>

#include <Eigen/Core>

#include "getup/rng.h"

namespace getup {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

// Fully connected network, ReLU between layers, linear output. All weights
// and biases live in one contiguous vector in layer order (W0, b0, W1, b1,
// ...), column-major weights of shape (out, in). Inputs are column batches.
class DenseNetwork {
 public:
  struct Cache {
    std::vector<Mat> activations;  // input, then each hidden layer post-ReLU
  };

  DenseNetwork() = default;
  // sizes = {input, hidden..., output}; uniform(+-1/sqrt(fan_in)) init.
  DenseNetwork(std::vector<int> sizes, Rng& rng);

  int input_dim() const { return sizes_.front(); }
  int output_dim() const { return sizes_.back(); }
  const std::vector<int>& sizes() const { return sizes_; }
  int num_layers() const { return static_cast<int>(sizes_.size()) - 1; }
  Eigen::Index num_params() const { return params_.size(); }

  Vec& params() { return params_; }
  const Vec& params() const { return params_; }

  Mat forward(const Mat& input, Cache* cache = nullptr) const;
  // Back-propagates dL/doutput. Adds parameter gradients to `grad` when
  // non-null and returns dL/dinput.
  Mat backward(const Cache& cache, const Mat& grad_output, Vec* grad) const;

 private:
  Eigen::Map<const Mat> weight(int layer) const;
  Eigen::Map<const Vec> bias(int layer) const;

  std::vector<int> sizes_;
  std::vector<Eigen::Index> offsets_;
  Vec params_;
};

class Adam {
 public:
  Adam() = default;
  Adam(Eigen::Index size, double learning_rate, double beta1 = 0.9, double beta2 = 0.999,
       double epsilon = 1e-8);

  void step(Vec& params, const Vec& grad);

  double learning_rate() const { return lr_; }
  int64_t steps() const { return t_; }
  const Vec& first_moment() const { return m_; }
  const Vec& second_moment() const { return v_; }
  void restore(int64_t steps, Vec first, Vec second);

 private:
  double lr_ = 1e-3;
  double beta1_ = 0.9;
  double beta2_ = 0.999;
  double eps_ = 1e-8;
  int64_t t_ = 0;
  Vec m_;
  Vec v_;
};

}  // namespace getup

#endif  // GETUP_NN_H_
