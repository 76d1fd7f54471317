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

#ifndef GETUP_RNG_H_
#define GETUP_RNG_H_

#include <cstdint>
#include <random>
#include <string>

namespace getup {

// Seeded random stream. Distributions are constructed per draw so the engine
// state is the complete state; serialize() captures it exactly.
class Rng {
 public:
  explicit Rng(uint64_t seed = 0) : engine_(seed) {}

  double normal(double mean = 0.0, double stddev = 1.0);
  double uniform(double lo = 0.0, double hi = 1.0);
  // Uniform integer in [0, n).
  int64_t index(int64_t n);
  uint64_t next_u64() { return engine_(); }

  std::string serialize() const;
  void deserialize(const std::string& state);

  bool operator==(const Rng& other) const { return engine_ == other.engine_; }

 private:
  std::mt19937_64 engine_;
};

// Derives an independent seed from a base seed and a stream tag.
uint64_t derive_seed(uint64_t base, uint64_t stream);

}  // namespace getup

#endif  // GETUP_RNG_H_
