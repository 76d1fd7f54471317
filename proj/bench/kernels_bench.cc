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

// Serial reference kernels vs. their OpenMP counterparts.

#include <benchmark/benchmark.h>

#include "getup/kernels.h"
#include "getup/rng.h"

namespace {

using getup::kernels::Mat;

Mat random_points(int n, int d, uint64_t seed) {
  getup::Rng rng(seed);
  Mat x(n, d);
  for (int i = 0; i < n; ++i) {
    for (int k = 0; k < d; ++k) x(i, k) = rng.normal();
  }
  return x;
}

template <Mat (*Fn)(const Mat&)>
void BM_Distances(benchmark::State& state) {
  const Mat x = random_points(static_cast<int>(state.range(0)), 8, 1);
  for (auto _ : state) benchmark::DoNotOptimize(Fn(x));
}

template <getup::kernels::Affinities (*Fn)(const Mat&, double, double, int)>
void BM_Affinities(benchmark::State& state) {
  const Mat d = getup::kernels::pairwise_sq_distances_serial(
      random_points(static_cast<int>(state.range(0)), 8, 2));
  for (auto _ : state) benchmark::DoNotOptimize(Fn(d, 10.0, 1e-10, 200));
}

template <double (*Fn)(const Mat&, const Mat&, double, Mat*)>
void BM_Gradient(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const Mat d = getup::kernels::pairwise_sq_distances_serial(random_points(n, 8, 3));
  const auto a = getup::kernels::conditional_affinities_serial(d, 10.0);
  Mat p = (a.conditional + a.conditional.transpose()) / (2.0 * n);
  const Mat y = random_points(n, 3, 4);
  Mat grad;
  for (auto _ : state) benchmark::DoNotOptimize(Fn(p, y, 1.0, &grad));
}

BENCHMARK(BM_Distances<getup::kernels::pairwise_sq_distances_serial>)->Arg(256)->Arg(1024);
BENCHMARK(BM_Distances<getup::kernels::pairwise_sq_distances_omp>)->Arg(256)->Arg(1024);
BENCHMARK(BM_Affinities<getup::kernels::conditional_affinities_serial>)->Arg(256)->Arg(1024);
BENCHMARK(BM_Affinities<getup::kernels::conditional_affinities_omp>)->Arg(256)->Arg(1024);
BENCHMARK(BM_Gradient<getup::kernels::tsne_gradient_serial>)->Arg(256)->Arg(1024);
BENCHMARK(BM_Gradient<getup::kernels::tsne_gradient_omp>)->Arg(256)->Arg(1024);

}  // namespace

BENCHMARK_MAIN();
