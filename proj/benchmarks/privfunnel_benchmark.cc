// Copyright 2026 The privfunnel Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include <cstdint>
#include <random>

#include "benchmark/benchmark.h"
#include "privfunnel/linear_program.h"
#include "privfunnel/optimizers.h"
#include "privfunnel/polytope.h"
#include "privfunnel/probability.h"

namespace privfunnel {
namespace {

constexpr double kEpsilon = 1.0;
constexpr std::uint64_t kSeed = 17;

void BM_EnumerateLipPolytope(benchmark::State& state) {
  const int a = static_cast<int>(state.range(0));
  const HPolytope delta = BuildLipPolytope(RandomJoint(3, a, kSeed), kEpsilon);
  for (auto _ : state) {
    auto vertices = EnumerateVertices(delta);
    benchmark::DoNotOptimize(vertices);
  }
}
BENCHMARK(BM_EnumerateLipPolytope)->DenseRange(3, 8)->Unit(benchmark::kMicrosecond);

void BM_EnumerateLdpPolytope(benchmark::State& state) {
  const int a = static_cast<int>(state.range(0));
  const HPolytope gamma = BuildLdpPolytope(RandomJoint(2, a, kSeed), kEpsilon);
  for (auto _ : state) {
    auto vertices = EnumerateVertices(gamma);
    benchmark::DoNotOptimize(vertices);
  }
}
BENCHMARK(BM_EnumerateLdpPolytope)->DenseRange(2, 4)->Unit(benchmark::kMillisecond);

void BM_OptimizeLip(benchmark::State& state) {
  const int a = static_cast<int>(state.range(0));
  const JointDistribution joint = RandomJoint(3, a, kSeed);
  for (auto _ : state) {
    auto result = OptimizeLip(joint, kEpsilon);
    benchmark::DoNotOptimize(result);
  }
}
BENCHMARK(BM_OptimizeLip)->DenseRange(3, 8)->Unit(benchmark::kMicrosecond);

// Transportation problem with n sources and n sinks: n^2 variables.
void BM_SolveLp(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  Rng rng(kSeed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  LinearProgram lp;
  lp.objective.resize(n * n);
  for (int i = 0; i < n * n; ++i) lp.objective[i] = unit(rng);
  lp.eq_coeffs = Eigen::MatrixXd::Zero(2 * n, n * n);
  lp.eq_rhs = Eigen::VectorXd::Ones(2 * n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      lp.eq_coeffs(i, i * n + j) = 1.0;
      lp.eq_coeffs(n + j, i * n + j) = 1.0;
    }
  }
  lp.ineq_coeffs.resize(0, n * n);
  lp.ineq_rhs.resize(0);
  for (auto _ : state) {
    auto solution = SolveLp(lp);
    benchmark::DoNotOptimize(solution);
  }
}
BENCHMARK(BM_SolveLp)->RangeMultiplier(2)->Range(4, 16)->Unit(benchmark::kMicrosecond);

}  // namespace
}  // namespace privfunnel

BENCHMARK_MAIN();
