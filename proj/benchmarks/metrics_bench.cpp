/*
 * Copyright (c) 2026 The ltp Authors
 *
 * Licensed under the Apache License, Version 2.0;
 * You may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an 'AS IS' BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */


#include <benchmark/benchmark.h>

#include <numeric>

#include "ltp/eval/metrics.hpp"
#include "ltp/rng.hpp"

namespace {

using namespace ltp;

std::pair<std::vector<int>, std::vector<int>> permutations(int n) {
  Rng r(3);
  std::vector<int> a(n), b(n);
  std::iota(a.begin(), a.end(), 1);
  std::iota(b.begin(), b.end(), 1);
  r.shuffle(b);
  return {a, b};
}

void BM_Kendall(benchmark::State& state) {
  const auto [a, b] = permutations(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(eval::kendall_tau(a, b));
}
BENCHMARK(BM_Kendall)->Arg(16)->Arg(1024)->Arg(1 << 16);

void BM_Spearman(benchmark::State& state) {
  const auto [a, b] = permutations(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(eval::spearman_rho(a, b));
}
BENCHMARK(BM_Spearman)->Arg(16)->Arg(1024)->Arg(1 << 16);

}  // namespace
