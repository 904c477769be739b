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

#include "ltp/geo/pchip.hpp"
#include "ltp/rng.hpp"

namespace {

using namespace ltp;

void BM_PchipBuild(benchmark::State& state) {
  Rng r(1);
  const int n = static_cast<int>(state.range(0));
  std::vector<double> x(n), y(n);
  for (int i = 0; i < n; ++i) {
    x[i] = i + r.uniform(0, 0.5);
    y[i] = r.normal();
  }
  for (auto _ : state) benchmark::DoNotOptimize(geo::Pchip(x, y).slopes().data());
  state.SetItemsProcessed(state.iterations() * n);
}
BENCHMARK(BM_PchipBuild)->Arg(20)->Arg(200)->Arg(2000);

void BM_ResampleTrack(benchmark::State& state) {
  Rng r(2);
  geo::TrajectoryTrack t;
  t.callsign = "AC1";
  double time = 0;
  for (int i = 0; i < 300; ++i) {
    time += r.uniform(3, 9);
    t.points.push_back({time, 37 + 0.001 * i, 126 + 0.001 * i, 10000.0 - 30 * i});
  }
  for (auto _ : state) benchmark::DoNotOptimize(geo::pchip_resample(t).points.size());
}
BENCHMARK(BM_ResampleTrack);

}  // namespace
