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


#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace ltp::eval {

struct PointMetrics {
  double mae = 0.0;
  double rmse = 0.0;
  double mape = 0.0;  // percent, over samples with y >= floor
  std::size_t n = 0;
  std::size_t mape_excluded = 0;
};

/// Pooled MAE/RMSE/MAPE. Samples with |y| below `mape_floor` seconds are
/// left out of MAPE only. Throws ValidationError on empty or misaligned input.
PointMetrics point_metrics(std::span<const double> y, std::span<const double> yhat,
                           double mape_floor = 1.0);

struct Ranking {
  std::vector<int> ranks;  // 1-based
  bool ties = false;
};

/// Ranks by ascending time; equal times fall back to key order and set
/// `ties`.
Ranking rank_by_time(std::span<const double> times, std::span<const std::string> keys);

/// 1 - 6 D / (N (N^2 - 1)). Inputs must be permutations of 1..N, N >= 2.
double spearman_rho(std::span<const int> rank_true, std::span<const int> rank_pred);
/// Kendall tau-a, (Nc - Nd) / C(N, 2), via merge-sort inversion counting.
double kendall_tau(std::span<const int> rank_true, std::span<const int> rank_pred);

enum class PiKind { Error, Rank };

/// Relative gain over the second-best score, in percent.
double performance_improvement(double ours, double second_best, PiKind kind);

struct Calibration {
  double coverage_68 = 0.0;
  double coverage_95 = 0.0;
  double nll = 0.0;  // mean per-sample Gaussian NLL
  std::size_t n = 0;
};

/// Coverage uses inclusive bounds |y - mu| <= z sigma, z in {1, 1.96}.
Calibration calibration(std::span<const double> mu, std::span<const double> sigma,
                        std::span<const double> y);

/// Per-scene predictions in seconds, aligned with the scene's agent order.
struct ScenePrediction {
  std::string scene_id;
  double t_end = 0.0;
  std::vector<std::string> callsigns;
  std::vector<double> y_true;
  std::vector<double> mu;
  std::vector<double> sigma;  // empty for point-only models
};

struct RankSummary {
  double spearman = 0.0;
  double kendall = 0.0;
  std::size_t scenes = 0;   // scenes with N >= 2
  std::size_t skipped = 0;  // scenes with N < 2
  std::size_t tie_scenes = 0;
};

/// Macro average of per-scene rho and tau over scenes with at least two
/// aircraft.
RankSummary rank_metrics(std::span<const ScenePrediction> scenes);

}  // namespace ltp::eval
