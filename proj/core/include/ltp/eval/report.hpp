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
#include <optional>
#include <span>
#include <string>

#include "ltp/eval/metrics.hpp"

namespace ltp::eval {

struct EvalReport {
  std::string model;
  double mae_s = 0.0;
  double rmse_s = 0.0;
  double mape_pct = 0.0;
  double spearman_rho = 0.0;
  double kendall_tau = 0.0;
  /// Mean per-sample Gaussian NLL in seconds; absent for point-only models.
  std::optional<double> nll_test;
  std::optional<double> coverage_68;
  std::optional<double> coverage_95;
  std::size_t n_samples = 0;
  std::size_t n_scenes = 0;
  std::size_t n_rank_scenes = 0;
  std::size_t mape_excluded = 0;
  std::size_t tie_scenes = 0;
};

EvalReport evaluate(std::span<const ScenePrediction> scenes, std::string model_name);

/// JSON document with the model report, the optional baseline and, when a
/// baseline is present, the relative improvement of every metric.
std::string report_json(const EvalReport& model, const EvalReport* baseline = nullptr);
/// Aligned plain-text table, one row per model plus an improvement row.
std::string report_table(const EvalReport& model, const EvalReport* baseline = nullptr);

}  // namespace ltp::eval
