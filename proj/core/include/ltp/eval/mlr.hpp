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

#include <span>
#include <string>
#include <vector>

#include "ltp/geo/scene.hpp"

namespace ltp::eval {

/// Single-agent linear baseline: standardized flattened window (T x 3
/// values, time-major) to standardized remaining time.
class MlrModel {
 public:
  MlrModel() = default;
  MlrModel(std::vector<double> weights, double bias);

  /// Least squares with a small ridge on the weights (the bias is not
  /// penalized). Needs more samples than features.
  static MlrModel fit(std::span<const std::vector<double>> features, std::span<const double> y,
                      double ridge = 1e-8);
  /// One sample per agent of every training scene.
  static MlrModel fit(std::span<const geo::NormalizedScene> train, double ridge = 1e-8);

  double predict_std(std::span<const double> features) const;
  /// Remaining time in seconds for every agent of the scene.
  std::vector<double> predict(const geo::NormalizedScene& scene,
                              const geo::NormStats& stats) const;

  const std::vector<double>& weights() const { return weights_; }
  double bias() const { return bias_; }

  std::string to_json() const;
  static MlrModel from_json(const std::string& text);

 private:
  std::vector<double> weights_;
  double bias_ = 0.0;
};

}  // namespace ltp::eval
