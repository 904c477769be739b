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
#include <vector>

#include "ltp/geo/scene.hpp"
#include "ltp/model/config.hpp"
#include "ltp/model/encoder.hpp"

namespace ltp::model {
inline namespace LTP_PRECISION_NS {

/// Lower bound added to the softplus standard deviation.
inline constexpr double kSigmaFloor = 1e-6;

struct LinearVars {
  Var weight;  // [in x out]
  Var bias;    // [out]
};

/// Per-agent Gaussian parameters in standardized target units, [N x 1] each.
struct GaussianOutput {
  Var mean;
  Var sigma;
};

/// Affine stack with GELU between layers; the last layer emits raw (m, s).
GaussianOutput decode(const Var& agent_tokens, std::span<const LinearVars> layers,
                      SigmaParam sigma = SigmaParam::Softplus);

/// Both terms of the per-agent negative log-likelihood, averaged over
/// valid agents. total == penalty + error.
struct NllTerms {
  Var penalty;  // 1/2 log(2 pi sigma^2)
  Var error;    // (y - mu)^2 / (2 sigma^2)
  Var total;
};

NllTerms nll_loss(const GaussianOutput& pred, std::span<const double> y_std,
                  const PaddingMask& pad);

struct GaussianPrediction {
  double mu_std = 0.0;
  double sigma_std = 1.0;
  double mu_s = 0.0;
  double sigma_s = 1.0;
};

std::vector<GaussianPrediction> to_predictions(const GaussianOutput& out,
                                               const geo::NormStats& stats);

/// Remaining time to landing in seconds.
inline double point_prediction(const GaussianPrediction& p) { return p.mu_s; }
inline double point_prediction(double mu_std, const geo::NormStats& stats) {
  return stats.denormalize_target(mu_std);
}

}  // namespace LTP_PRECISION_NS
}  // namespace ltp::model
