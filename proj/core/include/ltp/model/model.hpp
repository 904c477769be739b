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

#include <cstdint>
#include <vector>

#include "ltp/geo/scene.hpp"
#include "ltp/model/config.hpp"
#include "ltp/model/embed.hpp"
#include "ltp/model/encoder.hpp"
#include "ltp/model/head.hpp"
#include "ltp/numerics/parameter.hpp"

namespace ltp {
class Rng;
}

namespace ltp::model {
inline namespace LTP_PRECISION_NS {

/// Network input for one scene, optionally padded to a fixed slot count.
struct SceneInput {
  Tensor x;  // [N x T x 3], standardized
  std::vector<geo::Wtc> wtcs;
  PaddingMask pad;
  std::vector<double> y;  // standardized targets, 0 for padded slots
};

/// `pad_to` (when larger than the agent count) appends zero-filled slots.
SceneInput make_input(const geo::NormalizedScene& scene, int pad_to = 0);

struct ForwardResult {
  GaussianOutput gauss;
  std::vector<Tensor> agent_scores;  // one per encoder layer
};

/// Multi-agent landing-time model: variate embedding, stacked encoder and
/// Gaussian decoder.
class LandingTimeModel {
 public:
  /// Parameters are initialized deterministically from `seed`.
  LandingTimeModel(ModelConfig cfg, std::uint64_t seed);

  const ModelConfig& config() const { return cfg_; }
  num::ParameterStore& params() { return params_; }
  const num::ParameterStore& params() const { return params_; }

  /// Records the forward pass on the binder's tape. Dropout is active only
  /// when `dropout_rng` is non-null.
  ForwardResult forward(num::ParamBinder& bind, const SceneInput& in, Rng* dropout_rng) const;

  /// Evaluation-mode predictions in seconds, one per agent.
  std::vector<GaussianPrediction> predict(const geo::NormalizedScene& scene,
                                          const geo::NormStats& stats) const;

  /// Sets every output projection of attention and FFN blocks to zero.
  void zero_residual_branches();

 private:
  struct AttentionParams {
    const num::Parameter *wq, *bq, *wk, *bk, *wv, *bv, *wo = nullptr, *bo = nullptr;
  };
  struct LayerParams {
    AttentionParams mma, aa;
    const num::Parameter *ln1_g, *ln1_b, *ln2_g, *ln2_b, *ln3_g, *ln3_b;
    const num::Parameter *w1, *b1, *w2, *b2;
  };
  struct LinearParams {
    const num::Parameter *weight, *bias;
  };

  ModelConfig cfg_;
  num::ParameterStore params_;
  const num::Parameter* embed_w_ = nullptr;
  const num::Parameter* embed_b_ = nullptr;
  const num::Parameter* type_table_ = nullptr;
  std::vector<LayerParams> layers_;
  std::vector<LinearParams> gpd_;
};

}  // namespace LTP_PRECISION_NS
}  // namespace ltp::model
