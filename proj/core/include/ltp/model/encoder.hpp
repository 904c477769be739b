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
#include <span>
#include <string>
#include <vector>

#include "ltp/model/config.hpp"
#include "ltp/numerics/ops.hpp"

namespace ltp {
class Rng;
}

namespace ltp::model {
inline namespace LTP_PRECISION_NS {

using num::Tensor;
using num::Var;

/// Block-diagonal [(N*3) x (N*3)] mask: token m may attend to token n iff
/// both belong to the same aircraft.
class MultivariateMask {
 public:
  explicit MultivariateMask(int agents = 1);

  int agents() const { return agents_; }
  int size() const { return 3 * agents_; }
  bool allowed(int m, int n) const { return flags_[static_cast<std::size_t>(m) * size() + n] != 0; }
  std::size_t allowed_count() const;
  std::span<const std::uint8_t> flags() const { return flags_; }

 private:
  int agents_;
  std::vector<std::uint8_t> flags_;
};

MultivariateMask build_multivariate_mask(int agents);

/// Validity of agent slots in a padded scene. Padded slots never act as
/// attention keys and never enter the loss.
struct PaddingMask {
  std::vector<std::uint8_t> valid;

  static PaddingMask all_valid(int agents) {
    return PaddingMask{std::vector<std::uint8_t>(static_cast<std::size_t>(agents), 1)};
  }
  int agents() const { return static_cast<int>(valid.size()); }
  int valid_count() const;
};

/// Head-averaged agent-to-agent attention of one encoder layer.
struct AttentionRecord {
  std::string scene_id;
  int layer = 1;  // 1-based
  std::vector<std::string> callsigns;
  std::vector<std::vector<double>> scores;
};

/// Projection weights of one multi-head attention block. `wo`/`bo` are
/// unset when output projections are disabled.
struct AttentionVars {
  Var wq, bq, wk, bk, wv, bv, wo, bo;
};

struct AttentionOutput {
  Var out;
  /// Softmax weights averaged over heads, [rows x rows].
  Tensor scores;
};

/// Scaled dot-product multi-head attention over the rows of x. `allowed`
/// holds one flag per (query, key) pair; empty means no masking.
AttentionOutput multi_head_attention(const Var& x, const AttentionVars& w, int heads,
                                     std::span<const std::uint8_t> allowed);

Var masked_multivariate_attention(const Var& c, const AttentionVars& w, int heads,
                                  const MultivariateMask& mask, const PaddingMask& pad);

/// [(N*3) x D] -> [N x 3D].
Var concat_agent_tokens(const Var& c_st);
/// [N x 3D] -> [(N*3) x D].
Var split_agent_tokens(const Var& c_a);

AttentionOutput agent_attention(const Var& c_a, const AttentionVars& w, int heads,
                                const PaddingMask& pad);

struct EncoderLayerVars {
  AttentionVars mma;
  AttentionVars aa;
  Var ln1_gamma, ln1_beta;  // variate shape, D
  Var ln2_gamma, ln2_beta;  // agent shape, 3D
  Var ln3_gamma, ln3_beta;  // after FFN, D
  Var ffn_w1, ffn_b1, ffn_w2, ffn_b2;
};

struct LayerOutput {
  Var out;
  Tensor agent_scores;
};

/// One encoder layer. Dropout is active only when `dropout_rng` is non-null.
LayerOutput encoder_layer(const Var& c, const MultivariateMask& mask, const PaddingMask& pad,
                          const EncoderLayerVars& w, const ModelConfig& cfg, Rng* dropout_rng);

struct EncodeOutput {
  Var tokens;
  /// One [N x N] score matrix per layer, in layer order.
  std::vector<Tensor> agent_scores;
};

EncodeOutput encode(const Var& tokens, const PaddingMask& pad,
                    std::span<const EncoderLayerVars> layers, const ModelConfig& cfg,
                    Rng* dropout_rng);

}  // namespace LTP_PRECISION_NS
}  // namespace ltp::model
