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


#include "ltp/model/encoder.hpp"

#include <algorithm>
#include <cmath>

#include "ltp/error.hpp"

namespace ltp::model {
inline namespace LTP_PRECISION_NS {

using num::Real;

MultivariateMask::MultivariateMask(int agents) : agents_(agents) {
  if (agents < 1) throw ValidationError("multivariate mask needs at least one aircraft");
  const int n = size();
  flags_.assign(static_cast<std::size_t>(n) * n, 0);
  for (int m = 0; m < n; ++m)
    for (int k = 0; k < n; ++k) flags_[static_cast<std::size_t>(m) * n + k] = (m / 3 == k / 3);
}

std::size_t MultivariateMask::allowed_count() const {
  return static_cast<std::size_t>(std::count(flags_.begin(), flags_.end(), std::uint8_t{1}));
}

MultivariateMask build_multivariate_mask(int agents) { return MultivariateMask(agents); }

int PaddingMask::valid_count() const {
  return static_cast<int>(std::count_if(valid.begin(), valid.end(), [](auto v) { return v != 0; }));
}

namespace {

Var project(const Var& x, const Var& w, const Var& b) {
  return num::add_bias(num::matmul(x, w), b);
}

}  // namespace

AttentionOutput multi_head_attention(const Var& x, const AttentionVars& w, int heads,
                                     std::span<const std::uint8_t> allowed) {
  const auto& xs = x.shape();
  if (xs.size() != 2) throw DimensionError("attention input must be 2-D, got " + num::shape_str(xs));
  const int rows = xs[0];
  const int dim = xs[1];
  if (heads < 1 || dim % heads != 0) {
    throw DimensionError("attention width " + std::to_string(dim) + " not divisible by " +
                         std::to_string(heads) + " heads");
  }
  if (!allowed.empty() && allowed.size() != static_cast<std::size_t>(rows) * rows) {
    throw DimensionError("attention mask has " + std::to_string(allowed.size()) +
                         " entries for " + std::to_string(rows) + " rows");
  }
  const int dh = dim / heads;
  const Real inv_sqrt = Real(1) / std::sqrt(static_cast<Real>(dh));

  Var q = project(x, w.wq, w.bq);
  Var k = project(x, w.wk, w.bk);
  Var v = project(x, w.wv, w.bv);

  Tensor avg({rows, rows});
  std::vector<Var> outs;
  outs.reserve(heads);
  for (int h = 0; h < heads; ++h) {
    const int c0 = h * dh;
    Var qh = heads == 1 ? q : num::slice_cols(q, c0, c0 + dh);
    Var kh = heads == 1 ? k : num::slice_cols(k, c0, c0 + dh);
    Var vh = heads == 1 ? v : num::slice_cols(v, c0, c0 + dh);
    Var logits = num::scale(num::matmul_nt(qh, kh), inv_sqrt);
    if (!allowed.empty()) logits = num::mask_fill(logits, allowed);
    Var a = num::softmax_rows(logits);
    avg.add_(a.value());
    outs.push_back(num::matmul(a, vh));
  }
  for (Real& s : avg.data()) s /= static_cast<Real>(heads);

  Var o = heads == 1 ? outs.front() : num::concat_cols(outs);
  if (w.wo) o = project(o, w.wo, w.bo);
  return {o, std::move(avg)};
}

Var masked_multivariate_attention(const Var& c, const AttentionVars& w, int heads,
                                  const MultivariateMask& mask, const PaddingMask& pad) {
  if (c.shape().size() != 2 || c.shape()[0] != mask.size()) {
    throw DimensionError("multivariate attention: tokens " + num::shape_str(c.shape()) +
                         " vs mask for " + std::to_string(mask.agents()) + " aircraft");
  }
  if (pad.agents() != mask.agents()) {
    throw DimensionError("multivariate attention: padding mask has " +
                         std::to_string(pad.agents()) + " slots, mask has " +
                         std::to_string(mask.agents()));
  }
  // Padding needs no extra handling here: every block only sees itself.
  return multi_head_attention(c, w, heads, mask.flags()).out;
}

Var concat_agent_tokens(const Var& c_st) {
  const auto& s = c_st.shape();
  if (s.size() != 2 || s[0] % 3 != 0) {
    throw DimensionError("concat_agent_tokens: row count of " + num::shape_str(s) +
                         " not divisible by 3");
  }
  return num::reshape(c_st, {s[0] / 3, 3 * s[1]});
}

Var split_agent_tokens(const Var& c_a) {
  const auto& s = c_a.shape();
  if (s.size() != 2 || s[1] % 3 != 0) {
    throw DimensionError("split_agent_tokens: width of " + num::shape_str(s) +
                         " not divisible by 3");
  }
  return num::reshape(c_a, {s[0] * 3, s[1] / 3});
}

AttentionOutput agent_attention(const Var& c_a, const AttentionVars& w, int heads,
                                const PaddingMask& pad) {
  const auto& s = c_a.shape();
  if (s.size() != 2 || s[0] != pad.agents()) {
    throw DimensionError("agent attention: tokens " + num::shape_str(s) + " vs " +
                         std::to_string(pad.agents()) + " slots");
  }
  if (pad.valid_count() == 0) throw ValidationError("agent attention: scene has no valid agent");
  const int n = s[0];
  std::vector<std::uint8_t> allowed;
  if (pad.valid_count() != n) {
    allowed.resize(static_cast<std::size_t>(n) * n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) allowed[static_cast<std::size_t>(i) * n + j] = pad.valid[j];
  }
  return multi_head_attention(c_a, w, heads, allowed);
}

namespace {

Var maybe_dropout(const Var& x, double rate, Rng* rng) {
  return rng ? num::dropout(x, rate, *rng) : x;
}

}  // namespace

LayerOutput encoder_layer(const Var& c, const MultivariateMask& mask, const PaddingMask& pad,
                          const EncoderLayerVars& w, const ModelConfig& cfg, Rng* dropout_rng) {
  const double p = cfg.dropout;
  Var a = masked_multivariate_attention(c, w.mma, cfg.heads_mma, mask, pad);
  Var c1 = num::layer_norm(c + maybe_dropout(a, p, dropout_rng), w.ln1_gamma, w.ln1_beta);

  Var ca = concat_agent_tokens(c1);
  AttentionOutput agent = agent_attention(ca, w.aa, cfg.heads_aa, pad);
  Var ca2 = num::layer_norm(ca + maybe_dropout(agent.out, p, dropout_rng), w.ln2_gamma,
                            w.ln2_beta);
  Var c2 = split_agent_tokens(ca2);

  Var hidden = num::gelu(num::add_bias(num::matmul(c2, w.ffn_w1), w.ffn_b1));
  Var f = num::add_bias(num::matmul(hidden, w.ffn_w2), w.ffn_b2);
  Var c3 = num::layer_norm(c2 + maybe_dropout(f, p, dropout_rng), w.ln3_gamma, w.ln3_beta);
  return {c3, std::move(agent.scores)};
}

EncodeOutput encode(const Var& tokens, const PaddingMask& pad,
                    std::span<const EncoderLayerVars> layers, const ModelConfig& cfg,
                    Rng* dropout_rng) {
  if (layers.empty()) throw ValidationError("encode: at least one layer required");
  const MultivariateMask mask = build_multivariate_mask(pad.agents());
  EncodeOutput out{tokens, {}};
  for (const auto& w : layers) {
    LayerOutput lo = encoder_layer(out.tokens, mask, pad, w, cfg, dropout_rng);
    out.tokens = lo.out;
    out.agent_scores.push_back(std::move(lo.agent_scores));
  }
  return out;
}

}  // namespace LTP_PRECISION_NS
}  // namespace ltp::model
