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


#include "ltp/model/model.hpp"

#include <cmath>
#include <string>

#include "ltp/error.hpp"
#include "ltp/rng.hpp"

namespace ltp::model {
inline namespace LTP_PRECISION_NS {

using num::Parameter;
using num::Real;

namespace {

Tensor uniform_init(Rng& rng, num::Shape shape, int fan_in) {
  const double bound = 1.0 / std::sqrt(static_cast<double>(fan_in));
  Tensor t(std::move(shape));
  for (Real& v : t.data()) v = static_cast<Real>(rng.uniform(-bound, bound));
  return t;
}

bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

}  // namespace

SceneInput make_input(const geo::NormalizedScene& scene, int pad_to) {
  const int n = scene.agents;
  const int slots = std::max(n, pad_to);
  const int t = scene.steps;
  if (scene.x.size() != static_cast<std::size_t>(n) * t * 3 ||
      scene.wtcs.size() != static_cast<std::size_t>(n)) {
    throw DimensionError("scene " + scene.scene_id + ": inconsistent array sizes");
  }
  SceneInput in;
  in.x = Tensor({slots, t, 3});
  for (std::size_t i = 0; i < scene.x.size(); ++i) in.x[i] = static_cast<Real>(scene.x[i]);
  in.wtcs = scene.wtcs;
  in.wtcs.resize(slots, geo::Wtc::Medium);
  in.pad.valid.assign(slots, 0);
  std::fill(in.pad.valid.begin(), in.pad.valid.begin() + n, 1);
  in.y = scene.y;
  in.y.resize(slots, 0.0);
  return in;
}

LandingTimeModel::LandingTimeModel(ModelConfig cfg, std::uint64_t seed) : cfg_(std::move(cfg)) {
  validate(cfg_);
  Rng rng = Rng::substream(seed, "init");
  const int t = cfg_.steps;
  const int d = cfg_.model_dim;
  const int d3 = 3 * d;

  auto linear = [&](const std::string& name, int in, int out) {
    const Parameter* w = &params_.add(name + ".weight", uniform_init(rng, {in, out}, in));
    const Parameter* b = &params_.add(name + ".bias", uniform_init(rng, {out}, in));
    return std::pair{w, b};
  };
  auto attention = [&](const std::string& name, int width) {
    AttentionParams a{};
    std::tie(a.wq, a.bq) = linear(name + ".q", width, width);
    std::tie(a.wk, a.bk) = linear(name + ".k", width, width);
    std::tie(a.wv, a.bv) = linear(name + ".v", width, width);
    if (cfg_.output_projections) std::tie(a.wo, a.bo) = linear(name + ".o", width, width);
    return a;
  };
  auto norm = [&](const std::string& name, int width) {
    const Parameter* g = &params_.add(name + ".gamma", Tensor({width}, Real(1)));
    const Parameter* b = &params_.add(name + ".beta", Tensor({width}, Real(0)));
    return std::pair{g, b};
  };

  std::tie(embed_w_, embed_b_) = linear("embed", t, d);
  {
    Tensor table({geo::kWtcCount, d});
    for (Real& v : table.data()) v = static_cast<Real>(rng.normal());
    type_table_ = &params_.add("embed.type", std::move(table));
  }

  for (int l = 0; l < cfg_.layers; ++l) {
    const std::string p = "encoder." + std::to_string(l);
    LayerParams lp{};
    lp.mma = attention(p + ".mma", d);
    std::tie(lp.ln1_g, lp.ln1_b) = norm(p + ".ln1", d);
    lp.aa = attention(p + ".aa", d3);
    std::tie(lp.ln2_g, lp.ln2_b) = norm(p + ".ln2", d3);
    std::tie(lp.w1, lp.b1) = linear(p + ".ffn1", d, cfg_.ffn_dim);
    std::tie(lp.w2, lp.b2) = linear(p + ".ffn2", cfg_.ffn_dim, d);
    std::tie(lp.ln3_g, lp.ln3_b) = norm(p + ".ln3", d);
    layers_.push_back(lp);
  }

  int in = d3;
  std::vector<int> widths = cfg_.gpd_hidden;
  widths.push_back(2);
  for (std::size_t k = 0; k < widths.size(); ++k) {
    auto [w, b] = linear("gpd." + std::to_string(k), in, widths[k]);
    gpd_.push_back({w, b});
    in = widths[k];
  }
}

void LandingTimeModel::zero_residual_branches() {
  for (Parameter& p : params_) {
    const bool out_proj = ends_with(p.name, ".o.weight") || ends_with(p.name, ".o.bias");
    const bool ffn_out = ends_with(p.name, ".ffn2.weight") || ends_with(p.name, ".ffn2.bias");
    if (out_proj || ffn_out) p.value.fill(Real(0));
  }
}

ForwardResult LandingTimeModel::forward(num::ParamBinder& bind, const SceneInput& in,
                                        Rng* dropout_rng) const {
  num::Tape& tape = bind.tape();
  auto attn = [&](const AttentionParams& a) {
    AttentionVars v{bind(*a.wq), bind(*a.bq), bind(*a.wk), bind(*a.bk),
                    bind(*a.wv), bind(*a.bv), {},          {}};
    if (a.wo) {
      v.wo = bind(*a.wo);
      v.bo = bind(*a.bo);
    }
    return v;
  };

  Var x_bar = tape.constant(invert_scene(in.x, cfg_.steps));
  Var tokens = scene_embedding(x_bar, bind(*embed_w_), bind(*embed_b_));
  tokens = add_type_embedding(tokens, in.wtcs, bind(*type_table_));
  if (dropout_rng) tokens = num::dropout(tokens, cfg_.dropout, *dropout_rng);

  std::vector<EncoderLayerVars> layer_vars;
  layer_vars.reserve(layers_.size());
  for (const LayerParams& lp : layers_) {
    EncoderLayerVars v;
    v.mma = attn(lp.mma);
    v.aa = attn(lp.aa);
    v.ln1_gamma = bind(*lp.ln1_g);
    v.ln1_beta = bind(*lp.ln1_b);
    v.ln2_gamma = bind(*lp.ln2_g);
    v.ln2_beta = bind(*lp.ln2_b);
    v.ln3_gamma = bind(*lp.ln3_g);
    v.ln3_beta = bind(*lp.ln3_b);
    v.ffn_w1 = bind(*lp.w1);
    v.ffn_b1 = bind(*lp.b1);
    v.ffn_w2 = bind(*lp.w2);
    v.ffn_b2 = bind(*lp.b2);
    layer_vars.push_back(v);
  }
  EncodeOutput enc = encode(tokens, in.pad, layer_vars, cfg_, dropout_rng);

  std::vector<LinearVars> head;
  head.reserve(gpd_.size());
  for (const LinearParams& lp : gpd_) head.push_back({bind(*lp.weight), bind(*lp.bias)});
  GaussianOutput g = decode(concat_agent_tokens(enc.tokens), head, cfg_.sigma);
  return {g, std::move(enc.agent_scores)};
}

std::vector<GaussianPrediction> LandingTimeModel::predict(const geo::NormalizedScene& scene,
                                                          const geo::NormStats& stats) const {
  num::Tape tape;
  num::ParamBinder bind(tape);
  ForwardResult r = forward(bind, make_input(scene), nullptr);
  return to_predictions(r.gauss, stats);
}

}  // namespace LTP_PRECISION_NS
}  // namespace ltp::model
