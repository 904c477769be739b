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


#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <numeric>

#include "ltp/error.hpp"
#include "ltp/model/model.hpp"
#include "ltp/rng.hpp"
#include "test_support.hpp"

namespace ltp::model {
namespace {

using num::ParamBinder;
using num::Real;
using num::Tape;

Tensor random_tensor(Rng& r, num::Shape shape, double scale = 1.0) {
  Tensor t(std::move(shape));
  for (auto& v : t.data()) v = static_cast<Real>(scale * r.normal());
  return t;
}

AttentionVars random_attention(Tape& tape, Rng& r, int d, bool out_proj = true) {
  const double s = 1.0 / std::sqrt(d);
  AttentionVars w;
  w.wq = tape.leaf(random_tensor(r, {d, d}, s));
  w.bq = tape.leaf(random_tensor(r, {d}, s));
  w.wk = tape.leaf(random_tensor(r, {d, d}, s));
  w.bk = tape.leaf(random_tensor(r, {d}, s));
  w.wv = tape.leaf(random_tensor(r, {d, d}, s));
  w.bv = tape.leaf(random_tensor(r, {d}, s));
  if (out_proj) {
    w.wo = tape.leaf(random_tensor(r, {d, d}, s));
    w.bo = tape.leaf(random_tensor(r, {d}, s));
  }
  return w;
}

EncoderLayerVars random_layer(Tape& tape, Rng& r, const ModelConfig& cfg) {
  const int d = cfg.model_dim;
  EncoderLayerVars w;
  w.mma = random_attention(tape, r, d);
  w.aa = random_attention(tape, r, 3 * d);
  w.ln1_gamma = tape.leaf(Tensor({d}, 1));
  w.ln1_beta = tape.leaf(Tensor({d}, 0));
  w.ln2_gamma = tape.leaf(Tensor({3 * d}, 1));
  w.ln2_beta = tape.leaf(Tensor({3 * d}, 0));
  w.ln3_gamma = tape.leaf(Tensor({d}, 1));
  w.ln3_beta = tape.leaf(Tensor({d}, 0));
  w.ffn_w1 = tape.leaf(random_tensor(r, {d, cfg.ffn_dim}, 1.0 / std::sqrt(d)));
  w.ffn_b1 = tape.leaf(random_tensor(r, {cfg.ffn_dim}, 0.1));
  w.ffn_w2 = tape.leaf(random_tensor(r, {cfg.ffn_dim, d}, 1.0 / std::sqrt(cfg.ffn_dim)));
  w.ffn_b2 = tape.leaf(random_tensor(r, {d}, 0.1));
  return w;
}

ModelConfig small_config() {
  ModelConfig c;
  c.model_dim = 16;
  c.heads_mma = 2;
  c.heads_aa = 2;
  c.ffn_dim = 32;
  c.gpd_hidden = {24, 12, 6};
  return c;
}

// ---------------------------------------------------------------- embed

TEST(Embed, InvertLayout) {
  Rng r(1);
  const Tensor x = random_tensor(r, {3, 20, 3});
  const Tensor xb = invert_scene(x);
  ASSERT_EQ(xb.shape(), (num::Shape{9, 20}));
  for (int i = 0; i < 3; ++i)
    for (int t = 0; t < 20; ++t)
      for (int k = 0; k < 3; ++k) EXPECT_EQ(xb.at(3 * i + k, t), x[(i * 20 + t) * 3 + k]);
  EXPECT_EQ(uninvert_scene(xb), x);
}

TEST(Embed, SingleAircraftRowZeroIsLatitude) {
  Rng r(2);
  const Tensor x = random_tensor(r, {1, 20, 3});
  const Tensor xb = invert_scene(x);
  for (int t = 0; t < 20; ++t) EXPECT_EQ(xb.at(0, t), x[t * 3]);
}

TEST(Embed, InvertRejectsWrongSteps) {
  EXPECT_THROW(invert_scene(Tensor({2, 19, 3})), DimensionError);
  EXPECT_THROW(invert_scene(Tensor({2, 20, 4})), DimensionError);
}

TEST(Embed, RoundTripOnRandomShapes) {
  Rng r(3);
  for (int n = 1; n <= 7; ++n) {
    const Tensor x = random_tensor(r, {n, 20, 3});
    EXPECT_EQ(uninvert_scene(invert_scene(x)), x);
  }
}

TEST(Embed, LinearEmbedding) {
  Rng r(4);
  Tape tape;
  const Var xb = tape.constant(random_tensor(r, {9, 20}));
  const Var zero = scene_embedding(xb, tape.constant(Tensor({20, 256})), tape.constant(Tensor({256})));
  ASSERT_EQ(zero.shape(), (num::Shape{9, 256}));
  for (Real v : zero.value().data()) EXPECT_EQ(v, 0);

  // One nonzero weight column: that token column is the weighted time sum.
  Tensor w({20, 4});
  for (int t = 0; t < 20; ++t) w.at(t, 2) = static_cast<Real>(0.1 * (t + 1));
  const Var out = scene_embedding(xb, tape.constant(w), tape.constant(Tensor::vector({0, 0, 0.5, 0})));
  for (int m = 0; m < 9; ++m) {
    double acc = 0.5;
    for (int t = 0; t < 20; ++t) acc += xb.value().at(m, t) * 0.1 * (t + 1);
    EXPECT_NEAR(out.value().at(m, 2), acc, 1e-5);
    EXPECT_EQ(out.value().at(m, 0), 0);
  }
  EXPECT_THROW(scene_embedding(xb, tape.constant(Tensor({19, 4})), tape.constant(Tensor({4}))),
               DimensionError);
}

TEST(Embed, TypeEmbedding) {
  Rng r(5);
  Tape tape;
  const Tensor tokens = random_tensor(r, {9, 8});
  const Tensor table = random_tensor(r, {4, 8});
  const std::vector<geo::Wtc> wtcs{geo::Wtc::Heavy, geo::Wtc::Light, geo::Wtc::Heavy};

  const Var same = add_type_embedding(tape.constant(tokens), wtcs, tape.constant(Tensor({4, 8})));
  EXPECT_EQ(same.value(), tokens);

  const Var out = add_type_embedding(tape.constant(tokens), wtcs, tape.constant(table));
  for (int i = 0; i < 3; ++i)
    for (int k = 0; k < 3; ++k)
      for (int c = 0; c < 8; ++c) {
        const int row = static_cast<int>(wtcs[i]);
        EXPECT_NEAR(out.value().at(3 * i + k, c) - tokens.at(3 * i + k, c), table.at(row, c), 1e-6);
      }

  const std::vector<geo::Wtc> distinct{geo::Wtc::Super, geo::Wtc::Medium};
  const Var z = add_type_embedding(tape.constant(Tensor({6, 8})), distinct, tape.constant(table));
  for (int c = 0; c < 8; ++c) {
    EXPECT_EQ(z.value().at(0, c), table.at(3, c));
    EXPECT_EQ(z.value().at(5, c), table.at(1, c));
  }

  const std::vector<geo::Wtc> bad{static_cast<geo::Wtc>(7), geo::Wtc::Light, geo::Wtc::Light};
  EXPECT_THROW(add_type_embedding(tape.constant(tokens), bad, tape.constant(table)), ValidationError);
  const std::vector<geo::Wtc> short_list{geo::Wtc::Light};
  EXPECT_ANY_THROW(add_type_embedding(tape.constant(tokens), short_list, tape.constant(table)));
}

// -------------------------------------------------------------- encoder

TEST(Mask, BlockStructure) {
  const auto m1 = build_multivariate_mask(1);
  EXPECT_EQ(m1.allowed_count(), 9u);
  const auto m2 = build_multivariate_mask(2);
  for (int a = 0; a < 6; ++a)
    for (int b = 0; b < 6; ++b) {
      EXPECT_EQ(m2.allowed(a, b), a / 3 == b / 3);
      EXPECT_EQ(m2.allowed(a, b), m2.allowed(b, a));
    }
  Rng r(6);
  for (int t = 0; t < 20; ++t) {
    const int n = 1 + static_cast<int>(r.below(30));
    EXPECT_EQ(build_multivariate_mask(n).allowed_count(), 9u * n);
  }
}

TEST(Attention, HandComputedSingleHead) {
  Tape tape;
  const Tensor x = Tensor::matrix({{1, 0}, {0, 1}, {1, 1}});
  AttentionVars w;
  w.wq = tape.constant(Tensor::matrix({{1, 0}, {0, 2}}));
  w.bq = tape.constant(Tensor::vector({0, 0.5}));
  w.wk = tape.constant(Tensor::matrix({{0.5, 0}, {1, 1}}));
  w.bk = tape.constant(Tensor::vector({0, 0}));
  w.wv = tape.constant(Tensor::matrix({{1, 2}, {3, 4}}));
  w.bv = tape.constant(Tensor::vector({0.1, 0}));
  w.wo = tape.constant(Tensor::matrix({{1, 0}, {0, -1}}));
  w.bo = tape.constant(Tensor::vector({0, 1}));
  const Var out = masked_multivariate_attention(tape.constant(x), w, 1, build_multivariate_mask(1),
                                                PaddingMask::all_valid(1));

  // Scalar oracle.
  auto lin = [](const double in[2], const double m[2][2], const double b[2], double o[2]) {
    for (int j = 0; j < 2; ++j) o[j] = in[0] * m[0][j] + in[1] * m[1][j] + b[j];
  };
  const double X[3][2] = {{1, 0}, {0, 1}, {1, 1}};
  const double Wq[2][2] = {{1, 0}, {0, 2}}, Wk[2][2] = {{0.5, 0}, {1, 1}},
               Wv[2][2] = {{1, 2}, {3, 4}}, Wo[2][2] = {{1, 0}, {0, -1}};
  const double bq[2] = {0, 0.5}, bk[2] = {0, 0}, bv[2] = {0.1, 0}, bo[2] = {0, 1};
  double Q[3][2], K[3][2], V[3][2];
  for (int i = 0; i < 3; ++i) {
    lin(X[i], Wq, bq, Q[i]);
    lin(X[i], Wk, bk, K[i]);
    lin(X[i], Wv, bv, V[i]);
  }
  for (int i = 0; i < 3; ++i) {
    double s[3], z = 0, mx = -1e300;
    for (int j = 0; j < 3; ++j) {
      s[j] = (Q[i][0] * K[j][0] + Q[i][1] * K[j][1]) / std::sqrt(2.0);
      mx = std::max(mx, s[j]);
    }
    for (int j = 0; j < 3; ++j) z += s[j] = std::exp(s[j] - mx);
    double ctx[2] = {0, 0};
    for (int j = 0; j < 3; ++j)
      for (int c = 0; c < 2; ++c) ctx[c] += s[j] / z * V[j][c];
    double o[2];
    lin(ctx, Wo, bo, o);
    EXPECT_NEAR(out.value().at(i, 0), o[0], 1e-5);
    EXPECT_NEAR(out.value().at(i, 1), o[1], 1e-5);
  }
}

TEST(Attention, SingleAircraftEqualsUnmasked) {
  Rng r(7);
  Tape tape;
  const Var x = tape.constant(random_tensor(r, {3, 8}));
  const auto w = random_attention(tape, r, 8);
  const Var a = masked_multivariate_attention(x, w, 2, build_multivariate_mask(1), PaddingMask::all_valid(1));
  const auto b = multi_head_attention(x, w, 2, {});
  EXPECT_EQ(a.value(), b.out.value());
}

TEST(Attention, CrossAircraftIsolation) {
  Rng r(8);
  Tensor x = random_tensor(r, {6, 8});
  Tape tape;
  const auto w = random_attention(tape, r, 8);
  const auto mask = build_multivariate_mask(2);
  const auto pad = PaddingMask::all_valid(2);
  const Tensor before = masked_multivariate_attention(tape.constant(x), w, 2, mask, pad).value();
  for (int m = 3; m < 6; ++m)
    for (int c = 0; c < 8; ++c) x.at(m, c) += static_cast<Real>(r.normal() * 10);
  const Tensor after = masked_multivariate_attention(tape.constant(x), w, 2, mask, pad).value();
  for (int m = 0; m < 3; ++m)
    for (int c = 0; c < 8; ++c) EXPECT_EQ(before.at(m, c), after.at(m, c));

}

TEST(Attention, CrossGradientsAreZero) {
  Rng r(9);
  Tape tape;
  const auto w = random_attention(tape, r, 8);
  const Var x = tape.leaf(random_tensor(r, {9, 8}));
  const Var out = masked_multivariate_attention(x, w, 2, build_multivariate_mask(3), PaddingMask::all_valid(3));
  // Loss over aircraft 1's rows only.
  Tensor sel({9, 8});
  for (int m = 3; m < 6; ++m)
    for (int c = 0; c < 8; ++c) sel.at(m, c) = static_cast<Real>(r.normal());
  tape.backward(sum(mul(out, tape.constant(sel))));
  const Tensor& g = x.grad();
  for (int m = 0; m < 9; ++m)
    for (int c = 0; c < 8; ++c) {
      if (m / 3 == 1) continue;
      EXPECT_EQ(g.at(m, c), 0) << m;
    }
  double own = 0;
  for (int m = 3; m < 6; ++m)
    for (int c = 0; c < 8; ++c) own += std::abs(g.at(m, c));
  EXPECT_GT(own, 0);
}

TEST(AgentTokens, ConcatSplit) {
  Rng r(10);
  Tape tape;
  const Tensor c = random_tensor(r, {12, 256});
  const Var a = concat_agent_tokens(tape.constant(c));
  ASSERT_EQ(a.shape(), (num::Shape{4, 768}));
  for (int k = 0; k < 256; ++k) {
    EXPECT_EQ(a.value().at(0, k), c.at(0, k));
    EXPECT_EQ(a.value().at(0, 256 + k), c.at(1, k));
    EXPECT_EQ(a.value().at(3, 512 + k), c.at(11, k));
  }
  EXPECT_EQ(split_agent_tokens(a).value(), c);
  EXPECT_THROW(concat_agent_tokens(tape.constant(Tensor({4, 8}))), DimensionError);
}

TEST(AgentAttention, ScoresProperties) {
  Rng r(11);
  Tape tape;
  const auto w = random_attention(tape, r, 12);

  const auto one = agent_attention(tape.constant(random_tensor(r, {1, 12})), w, 3, PaddingMask::all_valid(1));
  ASSERT_EQ(one.scores.shape(), (num::Shape{1, 1}));
  EXPECT_NEAR(one.scores.at(0, 0), 1.0, 1e-6);

  Tensor same({4, 12});
  const Tensor row = random_tensor(r, {12});
  for (int i = 0; i < 4; ++i)
    for (int c = 0; c < 12; ++c) same.at(i, c) = row[c];
  const auto uni = agent_attention(tape.constant(same), w, 3, PaddingMask::all_valid(4));
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) EXPECT_NEAR(uni.scores.at(i, j), 0.25, 1e-6);

  // Permutation on both axes.
  const Tensor x = random_tensor(r, {5, 12});
  const std::vector<int> perm{3, 0, 4, 1, 2};
  Tensor xp({5, 12});
  for (int i = 0; i < 5; ++i)
    for (int c = 0; c < 12; ++c) xp.at(i, c) = x.at(perm[i], c);
  const auto s = agent_attention(tape.constant(x), w, 3, PaddingMask::all_valid(5)).scores;
  const auto sp = agent_attention(tape.constant(xp), w, 3, PaddingMask::all_valid(5)).scores;
  for (int i = 0; i < 5; ++i) {
    double rowsum = 0;
    for (int j = 0; j < 5; ++j) {
      EXPECT_NEAR(sp.at(i, j), s.at(perm[i], perm[j]), 1e-6);
      EXPECT_GE(s.at(i, j), 0);
      rowsum += s.at(i, j);
    }
    EXPECT_NEAR(rowsum, 1.0, 1e-5);
  }
}

TEST(AgentAttention, PaddedKeysGetZeroWeight) {
  Rng r(12);
  Tape tape;
  const auto w = random_attention(tape, r, 12);
  const Tensor x = random_tensor(r, {4, 12});
  PaddingMask pad{{1, 1, 0, 1}};
  const auto out = agent_attention(tape.constant(x), w, 3, pad);
  for (int i = 0; i < 4; ++i) {
    if (!pad.valid[i]) continue;
    EXPECT_EQ(out.scores.at(i, 2), 0);
    EXPECT_NEAR(out.scores.at(i, 0) + out.scores.at(i, 1) + out.scores.at(i, 3), 1.0, 1e-5);
  }
}

TEST(EncoderLayer, ShapeContract) {
  Rng r(13);
  const ModelConfig cfg = small_config();
  for (int n : {1, 2, 5}) {
    Tape tape;
    const auto w = random_layer(tape, r, cfg);
    const Var c = tape.constant(random_tensor(r, {3 * n, cfg.model_dim}));
    const auto out = encoder_layer(c, build_multivariate_mask(n), PaddingMask::all_valid(n), w, cfg, nullptr);
    EXPECT_EQ(out.out.shape(), c.shape());
    EXPECT_EQ(out.agent_scores.shape(), (num::Shape{n, n}));
  }
}

TEST(EncoderLayer, ZeroResidualBranchesNormalizeOnly) {
  Rng r(14);
  const ModelConfig cfg = small_config();
  const int d = cfg.model_dim;
  Tape tape;
  auto w = random_layer(tape, r, cfg);
  w.mma.wo = tape.constant(Tensor({d, d}));
  w.mma.bo = tape.constant(Tensor({d}));
  w.aa.wo = tape.constant(Tensor({3 * d, 3 * d}));
  w.aa.bo = tape.constant(Tensor({3 * d}));
  w.ffn_w2 = tape.constant(Tensor({cfg.ffn_dim, d}));
  w.ffn_b2 = tape.constant(Tensor({d}));
  const Tensor x = random_tensor(r, {6, d}, 3.0);
  const auto out = encoder_layer(tape.constant(x), build_multivariate_mask(2), PaddingMask::all_valid(2), w, cfg, nullptr);
  for (int m = 0; m < 6; ++m) {
    double mu = 0, var = 0;
    for (int c = 0; c < d; ++c) mu += x.at(m, c);
    mu /= d;
    for (int c = 0; c < d; ++c) var += (x.at(m, c) - mu) * (x.at(m, c) - mu);
    var /= d;
    for (int c = 0; c < d; ++c)
      EXPECT_NEAR(out.out.value().at(m, c), (x.at(m, c) - mu) / std::sqrt(var + 1e-5), 1e-3);
  }
}

TEST(Encode, OneRecordPerLayerAndSingleLayerEquivalence) {
  Rng r(15);
  ModelConfig cfg = small_config();
  Tape tape;
  std::vector<EncoderLayerVars> layers;
  for (int l = 0; l < 3; ++l) layers.push_back(random_layer(tape, r, cfg));
  const Var c = tape.constant(random_tensor(r, {9, cfg.model_dim}));
  const auto pad = PaddingMask::all_valid(3);
  const auto enc = encode(c, pad, layers, cfg, nullptr);
  EXPECT_EQ(enc.agent_scores.size(), 3u);
  const auto again = encode(c, pad, layers, cfg, nullptr);
  EXPECT_EQ(enc.tokens.value(), again.tokens.value());

  const auto one = encode(c, pad, std::span(layers).first(1), cfg, nullptr);
  const auto direct = encoder_layer(c, build_multivariate_mask(3), pad, layers[0], cfg, nullptr);
  EXPECT_EQ(one.tokens.value(), direct.out.value());
  EXPECT_EQ(one.agent_scores[0], direct.agent_scores);
}

// ----------------------------------------------------------------- head

std::vector<LinearVars> zero_head(Tape& tape, const std::vector<int>& dims) {
  std::vector<LinearVars> out;
  for (std::size_t i = 0; i + 1 < dims.size(); ++i)
    out.push_back({tape.constant(Tensor({dims[i], dims[i + 1]})), tape.constant(Tensor({dims[i + 1]}))});
  return out;
}

TEST(Head, ZeroWeightsGiveLogTwo) {
  Rng r(16);
  Tape tape;
  const auto layers = zero_head(tape, {768, 512, 256, 128, 2});
  const auto g = decode(tape.constant(random_tensor(r, {5, 768})), layers);
  ASSERT_EQ(g.mean.shape(), (num::Shape{5, 1}));
  ASSERT_EQ(g.sigma.shape(), (num::Shape{5, 1}));
  for (int i = 0; i < 5; ++i) {
    EXPECT_EQ(g.mean.value()[i], 0);
    EXPECT_NEAR(g.sigma.value()[i], std::log(2.0) + 1e-6, 1e-7);
  }
  EXPECT_THROW(decode(tape.constant(Tensor({2, 767})), layers), DimensionError);
}

TEST(Head, MatchesScalarForwardOracle) {
  Rng r(17);
  Tape tape;
  const std::vector<int> dims{6, 5, 4, 3, 2};
  std::vector<LinearVars> layers;
  std::vector<Tensor> ws, bs;
  for (std::size_t i = 0; i + 1 < dims.size(); ++i) {
    ws.push_back(random_tensor(r, {dims[i], dims[i + 1]}, 0.7));
    bs.push_back(random_tensor(r, {dims[i + 1]}, 0.3));
    layers.push_back({tape.constant(ws.back()), tape.constant(bs.back())});
  }
  const Tensor x = random_tensor(r, {3, 6});
  const auto g = decode(tape.constant(x), layers);
  for (int n = 0; n < 3; ++n) {
    std::vector<double> h(x.data().begin() + n * 6, x.data().begin() + n * 6 + 6);
    for (std::size_t l = 0; l < ws.size(); ++l) {
      std::vector<double> o(dims[l + 1]);
      for (int j = 0; j < dims[l + 1]; ++j) {
        o[j] = bs[l][j];
        for (int i = 0; i < dims[l]; ++i) o[j] += h[i] * ws[l].at(i, j);
        if (l + 1 < ws.size()) o[j] = 0.5 * o[j] * (1 + std::erf(o[j] / std::sqrt(2.0)));
      }
      h = o;
    }
    EXPECT_NEAR(g.mean.value()[n], h[0], 1e-5);
    EXPECT_NEAR(g.sigma.value()[n], std::log1p(std::exp(h[1])) + 1e-6, 1e-5);
  }
}

GaussianOutput raw_sigma(Tape& tape, double s, SigmaParam p) {
  std::vector<LinearVars> layers{{tape.constant(Tensor::matrix({{0, 1}})), tape.constant(Tensor::vector({0, 0}))}};
  return decode(tape.constant(Tensor::matrix({{static_cast<Real>(s)}})), layers, p);
}

TEST(Head, SigmaStaysPositiveForExtremeRawValues) {
  for (double s : {-1e6, -1e3, -50.0, -1e-3, 0.0, 1e-3, 50.0, 1e3, 1e6}) {
    Tape tape;
    const Real sigma = raw_sigma(tape, s, SigmaParam::Softplus).sigma.value()[0];
    EXPECT_GT(sigma, 0) << s;
    EXPECT_TRUE(std::isfinite(sigma)) << s;
  }
  // The exponential variant keeps the floor but overflows loudly.
  for (double s : {-1e6, -50.0, 0.0, 50.0}) {
    Tape tape;
    EXPECT_GT(raw_sigma(tape, s, SigmaParam::Exp).sigma.value()[0], 0) << s;
  }
  Tape tape;
  EXPECT_THROW(raw_sigma(tape, 1e6, SigmaParam::Exp), NumericalError);
}

GaussianOutput fixed_gauss(Tape& tape, std::vector<Real> mu, std::vector<Real> sigma) {
  const int n = static_cast<int>(mu.size());
  return {tape.constant(Tensor({n, 1}, mu)), tape.constant(Tensor({n, 1}, sigma))};
}

TEST(Nll, KnownValues) {
  Tape tape;
  const auto t1 = nll_loss(fixed_gauss(tape, {3}, {1}), std::vector<double>{3}, PaddingMask::all_valid(1));
  EXPECT_NEAR(t1.total.value().item(), 0.5 * std::log(2 * std::numbers::pi), 1e-6);
  EXPECT_NEAR(t1.total.value().item(), 0.91894, 1e-5);
  const auto t2 = nll_loss(fixed_gauss(tape, {10}, {2}), std::vector<double>{12}, PaddingMask::all_valid(1));
  EXPECT_NEAR(t2.total.value().item(), 2.11209, 1e-5);
  EXPECT_NEAR(t2.penalty.value().item() + t2.error.value().item(), t2.total.value().item(), 1e-7);
  EXPECT_NEAR(t2.error.value().item(), 0.5, 1e-6);
}

TEST(Nll, PaddingInvariance) {
  Tape tape;
  const auto a = nll_loss(fixed_gauss(tape, {0.1f, -0.3f}, {0.5f, 2}), std::vector<double>{0.2, 0.4},
                          PaddingMask::all_valid(2));
  const auto b = nll_loss(fixed_gauss(tape, {0.1f, 7, -0.3f, 9}, {0.5f, 1, 2, 3}),
                          std::vector<double>{0.2, 0, 0.4, 0}, PaddingMask{{1, 0, 1, 0}});
  EXPECT_NEAR(a.total.value().item(), b.total.value().item(), 1e-6);
}

TEST(Nll, NonPositiveSigmaIsAContractViolation) {
  Tape tape;
  EXPECT_THROW(nll_loss(fixed_gauss(tape, {0}, {0}), std::vector<double>{0}, PaddingMask::all_valid(1)),
               ContractError);
}

TEST(Nll, MinimizersByGridScan) {
  auto nll = [](double mu, double sigma, double y) {
    Tape tape;
    return static_cast<double>(nll_loss(fixed_gauss(tape, {static_cast<Real>(mu)}, {static_cast<Real>(sigma)}),
                                        std::vector<double>{y}, PaddingMask::all_valid(1))
                                   .total.value()
                                   .item());
  };
  double best_mu = 0, best = 1e300;
  for (int k = -100; k <= 100; ++k) {
    const double mu = 0.37 + 0.01 * k;
    const double v = nll(mu, 0.8, 0.37);
    if (v < best) best = v, best_mu = mu;
  }
  EXPECT_NEAR(best_mu, 0.37, 1e-9);
  double prev = 1e300;
  for (double s = 2.0; s > 1e-3; s *= 0.7) {
    const double v = nll(0.37, s, 0.37);
    EXPECT_LT(v, prev);
    prev = v;
  }
}

TEST(PointPrediction, Denormalizes) {
  geo::NormStats st;
  st.target_mean = 700;
  st.target_std = 250;
  EXPECT_EQ(point_prediction(0.0, st), 700.0);
  EXPECT_LT(point_prediction(0.5, st), point_prediction(0.6, st));
  for (double s : {12.0, 333.3, 1900.0})
    EXPECT_NEAR(point_prediction(st.normalize_target(s), st), s, 1e-4);

  Tape tape;
  const auto preds = to_predictions(fixed_gauss(tape, {0.5f}, {0.2f}), st);
  EXPECT_NEAR(preds[0].mu_s, 825.0, 1e-3);
  EXPECT_NEAR(preds[0].sigma_s, 50.0, 1e-3);
  EXPECT_EQ(point_prediction(preds[0]), preds[0].mu_s);
}

// ---------------------------------------------------------------- model

TEST(Model, ParameterNamesAndShapes) {
  const LandingTimeModel m(ModelConfig{}, 1);
  const auto& p = m.params();
  ASSERT_NE(p.find("embed.weight"), nullptr);
  EXPECT_EQ(p.find("embed.weight")->value.shape(), (num::Shape{20, 256}));
  EXPECT_EQ(p.find("embed.type")->value.shape(), (num::Shape{4, 256}));
  EXPECT_EQ(p.find("encoder.2.aa.q.weight")->value.shape(), (num::Shape{768, 768}));
  EXPECT_EQ(p.find("encoder.0.ffn1.weight")->value.shape(), (num::Shape{256, 1024}));
  EXPECT_EQ(p.find("gpd.0.weight")->value.shape(), (num::Shape{768, 512}));
  EXPECT_EQ(p.find("gpd.3.weight")->value.shape(), (num::Shape{128, 2}));
  EXPECT_EQ(p.find("encoder.3.ln1.gamma"), nullptr);
}

TEST(Model, ConfigValidation) {
  ModelConfig c;
  c.heads_mma = 7;
  EXPECT_THROW(validate(c), ValidationError);
  c = ModelConfig{};
  c.layers = 0;
  EXPECT_THROW(validate(c), ValidationError);
  EXPECT_EQ(parse_sigma_param("exp"), SigmaParam::Exp);
  EXPECT_THROW(parse_sigma_param("relu"), ValidationError);
}

TEST(Model, SameSeedSameParameters) {
  const LandingTimeModel a(small_config(), 9), b(small_config(), 9), c(small_config(), 10);
  for (std::size_t i = 0; i < a.params().size(); ++i) EXPECT_EQ(a.params()[i].value, b.params()[i].value);
  EXPECT_NE(a.params()[0].value, c.params()[0].value);
}

TEST(Model, PermutationEquivariance) {
  Rng r(18);
  const LandingTimeModel m(small_config(), 3);
  geo::NormStats st;
  const auto s = testing::random_normalized_scene(r, 5);
  const std::vector<int> perm{2, 4, 0, 3, 1};
  geo::NormalizedScene sp = s;
  for (int i = 0; i < 5; ++i) {
    for (int k = 0; k < 60; ++k) sp.x[i * 60 + k] = s.x[perm[i] * 60 + k];
    sp.y[i] = s.y[perm[i]];
    sp.wtcs[i] = s.wtcs[perm[i]];
    sp.callsigns[i] = s.callsigns[perm[i]];
  }
  const auto a = m.predict(s, st);
  const auto b = m.predict(sp, st);
  for (int i = 0; i < 5; ++i) {
    EXPECT_NEAR(b[i].mu_std, a[perm[i]].mu_std, 1e-5);
    EXPECT_NEAR(b[i].sigma_std, a[perm[i]].sigma_std, 1e-5);
  }
}

TEST(Model, PaddingInvariance) {
  Rng r(19);
  const LandingTimeModel m(small_config(), 4);
  const auto s = testing::random_normalized_scene(r, 3);
  Tape t1, t2;
  ParamBinder b1(t1), b2(t2);
  const auto plain = m.forward(b1, make_input(s), nullptr);
  const auto padded = m.forward(b2, make_input(s, 7), nullptr);
  ASSERT_EQ(padded.gauss.mean.shape(), (num::Shape{7, 1}));
  for (int i = 0; i < 3; ++i) {
    EXPECT_NEAR(plain.gauss.mean.value()[i], padded.gauss.mean.value()[i], 1e-5);
    EXPECT_NEAR(plain.gauss.sigma.value()[i], padded.gauss.sigma.value()[i], 1e-5);
  }
  for (const auto& sc : padded.agent_scores)
    for (int i = 0; i < 3; ++i)
      for (int j = 3; j < 7; ++j) EXPECT_EQ(sc.at(i, j), 0);
}

TEST(Model, GradientReachesEmbeddingAndTypeTable) {
  Rng r(20);
  LandingTimeModel m(small_config(), 5);
  auto grads = num::make_grad_buffers(m.params());
  Tape tape;
  ParamBinder bind(tape, &grads);
  const auto in = make_input(testing::random_normalized_scene(r, 4));
  const auto out = m.forward(bind, in, nullptr);
  tape.backward(nll_loss(out.gauss, in.y, in.pad).total);
  for (const char* name : {"embed.weight", "embed.type", "encoder.0.mma.q.weight", "gpd.3.bias"}) {
    const auto idx = m.params().find(name)->index;
    double norm = 0;
    for (Real g : grads[idx].data()) norm += std::abs(g);
    EXPECT_GT(norm, 0) << name;
  }
}

TEST(Model, DropoutOnlyInTraining) {
  Rng r(21);
  const LandingTimeModel m(small_config(), 6);
  const auto in = make_input(testing::random_normalized_scene(r, 3));
  Tape t1, t2, t3;
  ParamBinder b1(t1), b2(t2), b3(t3);
  Rng d1(1);
  const auto eval_a = m.forward(b1, in, nullptr);
  const auto eval_b = m.forward(b2, in, nullptr);
  const auto train = m.forward(b3, in, &d1);
  EXPECT_EQ(eval_a.gauss.mean.value(), eval_b.gauss.mean.value());
  EXPECT_NE(eval_a.gauss.mean.value(), train.gauss.mean.value());
}

TEST(Model, ScoresAreRowStochastic) {
  Rng r(22);
  const LandingTimeModel m(small_config(), 7);
  Tape tape;
  ParamBinder bind(tape);
  const auto out = m.forward(bind, make_input(testing::random_normalized_scene(r, 6)), nullptr);
  ASSERT_EQ(out.agent_scores.size(), 3u);
  for (const auto& s : out.agent_scores)
    for (int i = 0; i < 6; ++i) {
      double acc = 0;
      for (int j = 0; j < 6; ++j) {
        EXPECT_GE(s.at(i, j), 0);
        acc += s.at(i, j);
      }
      EXPECT_NEAR(acc, 1.0, 1e-5);
    }
}

}  // namespace
}  // namespace ltp::model
