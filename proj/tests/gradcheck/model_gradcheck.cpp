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

#include <chrono>

#include "gradcheck.hpp"
#include "ltp/model/model.hpp"
#include "ltp/rng.hpp"
#include "test_support.hpp"

namespace ltp::model {
namespace {

using testing::check_gradients;
using testing::LossFn;

ModelConfig tiny(int layers = 1) {
  ModelConfig c;
  c.model_dim = 8;
  c.layers = layers;
  c.heads_mma = 2;
  c.heads_aa = 2;
  c.ffn_dim = 12;
  c.gpd_hidden = {10, 6, 4};
  c.steps = 6;
  return c;
}

SceneInput input(Rng& r, int agents, int steps, int pad_to = 0) {
  return make_input(testing::random_normalized_scene(r, agents, steps), pad_to);
}

void expect_model_grads(LandingTimeModel& m, const SceneInput& in) {
  const LossFn loss = [&](num::ParamBinder& b) {
    const auto out = m.forward(b, in, nullptr);
    return nll_loss(out.gauss, in.y, in.pad).total;
  };
  for (const auto& c : check_gradients(m.params(), loss)) EXPECT_LE(c.rel_err, 1e-5) << c.name << " max_abs " << c.max_abs_err;
}

TEST(ModelGrad, SingleEncoderLayer) {
  Rng r(1);
  LandingTimeModel m(tiny(1), 3);
  expect_model_grads(m, input(r, 2, 6));
}

TEST(ModelGrad, StackedLayersWithPadding) {
  Rng r(2);
  LandingTimeModel m(tiny(2), 4);
  expect_model_grads(m, input(r, 3, 6, 5));
}

TEST(ModelGrad, ExpSigmaAndNoOutputProjections) {
  Rng r(3);
  ModelConfig c = tiny(1);
  c.sigma = SigmaParam::Exp;
  c.output_projections = false;
  LandingTimeModel m(c, 5);
  expect_model_grads(m, input(r, 2, 6));
}

TEST(ModelGrad, HeadTermsSeparately) {
  Rng r(4);
  LandingTimeModel m(tiny(1), 6);
  const SceneInput in = input(r, 3, 6);
  for (int term = 0; term < 2; ++term) {
    const LossFn loss = [&](num::ParamBinder& b) {
      const auto t = nll_loss(m.forward(b, in, nullptr).gauss, in.y, in.pad);
      return term == 0 ? t.penalty : t.error;
    };
    for (const auto& c : check_gradients(m.params(), loss)) EXPECT_LE(c.rel_err, 1e-5) << c.name << " max_abs " << c.max_abs_err;
  }
}

TEST(ModelGrad, CrossAircraftGradientsThroughAttention) {
  // Agent attention is the only path between aircraft: the loss of
  // aircraft 0 alone depends on aircraft 1's inputs.
  Rng r(5);
  LandingTimeModel m(tiny(1), 7);
  SceneInput in = input(r, 2, 6);
  num::ParameterStore xs;
  xs.add("x", in.x);
  const LossFn loss = [&](num::ParamBinder& bind) {
    SceneInput local = in;
    local.x = xs[0].value;
    const auto out = m.forward(bind, local, nullptr);
    PaddingMask only0{{1, 0}};
    return nll_loss(out.gauss, local.y, only0).total;
  };
  const double h = 1e-6;
  double max_sens = 0;
  for (std::size_t i = 6 * 3; i < in.x.size(); ++i) {  // aircraft 1
    const double orig = xs[0].value[i];
    xs[0].value[i] = orig + h;
    const double up = testing::loss_value(loss);
    xs[0].value[i] = orig - h;
    const double down = testing::loss_value(loss);
    xs[0].value[i] = orig;
    max_sens = std::max(max_sens, std::abs(up - down) / (2 * h));
  }
  EXPECT_GT(max_sens, 1e-6);
}

}  // namespace
}  // namespace ltp::model
