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


#include "ltp/model/head.hpp"

#include <cmath>
#include <numbers>

#include "ltp/error.hpp"

namespace ltp::model {
inline namespace LTP_PRECISION_NS {

using num::Real;

GaussianOutput decode(const Var& agent_tokens, std::span<const LinearVars> layers,
                      SigmaParam sigma) {
  if (layers.empty()) throw ValidationError("decode: no layers");
  const int in = agent_tokens.shape().size() == 2 ? agent_tokens.shape()[1] : -1;
  if (in != layers.front().weight.shape()[0]) {
    throw DimensionError("decode: token width " + num::shape_str(agent_tokens.shape()) +
                         " vs first layer " + num::shape_str(layers.front().weight.shape()));
  }
  if (layers.back().weight.shape()[1] != 2) {
    throw DimensionError("decode: last layer must emit 2 values, got " +
                         num::shape_str(layers.back().weight.shape()));
  }
  Var h = agent_tokens;
  for (std::size_t k = 0; k < layers.size(); ++k) {
    h = num::add_bias(num::matmul(h, layers[k].weight), layers[k].bias);
    if (k + 1 < layers.size()) h = num::gelu(h);
  }
  Var m = num::slice_cols(h, 0, 1);
  Var s = num::slice_cols(h, 1, 2);
  Var sd = sigma == SigmaParam::Exp ? num::exp(s) : num::softplus(s);
  return {m, num::add_scalar(sd, Real(kSigmaFloor))};
}

NllTerms nll_loss(const GaussianOutput& pred, std::span<const double> y_std,
                  const PaddingMask& pad) {
  const int n = pred.mean.shape()[0];
  if (pred.sigma.shape() != pred.mean.shape() || static_cast<int>(y_std.size()) != n ||
      pad.agents() != n) {
    throw DimensionError("nll_loss: " + std::to_string(n) + " predictions, " +
                         std::to_string(y_std.size()) + " targets, " +
                         std::to_string(pad.agents()) + " slots");
  }
  for (Real s : pred.sigma.value().data()) {
    if (!(s > 0)) throw ContractError("nll_loss: non-positive standard deviation");
  }
  const int valid = pad.valid_count();
  if (valid == 0) throw ValidationError("nll_loss: no valid agents");

  num::Tape& tape = *pred.mean.tape();
  Tensor y({n, 1});
  Tensor weight({n, 1});
  for (int i = 0; i < n; ++i) {
    if (!pad.valid[i]) continue;
    y[i] = static_cast<Real>(y_std[i]);
    weight[i] = Real(1) / static_cast<Real>(valid);
  }
  Var yv = tape.constant(std::move(y));
  Var wv = tape.constant(std::move(weight));

  const Real half_log_2pi = static_cast<Real>(0.5 * std::log(2.0 * std::numbers::pi));
  Var penalty_i = num::add_scalar(num::log(pred.sigma), half_log_2pi);
  Var z = num::div(yv - pred.mean, pred.sigma);
  Var error_i = num::scale(num::square(z), Real(0.5));

  Var penalty = num::sum(penalty_i * wv);
  Var error = num::sum(error_i * wv);
  return {penalty, error, penalty + error};
}

std::vector<GaussianPrediction> to_predictions(const GaussianOutput& out,
                                               const geo::NormStats& stats) {
  const Tensor& mu = out.mean.value();
  const Tensor& sd = out.sigma.value();
  std::vector<GaussianPrediction> preds(mu.size());
  for (std::size_t i = 0; i < mu.size(); ++i) {
    auto& p = preds[i];
    p.mu_std = static_cast<double>(mu[i]);
    p.sigma_std = static_cast<double>(sd[i]);
    p.mu_s = stats.denormalize_target(p.mu_std);
    p.sigma_s = p.sigma_std * stats.target_std;
  }
  return preds;
}

}  // namespace LTP_PRECISION_NS
}  // namespace ltp::model
