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

#include "ltp/numerics/optim.hpp"

#include <cmath>
#include <numbers>

#include "ltp/error.hpp"

namespace ltp::num {
inline namespace LTP_PRECISION_NS {

AdamWState make_adamw_state(const ParameterStore& params, AdamWOptions options) {
  AdamWState s;
  s.options = options;
  for (const auto& p : params) {
    s.m.emplace_back(p.value.shape(), Real(0));
    s.v.emplace_back(p.value.shape(), Real(0));
  }
  return s;
}

void adamw_step(ParameterStore& params, AdamWState& state, double lr) {
  if (!(lr > 0.0)) throw ContractError("adamw_step: learning rate must be positive");
  if (state.m.size() != params.size() || state.v.size() != params.size()) {
    throw DimensionError("adamw_step: optimizer state does not match parameter count");
  }
  for (const auto& p : params) {
    if (p.grad.shape() != p.value.shape() || state.m[p.index].shape() != p.value.shape()) {
      throw DimensionError("adamw_step: shape mismatch for parameter " + p.name);
    }
    if (!all_finite(p.grad)) throw NumericalError("poisoned gradient in parameter " + p.name);
  }
  const auto& o = state.options;
  state.step += 1;
  const double bc1 = 1.0 - std::pow(o.beta1, static_cast<double>(state.step));
  const double bc2 = 1.0 - std::pow(o.beta2, static_cast<double>(state.step));
  const double decay = 1.0 - lr * o.weight_decay;
  for (auto& p : params) {
    Tensor& m = state.m[p.index];
    Tensor& v = state.v[p.index];
    for (std::size_t i = 0; i < p.value.size(); ++i) {
      const double g = p.grad[i];
      const double mi = o.beta1 * m[i] + (1.0 - o.beta1) * g;
      const double vi = o.beta2 * v[i] + (1.0 - o.beta2) * g * g;
      m[i] = Real(mi);
      v[i] = Real(vi);
      const double mhat = mi / bc1;
      const double vhat = vi / bc2;
      const double w = double(p.value[i]) * decay;
      p.value[i] = Real(w - lr * mhat / (std::sqrt(vhat) + o.eps));
    }
  }
}

double lr_at(int epoch, const LrSchedule& s) {
  if (epoch < 0) throw ContractError("lr_at: negative epoch");
  if (s.cycle_epochs <= 0) throw ContractError("lr_at: cycle length must be positive");
  const double phase = static_cast<double>(epoch % s.cycle_epochs) / s.cycle_epochs;
  const double span = s.lr_max - s.lr_min;
  switch (s.shape) {
    case LrShape::Linear:
      return s.lr_max - span * phase;
    case LrShape::Cosine:
      break;
  }
  return s.lr_min + 0.5 * span * (1.0 + std::cos(std::numbers::pi * phase));
}

LrShape parse_lr_shape(const std::string& s) {
  if (s == "cosine") return LrShape::Cosine;
  if (s == "linear") return LrShape::Linear;
  throw ValidationError("unknown learning-rate shape '" + s + "' (expected cosine|linear)");
}

std::string to_string(LrShape s) { return s == LrShape::Cosine ? "cosine" : "linear"; }

}  // namespace LTP_PRECISION_NS
}  // namespace ltp::num
