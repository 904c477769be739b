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
#include <string>
#include <vector>

#include "ltp/numerics/parameter.hpp"

namespace ltp::num {
inline namespace LTP_PRECISION_NS {

struct AdamWOptions {
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
  double weight_decay = 0.01;
};

/// First and second moment buffers, one per parameter in store order.
struct AdamWState {
  AdamWOptions options;
  std::int64_t step = 0;
  std::vector<Tensor> m;
  std::vector<Tensor> v;
};

AdamWState make_adamw_state(const ParameterStore& params, AdamWOptions options = {});

/// One AdamW update from each parameter's accumulated `grad`:
/// decoupled decay p <- p * (1 - lr * wd), then the bias-corrected Adam
/// step. All gradients are checked before anything is modified; a NaN/Inf
/// gradient throws NumericalError naming the parameter.
void adamw_step(ParameterStore& params, AdamWState& state, double lr);

enum class LrShape { Cosine, Linear };

/// Decays from lr_max to lr_min inside each cycle, then restarts.
struct LrSchedule {
  double lr_max = 1e-4;
  double lr_min = 1e-6;
  int cycle_epochs = 100;
  LrShape shape = LrShape::Cosine;
};

double lr_at(int epoch, const LrSchedule& sched);

LrShape parse_lr_shape(const std::string& s);
std::string to_string(LrShape s);

}  // namespace LTP_PRECISION_NS
}  // namespace ltp::num
