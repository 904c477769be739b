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


#include "ltp/model/config.hpp"

#include "ltp/error.hpp"

namespace ltp::model {
inline namespace LTP_PRECISION_NS {

SigmaParam parse_sigma_param(const std::string& s) {
  if (s == "softplus") return SigmaParam::Softplus;
  if (s == "exp") return SigmaParam::Exp;
  throw ValidationError("unknown sigma parameterization '" + s + "' (softplus|exp)");
}

std::string to_string(SigmaParam p) { return p == SigmaParam::Exp ? "exp" : "softplus"; }

void validate(const ModelConfig& c) {
  auto need = [](bool ok, const std::string& what) {
    if (!ok) throw ValidationError("model config: " + what);
  };
  need(c.steps >= 1, "steps must be >= 1");
  need(c.model_dim >= 1, "model_dim must be >= 1");
  need(c.layers >= 1, "layers must be >= 1");
  need(c.heads_mma >= 1 && c.model_dim % c.heads_mma == 0,
       "model_dim " + std::to_string(c.model_dim) + " not divisible by heads_mma " +
           std::to_string(c.heads_mma));
  need(c.heads_aa >= 1 && (3 * c.model_dim) % c.heads_aa == 0,
       "3*model_dim " + std::to_string(3 * c.model_dim) + " not divisible by heads_aa " +
           std::to_string(c.heads_aa));
  need(c.ffn_dim >= 1, "ffn_dim must be >= 1");
  need(c.dropout >= 0.0 && c.dropout < 1.0, "dropout must be in [0, 1)");
  for (int h : c.gpd_hidden) need(h >= 1, "gpd hidden sizes must be >= 1");
}

}  // namespace LTP_PRECISION_NS
}  // namespace ltp::model
