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

#include <string>
#include <vector>

#include "ltp/numerics/real.hpp"

namespace ltp::model {
inline namespace LTP_PRECISION_NS {

enum class SigmaParam { Softplus, Exp };

SigmaParam parse_sigma_param(const std::string& s);
std::string to_string(SigmaParam p);

/// Architecture hyper-parameters. Defaults reproduce the reference setup.
struct ModelConfig {
  int steps = 20;
  int model_dim = 256;
  int layers = 3;
  int heads_mma = 8;
  int heads_aa = 8;
  int ffn_dim = 1024;
  double dropout = 0.1;
  std::vector<int> gpd_hidden{512, 256, 128};
  bool output_projections = true;
  SigmaParam sigma = SigmaParam::Softplus;
};

/// Throws ValidationError on inconsistent sizes.
void validate(const ModelConfig& cfg);

}  // namespace LTP_PRECISION_NS
}  // namespace ltp::model
