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


#include "ltp/model/embed.hpp"

#include <string>

#include "ltp/error.hpp"

namespace ltp::model {
inline namespace LTP_PRECISION_NS {

using num::Real;

Tensor invert_scene(const Tensor& x, int steps) {
  if (x.dim() != 3 || x.shape()[2] != 3) {
    throw DimensionError("invert_scene: expected [N x T x 3], got " + num::shape_str(x.shape()));
  }
  const int n = x.shape()[0];
  const int t = x.shape()[1];
  if (t != steps) {
    throw DimensionError("invert_scene: expected T=" + std::to_string(steps) + ", got " +
                         std::to_string(t));
  }
  Tensor out({n * 3, t});
  for (int i = 0; i < n; ++i)
    for (int s = 0; s < t; ++s)
      for (int k = 0; k < 3; ++k)
        out.at(3 * i + k, s) = x[(static_cast<std::size_t>(i) * t + s) * 3 + k];
  return out;
}

Tensor uninvert_scene(const Tensor& x_bar) {
  if (x_bar.dim() != 2 || x_bar.rows() % 3 != 0) {
    throw DimensionError("uninvert_scene: expected [(N*3) x T], got " +
                         num::shape_str(x_bar.shape()));
  }
  const int n = x_bar.rows() / 3;
  const int t = x_bar.cols();
  Tensor out({n, t, 3});
  for (int i = 0; i < n; ++i)
    for (int s = 0; s < t; ++s)
      for (int k = 0; k < 3; ++k)
        out[(static_cast<std::size_t>(i) * t + s) * 3 + k] = x_bar.at(3 * i + k, s);
  return out;
}

Var scene_embedding(const Var& x_bar, const Var& weight, const Var& bias) {
  return num::add_bias(num::matmul(x_bar, weight), bias);
}

Var add_type_embedding(const Var& tokens, std::span<const geo::Wtc> wtcs, const Var& table) {
  const auto& ts = tokens.shape();
  if (ts.size() != 2 || ts[0] != static_cast<int>(wtcs.size()) * 3) {
    throw DimensionError("add_type_embedding: tokens " + num::shape_str(ts) + " vs " +
                         std::to_string(wtcs.size()) + " aircraft");
  }
  if (table.shape() != num::Shape{geo::kWtcCount, ts[1]}) {
    throw DimensionError("add_type_embedding: table " + num::shape_str(table.shape()) +
                         " vs tokens " + num::shape_str(ts));
  }
  // One-hot selection keeps the lookup differentiable through matmul.
  Tensor select({ts[0], geo::kWtcCount});
  for (std::size_t i = 0; i < wtcs.size(); ++i) {
    const int w = static_cast<int>(wtcs[i]);
    if (w < 0 || w >= geo::kWtcCount) {
      throw ValidationError("add_type_embedding: unknown wake category " + std::to_string(w));
    }
    for (int k = 0; k < 3; ++k) select.at(static_cast<int>(3 * i) + k, w) = Real(1);
  }
  Var sel = tokens.tape()->constant(std::move(select));
  return num::add(tokens, num::matmul(sel, table));
}

}  // namespace LTP_PRECISION_NS
}  // namespace ltp::model
