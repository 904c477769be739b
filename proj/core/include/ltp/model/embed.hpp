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

#include <span>
#include <vector>

#include "ltp/geo/track.hpp"
#include "ltp/numerics/ops.hpp"

namespace ltp::model {
inline namespace LTP_PRECISION_NS {

using num::Tensor;
using num::Var;

// Token layout: for aircraft i, rows 3i, 3i+1, 3i+2 carry the latitude,
// longitude and altitude series respectively.

/// [N x T x 3] -> [(N*3) x T].
Tensor invert_scene(const Tensor& x, int steps = 20);
/// Inverse of invert_scene.
Tensor uninvert_scene(const Tensor& x_bar);

/// x_bar * W + b along the time axis: [(N*3) x T] -> [(N*3) x D].
Var scene_embedding(const Var& x_bar, const Var& weight, const Var& bias);

/// Adds table[wtc_i] (table is [4 x D]) to the three token rows of aircraft i.
Var add_type_embedding(const Var& tokens, std::span<const geo::Wtc> wtcs, const Var& table);

}  // namespace LTP_PRECISION_NS
}  // namespace ltp::model
