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

// Scalar type of the differentiable stack. Training builds use 32-bit
// floats; defining LTP_REAL_DOUBLE switches to 64-bit for gradient checks.
// Each precision lives in its own inline namespace so both builds can be
// linked into one binary.
#ifdef LTP_REAL_DOUBLE
#define LTP_PRECISION_NS f64
#else
#define LTP_PRECISION_NS f32
#endif

namespace ltp::num {
inline namespace LTP_PRECISION_NS {

#ifdef LTP_REAL_DOUBLE
using Real = double;
#else
using Real = float;
#endif

}  // namespace LTP_PRECISION_NS
}  // namespace ltp::num
