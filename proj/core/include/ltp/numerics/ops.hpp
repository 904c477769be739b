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
#include <span>
#include <vector>

#include "ltp/numerics/tape.hpp"

namespace ltp {
class Rng;
}

namespace ltp::num {
inline namespace LTP_PRECISION_NS {

// Differentiable operations. Every op checks shapes and throws
// DimensionError naming both operands on mismatch.

/// [m x k] * [k x n]
Var matmul(const Var& a, const Var& b);
/// a * b^T for a [m x k], b [n x k].
Var matmul_nt(const Var& a, const Var& b);
Var transpose(const Var& a);

Var add(const Var& a, const Var& b);
Var sub(const Var& a, const Var& b);
/// Elementwise product.
Var mul(const Var& a, const Var& b);
/// Elementwise quotient.
Var div(const Var& a, const Var& b);
/// x [r x c] plus row vector b [c] broadcast over rows.
Var add_bias(const Var& x, const Var& b);
Var scale(const Var& x, Real s);
Var add_scalar(const Var& x, Real s);

Var square(const Var& x);
Var exp(const Var& x);
Var log(const Var& x);
/// log(1 + e^x), computed without overflow.
Var softplus(const Var& x);
/// x * Phi(x) with the exact Gaussian CDF.
Var gelu(const Var& x);

/// Row-wise softmax over a 2-D tensor. Entries equal to -inf map to exactly
/// zero; a row with no finite entry throws NumericalError.
Var softmax_rows(const Var& x);
/// Replaces entries whose `allowed` flag is 0 with -inf. `allowed` is
/// row-major with one flag per element of x.
Var mask_fill(const Var& x, std::span<const std::uint8_t> allowed);

/// Normalizes each row over the last dimension (biased variance, eps inside
/// the square root), then applies gamma and beta.
Var layer_norm(const Var& x, const Var& gamma, const Var& beta, Real eps = Real(1e-5));

Var reshape(const Var& x, Shape shape);
/// Columns [c0, c1) of a 2-D tensor.
Var slice_cols(const Var& x, int c0, int c1);
Var concat_cols(const std::vector<Var>& parts);

/// Sum of all elements, as a scalar.
Var sum(const Var& x);
Var mean(const Var& x);

/// Inverted dropout: zeroes each element with probability `rate` and scales
/// survivors by 1/(1-rate). Identity when rate == 0.
Var dropout(const Var& x, double rate, Rng& rng);

inline Var operator+(const Var& a, const Var& b) { return add(a, b); }
inline Var operator-(const Var& a, const Var& b) { return sub(a, b); }
inline Var operator*(const Var& a, const Var& b) { return mul(a, b); }

}  // namespace LTP_PRECISION_NS
}  // namespace ltp::num
