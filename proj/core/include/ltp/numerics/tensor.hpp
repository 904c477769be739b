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

#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

#include "ltp/numerics/real.hpp"

namespace ltp::num {
inline namespace LTP_PRECISION_NS {

using Shape = std::vector<int>;

std::string shape_str(const Shape& shape);
std::size_t shape_numel(const Shape& shape);

/// Dense row-major array. Scalars have shape {}.
class Tensor {
 public:
  Tensor() = default;
  explicit Tensor(Shape shape, Real fill = Real(0));
  Tensor(Shape shape, std::vector<Real> data);

  static Tensor scalar(Real v) { return Tensor(Shape{}, std::vector<Real>{v}); }
  /// 2-D tensor from nested rows; all rows must have equal length.
  static Tensor matrix(std::initializer_list<std::initializer_list<Real>> rows);
  static Tensor vector(std::initializer_list<Real> values);

  const Shape& shape() const { return shape_; }
  int dim() const { return static_cast<int>(shape_.size()); }
  std::size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  /// Leading extent of a 2-D tensor.
  int rows() const;
  /// Trailing extent (last dimension); 1 for scalars.
  int cols() const;

  std::span<Real> data() { return data_; }
  std::span<const Real> data() const { return data_; }
  Real* ptr() { return data_.data(); }
  const Real* ptr() const { return data_.data(); }

  Real& operator[](std::size_t i) { return data_[i]; }
  Real operator[](std::size_t i) const { return data_[i]; }
  Real& at(int r, int c) { return data_[static_cast<std::size_t>(r) * cols() + c]; }
  Real at(int r, int c) const {
    return data_[static_cast<std::size_t>(r) * cols() + c];
  }
  Real item() const;

  /// Same data, new shape with identical element count.
  Tensor reshaped(Shape shape) const;
  void fill(Real v);
  /// this += other, same shape.
  void add_(const Tensor& other);

  bool operator==(const Tensor& other) const = default;

 private:
  Shape shape_;
  std::vector<Real> data_;
};

/// True when no element is NaN or infinite.
bool all_finite(const Tensor& t);

}  // namespace LTP_PRECISION_NS
}  // namespace ltp::num
