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

#include <functional>
#include <initializer_list>
#include <span>
#include <string_view>
#include <vector>

#include "ltp/numerics/tensor.hpp"

namespace ltp::num {
inline namespace LTP_PRECISION_NS {

class Tape;

/// Handle to a value recorded on a Tape. Cheap to copy; valid while the
/// tape lives.
class Var {
 public:
  Var() = default;

  const Tensor& value() const;
  /// Gradient accumulated by the last backward pass. Empty tensor when the
  /// node did not receive any gradient.
  const Tensor& grad() const;
  const Shape& shape() const { return value().shape(); }
  bool requires_grad() const;

  Tape* tape() const { return tape_; }
  int id() const { return id_; }
  explicit operator bool() const { return tape_ != nullptr; }

 private:
  friend class Tape;
  Var(Tape* tape, int id) : tape_(tape), id_(id) {}

  Tape* tape_ = nullptr;
  int id_ = -1;
};

/// Reverse-mode recording of a computation. Nodes are appended in
/// evaluation order, so parents always precede children and backward is a
/// single reverse sweep.
class Tape {
 public:
  /// Adds parent gradients given the node's own gradient.
  using BackwardFn = std::function<void(Tape&, int node)>;

  Tape() = default;
  Tape(const Tape&) = delete;
  Tape& operator=(const Tape&) = delete;

  /// Value that never receives a gradient.
  Var constant(Tensor value);
  /// Owned differentiable input; read its gradient through Var::grad().
  Var leaf(Tensor value);
  /// Borrowed constant; `value` must outlive the tape.
  Var borrow(const Tensor& value);
  /// Borrowed differentiable input. `value` must outlive the tape; the
  /// gradient is added into `*sink` at the end of every backward call.
  Var param(const Tensor& value, Tensor* sink);

  /// Propagates d(loss)/d(node) to every node. Repeated calls add into the
  /// parameter sinks again (gradients accumulate until zeroed by the owner).
  void backward(const Var& loss);

  std::size_t size() const { return nodes_.size(); }

  // Operation authoring interface.
  Var record(std::string_view op, Tensor value, std::span<const Var> parents, BackwardFn fn,
             bool allow_neg_inf = false);
  Var record(std::string_view op, Tensor value, std::initializer_list<Var> parents,
             BackwardFn fn, bool allow_neg_inf = false) {
    return record(op, std::move(value), std::span<const Var>(parents.begin(), parents.size()),
                  std::move(fn), allow_neg_inf);
  }
  const Tensor& value(int id) const;
  /// Gradient buffer of a node, zero-initialized on first access.
  Tensor& grad(int id);
  const Tensor& grad_view(int id) const { return nodes_[id].grad; }
  bool requires_grad(int id) const { return nodes_[id].requires_grad; }

 private:
  struct Node {
    Tensor owned;
    const Tensor* borrowed = nullptr;
    Tensor grad;
    Tensor* sink = nullptr;
    std::vector<int> parents;
    BackwardFn backward;
    bool requires_grad = false;
  };

  void check_same_tape(const Var& v) const;

  std::vector<Node> nodes_;
};

}  // namespace LTP_PRECISION_NS
}  // namespace ltp::num
