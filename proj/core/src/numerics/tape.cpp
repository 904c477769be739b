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

#include "ltp/numerics/tape.hpp"

#include <cmath>
#include <string>

#include "ltp/error.hpp"

namespace ltp::num {
inline namespace LTP_PRECISION_NS {

const Tensor& Var::value() const { return tape_->value(id_); }
const Tensor& Var::grad() const { return tape_->grad_view(id_); }
bool Var::requires_grad() const { return tape_->requires_grad(id_); }

Var Tape::constant(Tensor value) {
  Node n;
  n.owned = std::move(value);
  nodes_.push_back(std::move(n));
  return Var(this, static_cast<int>(nodes_.size()) - 1);
}

Var Tape::leaf(Tensor value) {
  Node n;
  n.owned = std::move(value);
  n.requires_grad = true;
  nodes_.push_back(std::move(n));
  return Var(this, static_cast<int>(nodes_.size()) - 1);
}

Var Tape::borrow(const Tensor& value) {
  Node n;
  n.borrowed = &value;
  nodes_.push_back(std::move(n));
  return Var(this, static_cast<int>(nodes_.size()) - 1);
}

Var Tape::param(const Tensor& value, Tensor* sink) {
  Node n;
  n.borrowed = &value;
  n.sink = sink;
  n.requires_grad = true;
  nodes_.push_back(std::move(n));
  return Var(this, static_cast<int>(nodes_.size()) - 1);
}

void Tape::check_same_tape(const Var& v) const {
  if (v.tape() != this) throw ContractError("variable recorded on a different tape");
}

Var Tape::record(std::string_view op, Tensor value, std::span<const Var> parents,
                 BackwardFn fn, bool allow_neg_inf) {
  for (Real x : value.data()) {
    const bool ok = std::isfinite(x) || (allow_neg_inf && std::isinf(x) && x < 0);
    if (!ok) throw NumericalError("non-finite value produced by " + std::string(op));
  }
  Node n;
  n.owned = std::move(value);
  for (const Var& p : parents) {
    check_same_tape(p);
    n.parents.push_back(p.id());
    n.requires_grad = n.requires_grad || nodes_[p.id()].requires_grad;
  }
  if (n.requires_grad) n.backward = std::move(fn);
  nodes_.push_back(std::move(n));
  return Var(this, static_cast<int>(nodes_.size()) - 1);
}

const Tensor& Tape::value(int id) const {
  const Node& n = nodes_[id];
  return n.borrowed ? *n.borrowed : n.owned;
}

Tensor& Tape::grad(int id) {
  Node& n = nodes_[id];
  if (n.grad.empty()) n.grad = Tensor(value(id).shape(), Real(0));
  return n.grad;
}

void Tape::backward(const Var& loss) {
  check_same_tape(loss);
  if (value(loss.id()).size() != 1) {
    throw ContractError("backward() needs a scalar loss, got shape " +
                        shape_str(value(loss.id()).shape()));
  }
  for (Node& n : nodes_) n.grad = Tensor();
  grad(loss.id()).fill(Real(1));
  for (int i = loss.id(); i >= 0; --i) {
    Node& n = nodes_[i];
    if (!n.requires_grad || n.grad.empty()) continue;
    if (n.backward) n.backward(*this, i);
  }
  for (Node& n : nodes_) {
    if (n.sink && !n.grad.empty()) {
      if (n.sink->empty()) *n.sink = Tensor(n.grad.shape(), Real(0));
      n.sink->add_(n.grad);
    }
  }
}

}  // namespace LTP_PRECISION_NS
}  // namespace ltp::num
