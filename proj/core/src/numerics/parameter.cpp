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

#include "ltp/numerics/parameter.hpp"

#include "ltp/error.hpp"

namespace ltp::num {
inline namespace LTP_PRECISION_NS {

Parameter& ParameterStore::add(std::string name, Tensor init) {
  if (find(name)) throw ContractError("duplicate parameter name " + name);
  Parameter p;
  p.name = std::move(name);
  p.grad = Tensor(init.shape(), Real(0));
  p.value = std::move(init);
  p.index = params_.size();
  params_.push_back(std::move(p));
  return params_.back();
}

Parameter* ParameterStore::find(const std::string& name) {
  for (auto& p : params_)
    if (p.name == name) return &p;
  return nullptr;
}

const Parameter* ParameterStore::find(const std::string& name) const {
  for (const auto& p : params_)
    if (p.name == name) return &p;
  return nullptr;
}

void ParameterStore::zero_grad() {
  for (auto& p : params_) p.grad.fill(Real(0));
}

std::size_t ParameterStore::numel() const {
  std::size_t n = 0;
  for (const auto& p : params_) n += p.value.size();
  return n;
}

Var ParamBinder::operator()(const Parameter& p) {
  if (bound_.size() <= p.index) bound_.resize(p.index + 1);
  auto& slot = bound_[p.index];
  if (!slot) {
    if (sinks_) {
      if (sinks_->size() <= p.index) throw ContractError("gradient sink table too small");
      slot = tape_.param(p.value, &(*sinks_)[p.index]);
    } else {
      slot = tape_.borrow(p.value);
    }
  }
  return *slot;
}

std::vector<Tensor> make_grad_buffers(const ParameterStore& params) {
  std::vector<Tensor> out;
  out.reserve(params.size());
  for (const auto& p : params) out.emplace_back(p.value.shape(), Real(0));
  return out;
}

}  // namespace LTP_PRECISION_NS
}  // namespace ltp::num
