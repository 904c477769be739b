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

#include <deque>
#include <optional>
#include <string>
#include <vector>

#include "ltp/numerics/tape.hpp"

namespace ltp::num {
inline namespace LTP_PRECISION_NS {

struct Parameter {
  std::string name;
  Tensor value;
  Tensor grad;
  std::size_t index = 0;
};

/// Ordered, address-stable collection of named parameters.
class ParameterStore {
 public:
  Parameter& add(std::string name, Tensor init);

  std::size_t size() const { return params_.size(); }
  Parameter& operator[](std::size_t i) { return params_[i]; }
  const Parameter& operator[](std::size_t i) const { return params_[i]; }
  Parameter* find(const std::string& name);
  const Parameter* find(const std::string& name) const;

  auto begin() { return params_.begin(); }
  auto end() { return params_.end(); }
  auto begin() const { return params_.begin(); }
  auto end() const { return params_.end(); }

  void zero_grad();
  std::size_t numel() const;

 private:
  std::deque<Parameter> params_;
};

/// Binds parameters to a tape on first use. With a sink table, parameter
/// `i` accumulates its gradient into `(*sinks)[i]`; without one the
/// parameters enter the tape as constants (inference).
class ParamBinder {
 public:
  explicit ParamBinder(Tape& tape, std::vector<Tensor>* sinks = nullptr)
      : tape_(tape), sinks_(sinks) {}

  Var operator()(const Parameter& p);
  Tape& tape() { return tape_; }
  bool training_grads() const { return sinks_ != nullptr; }

 private:
  Tape& tape_;
  std::vector<Tensor>* sinks_;
  std::vector<std::optional<Var>> bound_;
};

/// Zero-filled gradient buffers matching every parameter in the store.
std::vector<Tensor> make_grad_buffers(const ParameterStore& params);

}  // namespace LTP_PRECISION_NS
}  // namespace ltp::num
