/*
 * Copyright 2026 The textclf Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef TEXTCLF_NN_ADAGRAD_HPP_
#define TEXTCLF_NN_ADAGRAD_HPP_

#include <cmath>
#include <span>
#include <vector>

#include "textclf/error.hpp"
#include "textclf/nn/tensor.hpp"

namespace textclf::nn {

// acc += g^2; param -= lr * g / (sqrt(acc) + epsilon)
template <typename T>
struct AdagradState {
  double learning_rate = 0.01;
  double epsilon = 1e-8;
  std::vector<T> accumulator;  // sized on first update
};

template <typename T>
void adagrad_update(std::span<T> params, std::span<const T> grads, AdagradState<T>& state) {
  if (params.size() != grads.size()) {
    throw ShapeError("adagrad_update: " + std::to_string(params.size()) +
                     " parameters but " + std::to_string(grads.size()) + " gradients");
  }
  if (state.accumulator.empty()) state.accumulator.assign(params.size(), T(0));
  if (state.accumulator.size() != params.size()) {
    throw ShapeError("adagrad_update: accumulator size does not match parameters");
  }
  const T lr = static_cast<T>(state.learning_rate);
  const T eps = static_cast<T>(state.epsilon);
  for (std::size_t i = 0; i < params.size(); ++i) {
    const T g = grads[i];
    if (g == T(0)) continue;
    state.accumulator[i] += g * g;
    params[i] -= lr * g / (std::sqrt(state.accumulator[i]) + eps);
  }
}

// One AdagradState per parameter, matched by position in the list.
template <typename T>
class Adagrad {
 public:
  explicit Adagrad(double learning_rate, double epsilon = 1e-8)
      : learning_rate_(learning_rate), epsilon_(epsilon) {}

  void step(const std::vector<Parameter<T>*>& params) {
    if (states_.empty()) {
      states_.resize(params.size(), AdagradState<T>{learning_rate_, epsilon_, {}});
    }
    if (states_.size() != params.size()) {
      throw ContractViolation("Adagrad::step called with a different parameter list");
    }
    for (std::size_t i = 0; i < params.size(); ++i) {
      if (!params[i]->trainable) continue;
      Tensor<T>& t = params[i]->tensor;
      adagrad_update<T>(t.values(), t.grad(), states_[i]);
    }
  }

  double learning_rate() const { return learning_rate_; }
  const std::vector<AdagradState<T>>& states() const { return states_; }

 private:
  double learning_rate_;
  double epsilon_;
  std::vector<AdagradState<T>> states_;
};

}  // namespace textclf::nn

#endif  // TEXTCLF_NN_ADAGRAD_HPP_
