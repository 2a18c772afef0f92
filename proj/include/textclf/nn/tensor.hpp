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

#ifndef TEXTCLF_NN_TENSOR_HPP_
#define TEXTCLF_NN_TENSOR_HPP_

#include <cmath>
#include <cstddef>
#include <functional>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "textclf/error.hpp"

namespace textclf::nn {

using Shape = std::vector<std::size_t>;

inline std::string shape_string(const Shape& shape) {
  std::string s = "[";
  for (std::size_t i = 0; i < shape.size(); ++i) {
    if (i) s += "x";
    s += std::to_string(shape[i]);
  }
  return s + "]";
}

inline std::size_t shape_size(const Shape& shape) {
  return std::accumulate(shape.begin(), shape.end(), std::size_t{1},
                         std::multiplies<>());
}

// Dense row-major array with an optional gradient companion of equal shape.
template <typename T>
class Tensor {
 public:
  Tensor() = default;
  explicit Tensor(Shape shape, T fill = T(0))
      : shape_(std::move(shape)), values_(shape_size(shape_), fill) {}
  Tensor(Shape shape, std::vector<T> values)
      : shape_(std::move(shape)), values_(std::move(values)) {
    if (values_.size() != shape_size(shape_)) {
      throw ShapeError("tensor of shape " + shape_string(shape_) + " given " +
                       std::to_string(values_.size()) + " values");
    }
  }

  const Shape& shape() const { return shape_; }
  std::size_t rank() const { return shape_.size(); }
  std::size_t dim(std::size_t i) const { return shape_.at(i); }
  std::size_t size() const { return values_.size(); }

  std::span<T> values() { return values_; }
  std::span<const T> values() const { return values_; }
  T* data() { return values_.data(); }
  const T* data() const { return values_.data(); }

  T& operator[](std::size_t i) { return values_[i]; }
  const T& operator[](std::size_t i) const { return values_[i]; }
  T& at(std::size_t r, std::size_t c) { return values_[r * shape_[1] + c]; }
  const T& at(std::size_t r, std::size_t c) const { return values_[r * shape_[1] + c]; }

  bool has_grad() const { return !grad_.empty() || values_.empty(); }
  void enable_grad() { grad_.assign(values_.size(), T(0)); }
  void zero_grad() { std::fill(grad_.begin(), grad_.end(), T(0)); }
  std::span<T> grad() { return grad_; }
  std::span<const T> grad() const { return grad_; }

  // NaN/Inf is a hard failure.
  void check_finite(const char* where) const {
    for (T v : values_) {
      if (!std::isfinite(v)) {
        throw NumericError(std::string("non-finite value in ") + where);
      }
    }
  }

 private:
  Shape shape_;
  std::vector<T> values_;
  std::vector<T> grad_;
};

template <typename T>
struct Parameter {
  std::string name;
  Tensor<T> tensor;
  bool trainable = true;

  Parameter() = default;
  Parameter(std::string n, Tensor<T> t) : name(std::move(n)), tensor(std::move(t)) {
    tensor.enable_grad();
  }
};

inline void require_shape(const Shape& got, const Shape& want, const char* what) {
  if (got != want) {
    throw ShapeError(std::string(what) + ": shape " + shape_string(got) +
                     " does not match " + shape_string(want));
  }
}

}  // namespace textclf::nn

#endif  // TEXTCLF_NN_TENSOR_HPP_
