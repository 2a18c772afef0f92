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

#ifndef TEXTCLF_NN_OPS_HPP_
#define TEXTCLF_NN_OPS_HPP_

// Differentiable primitives. Every forward has a matching *_backward that
// accumulates (+=) into caller-provided gradient buffers; an empty span
// means "gradient not needed".

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

#include "textclf/error.hpp"
#include "textclf/nn/tensor.hpp"
#include "textclf/rng.hpp"

namespace textclf::nn {

template <typename T>
T sigmoid(T x) {
  if (x >= T(0)) return T(1) / (T(1) + std::exp(-x));
  const T e = std::exp(x);
  return e / (T(1) + e);
}

// ln(sigmoid(x)) without overflow.
template <typename T>
T log_sigmoid(T x) {
  return x >= T(0) ? -std::log1p(std::exp(-x)) : x - std::log1p(std::exp(x));
}

// ---------------------------------------------------------------------------
// 1D convolution, same padding.
//
// input L x C_in, kernels K x C_in x F, bias F -> L x F. Padding puts
// (K-1)/2 zeros on the left and the remainder on the right, so even kernel
// widths pad one extra position on the right.

inline std::size_t same_pad_left(std::size_t k) { return (k - 1) / 2; }

template <typename T>
void check_conv1d_shapes(const Tensor<T>& in, const Tensor<T>& kernels,
                         const Tensor<T>& bias) {
  if (in.rank() != 2 || kernels.rank() != 3 || bias.rank() != 1 ||
      kernels.dim(1) != in.dim(1) || bias.dim(0) != kernels.dim(2) ||
      kernels.dim(0) == 0 || in.dim(0) == 0) {
    throw ShapeError("conv1d: input " + shape_string(in.shape()) +
                     " incompatible with kernels " + shape_string(kernels.shape()) +
                     " and bias " + shape_string(bias.shape()));
  }
}

template <typename T>
Tensor<T> conv1d(const Tensor<T>& in, const Tensor<T>& kernels, const Tensor<T>& bias) {
  check_conv1d_shapes(in, kernels, bias);
  const std::size_t L = in.dim(0), C = in.dim(1), K = kernels.dim(0),
                    F = kernels.dim(2);
  const std::size_t pl = same_pad_left(K);
  Tensor<T> out({L, F});
  T* o = out.data();
  const T* x = in.data();
  const T* w = kernels.data();
  for (std::size_t t = 0; t < L; ++t) {
    T* row = o + t * F;
    std::copy(bias.data(), bias.data() + F, row);
    for (std::size_t k = 0; k < K; ++k) {
      const std::ptrdiff_t src = static_cast<std::ptrdiff_t>(t + k) -
                                 static_cast<std::ptrdiff_t>(pl);
      if (src < 0 || src >= static_cast<std::ptrdiff_t>(L)) continue;
      const T* xr = x + static_cast<std::size_t>(src) * C;
      const T* wk = w + k * C * F;
      for (std::size_t c = 0; c < C; ++c) {
        const T xv = xr[c];
        if (xv == T(0)) continue;
        const T* wc = wk + c * F;
        for (std::size_t f = 0; f < F; ++f) row[f] += xv * wc[f];
      }
    }
  }
  return out;
}

template <typename T>
void conv1d_backward(const Tensor<T>& in, const Tensor<T>& kernels,
                     const Tensor<T>& dout, std::span<T> din,
                     std::span<T> dkernels, std::span<T> dbias) {
  const std::size_t L = in.dim(0), C = in.dim(1), K = kernels.dim(0),
                    F = kernels.dim(2);
  require_shape(dout.shape(), {L, F}, "conv1d_backward dout");
  const std::size_t pl = same_pad_left(K);
  const T* x = in.data();
  const T* w = kernels.data();
  const T* g = dout.data();
  if (!dbias.empty()) {
    for (std::size_t t = 0; t < L; ++t)
      for (std::size_t f = 0; f < F; ++f) dbias[f] += g[t * F + f];
  }
  for (std::size_t t = 0; t < L; ++t) {
    const T* gr = g + t * F;
    for (std::size_t k = 0; k < K; ++k) {
      const std::ptrdiff_t src = static_cast<std::ptrdiff_t>(t + k) -
                                 static_cast<std::ptrdiff_t>(pl);
      if (src < 0 || src >= static_cast<std::ptrdiff_t>(L)) continue;
      const std::size_t s = static_cast<std::size_t>(src);
      for (std::size_t c = 0; c < C; ++c) {
        const T* wc = w + (k * C + c) * F;
        if (!dkernels.empty()) {
          const T xv = x[s * C + c];
          T* dwc = dkernels.data() + (k * C + c) * F;
          if (xv != T(0))
            for (std::size_t f = 0; f < F; ++f) dwc[f] += xv * gr[f];
        }
        if (!din.empty()) {
          T acc = 0;
          for (std::size_t f = 0; f < F; ++f) acc += wc[f] * gr[f];
          din[s * C + c] += acc;
        }
      }
    }
  }
}

// ---------------------------------------------------------------------------
// Max pooling. Gradients route to the first maximal position.

template <typename T>
struct PoolResult {
  Tensor<T> out;
  std::vector<std::size_t> argmax;  // flat input index per output element
};

template <typename T>
PoolResult<T> maxpool1d(const Tensor<T>& in, std::size_t pool) {
  if (pool < 1) throw ContractViolation("maxpool1d: pool must be >= 1");
  if (in.rank() != 2) throw ShapeError("maxpool1d: expected rank-2 input, got " +
                                       shape_string(in.shape()));
  const std::size_t L = in.dim(0), F = in.dim(1);
  const std::size_t out_len = (L + pool - 1) / pool;
  PoolResult<T> r{Tensor<T>({out_len, F}), std::vector<std::size_t>(out_len * F)};
  for (std::size_t w = 0; w < out_len; ++w) {
    const std::size_t begin = w * pool, end = std::min(L, begin + pool);
    for (std::size_t f = 0; f < F; ++f) {
      std::size_t best = begin * F + f;
      for (std::size_t t = begin + 1; t < end; ++t) {
        if (in[t * F + f] > in[best]) best = t * F + f;
      }
      r.out[w * F + f] = in[best];
      r.argmax[w * F + f] = best;
    }
  }
  return r;
}

template <typename T>
PoolResult<T> global_maxpool(const Tensor<T>& in) {
  if (in.rank() != 2 || in.dim(0) == 0) {
    throw ShapeError("global_maxpool: expected non-empty rank-2 input, got " +
                     shape_string(in.shape()));
  }
  const std::size_t L = in.dim(0), F = in.dim(1);
  PoolResult<T> r{Tensor<T>({F}), std::vector<std::size_t>(F)};
  for (std::size_t f = 0; f < F; ++f) {
    std::size_t best = f;
    for (std::size_t t = 1; t < L; ++t) {
      if (in[t * F + f] > in[best]) best = t * F + f;
    }
    r.out[f] = in[best];
    r.argmax[f] = best;
  }
  return r;
}

template <typename T>
void pool_backward(const PoolResult<T>& fwd, std::span<const T> dout, std::span<T> din) {
  for (std::size_t i = 0; i < fwd.argmax.size(); ++i) din[fwd.argmax[i]] += dout[i];
}

// ---------------------------------------------------------------------------
// Dense (affine) layer. x is a vector of length N or an R x N matrix;
// weights N x M, bias M.

template <typename T>
Tensor<T> dense(const Tensor<T>& x, const Tensor<T>& weights, const Tensor<T>& bias) {
  const std::size_t N = x.rank() == 1 ? x.dim(0) : (x.rank() == 2 ? x.dim(1) : 0);
  if (weights.rank() != 2 || bias.rank() != 1 || N == 0 || weights.dim(0) != N ||
      bias.dim(0) != weights.dim(1)) {
    throw ShapeError("dense: input " + shape_string(x.shape()) +
                     " incompatible with weights " + shape_string(weights.shape()) +
                     " and bias " + shape_string(bias.shape()));
  }
  const std::size_t M = weights.dim(1);
  const std::size_t R = x.size() / N;
  Tensor<T> y(x.rank() == 1 ? Shape{M} : Shape{R, M});
  for (std::size_t r = 0; r < R; ++r) {
    T* yr = y.data() + r * M;
    std::copy(bias.data(), bias.data() + M, yr);
    for (std::size_t n = 0; n < N; ++n) {
      const T xv = x[r * N + n];
      const T* wn = weights.data() + n * M;
      for (std::size_t m = 0; m < M; ++m) yr[m] += xv * wn[m];
    }
  }
  return y;
}

template <typename T>
void dense_backward(const Tensor<T>& x, const Tensor<T>& weights, std::span<const T> dy,
                    std::span<T> dx, std::span<T> dweights, std::span<T> dbias) {
  const std::size_t N = weights.dim(0), M = weights.dim(1);
  const std::size_t R = x.size() / N;
  if (dy.size() != R * M) throw ShapeError("dense_backward: gradient size mismatch");
  for (std::size_t r = 0; r < R; ++r) {
    const T* g = dy.data() + r * M;
    if (!dbias.empty())
      for (std::size_t m = 0; m < M; ++m) dbias[m] += g[m];
    for (std::size_t n = 0; n < N; ++n) {
      const T* wn = weights.data() + n * M;
      if (!dweights.empty()) {
        const T xv = x[r * N + n];
        T* dwn = dweights.data() + n * M;
        for (std::size_t m = 0; m < M; ++m) dwn[m] += xv * g[m];
      }
      if (!dx.empty()) {
        T acc = 0;
        for (std::size_t m = 0; m < M; ++m) acc += wn[m] * g[m];
        dx[r * N + n] += acc;
      }
    }
  }
}

// ---------------------------------------------------------------------------
// Activations.

template <typename T>
Tensor<T> relu(const Tensor<T>& x) {
  Tensor<T> y = x;
  for (T& v : y.values()) v = std::max(v, T(0));
  return y;
}

template <typename T>
void relu_backward(const Tensor<T>& x, std::span<const T> dy, std::span<T> dx) {
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] > T(0)) dx[i] += dy[i];
  }
}

// Row-wise softmax over the last axis with max subtraction.
template <typename T>
Tensor<T> softmax(const Tensor<T>& z) {
  if (z.rank() < 1 || z.rank() > 2 || z.size() == 0) {
    throw ShapeError("softmax: expected a vector or matrix, got " + shape_string(z.shape()));
  }
  const std::size_t C = z.shape().back();
  Tensor<T> p = z;
  for (std::size_t r = 0; r < z.size() / C; ++r) {
    T* row = p.data() + r * C;
    const T mx = *std::max_element(row, row + C);
    T sum = 0;
    for (std::size_t c = 0; c < C; ++c) {
      row[c] = std::exp(row[c] - mx);
      sum += row[c];
    }
    for (std::size_t c = 0; c < C; ++c) row[c] /= sum;
  }
  return p;
}

template <typename T>
void softmax_backward(const Tensor<T>& p, std::span<const T> dp, std::span<T> dz) {
  const std::size_t C = p.shape().back();
  for (std::size_t r = 0; r < p.size() / C; ++r) {
    const T* pr = p.data() + r * C;
    const T* gr = dp.data() + r * C;
    T dot = 0;
    for (std::size_t c = 0; c < C; ++c) dot += pr[c] * gr[c];
    for (std::size_t c = 0; c < C; ++c) dz[r * C + c] += pr[c] * (gr[c] - dot);
  }
}

// ---------------------------------------------------------------------------
// Cross-entropy. Probabilities are clamped to [1e-12, 1 - 1e-12] before the
// logarithm. Rank-2 inputs are batches; the loss is the batch mean.

enum class LossKind { kCategorical, kBinary };

inline constexpr double kProbClamp = 1e-12;

template <typename T>
T clamp_prob(T p) {
  return std::clamp(p, T(kProbClamp), T(1) - T(kProbClamp));
}

template <typename T>
T cross_entropy_loss(const Tensor<T>& pred, const Tensor<T>& target, LossKind kind) {
  require_shape(target.shape(), pred.shape(), "cross_entropy_loss target");
  const std::size_t batch = pred.rank() == 2 ? pred.dim(0) : 1;
  T loss = 0;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    const T p = clamp_prob(pred[i]);
    const T t = target[i];
    if (kind == LossKind::kCategorical) {
      if (t != T(0)) loss -= t * std::log(p);
    } else {
      loss -= t * std::log(p) + (T(1) - t) * std::log(T(1) - p);
    }
  }
  return loss / static_cast<T>(batch);
}

template <typename T>
void cross_entropy_backward(const Tensor<T>& pred, const Tensor<T>& target,
                            LossKind kind, std::span<T> dpred) {
  const std::size_t batch = pred.rank() == 2 ? pred.dim(0) : 1;
  const T scale = T(1) / static_cast<T>(batch);
  for (std::size_t i = 0; i < pred.size(); ++i) {
    const T p = clamp_prob(pred[i]);
    const T t = target[i];
    if (kind == LossKind::kCategorical) {
      dpred[i] -= scale * t / p;
    } else {
      dpred[i] += scale * (-t / p + (T(1) - t) / (T(1) - p));
    }
  }
}

// ---------------------------------------------------------------------------
// Stochastic regularizers. Eval mode is the identity.

template <typename T>
struct DropoutResult {
  Tensor<T> out;
  std::vector<T> mask;  // 0 or 1/(1-rate); empty in eval mode
};

template <typename T>
DropoutResult<T> dropout(const Tensor<T>& in, double rate, bool train_mode, Rng& rng) {
  if (!(rate >= 0.0 && rate < 1.0)) {
    throw ContractViolation("dropout: rate must be in [0, 1), got " + std::to_string(rate));
  }
  DropoutResult<T> r{in, {}};
  if (!train_mode || rate == 0.0) return r;
  const T keep_scale = static_cast<T>(1.0 / (1.0 - rate));
  r.mask.resize(in.size());
  for (std::size_t i = 0; i < in.size(); ++i) {
    r.mask[i] = rng.uniform() < rate ? T(0) : keep_scale;
    r.out[i] *= r.mask[i];
  }
  return r;
}

template <typename T>
void dropout_backward(const DropoutResult<T>& fwd, std::span<const T> dout, std::span<T> din) {
  if (fwd.mask.empty()) {
    for (std::size_t i = 0; i < dout.size(); ++i) din[i] += dout[i];
    return;
  }
  for (std::size_t i = 0; i < dout.size(); ++i) din[i] += dout[i] * fwd.mask[i];
}

// Adds N(0, sigma^2) per element in train mode; its gradient is the identity.
template <typename T>
Tensor<T> gaussian_noise(const Tensor<T>& in, double sigma, bool train_mode, Rng& rng) {
  if (!(sigma >= 0.0)) throw ContractViolation("gaussian_noise: sigma must be >= 0");
  Tensor<T> out = in;
  if (!train_mode || sigma == 0.0) return out;
  for (T& v : out.values()) v += static_cast<T>(sigma * rng.normal());
  return out;
}

}  // namespace textclf::nn

#endif  // TEXTCLF_NN_OPS_HPP_
