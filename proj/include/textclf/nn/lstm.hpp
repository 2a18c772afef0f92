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

#ifndef TEXTCLF_NN_LSTM_HPP_
#define TEXTCLF_NN_LSTM_HPP_

// LSTM cell with input-to-state and state-to-state transitions expressed as
// same-padded 1D convolutions over a spatial axis of length S:
//
//   i_t = sig(Wxi * X_t + Whi * H_{t-1} + Wci o C_{t-1} + b_i)
//   f_t = sig(Wxf * X_t + Whf * H_{t-1} + Wcf o C_{t-1} + b_f)
//   C_t = f_t o C_{t-1} + i_t o tanh(Wxc * X_t + Whc * H_{t-1} + b_c)
//   o_t = sig(Wxo * X_t + Who * H_{t-1} + Wco o C_t + b_o)
//   H_t = o_t o tanh(C_t)
//
// Dense mode is the S = 1, kernel width 1 special case, where the
// convolutions reduce to full matrices. Peephole terms (Wc*) are optional.

#include <cmath>
#include <string>
#include <vector>

#include "textclf/nn/ops.hpp"
#include "textclf/nn/tensor.hpp"
#include "textclf/rng.hpp"

namespace textclf::nn {

enum class LstmMode { kDense, kConvolutional };

// Gate blocks inside the fused 4H axis.
enum LstmGate : std::size_t { kGateI = 0, kGateF = 1, kGateC = 2, kGateO = 3 };

template <typename T>
struct LstmParams {
  LstmMode mode = LstmMode::kDense;
  std::size_t spatial = 1;      // S
  std::size_t in_channels = 0;  // C_in per spatial position
  std::size_t hidden = 0;       // H channels per spatial position
  std::size_t kernel = 1;       // odd width shared by all transitions
  bool peephole = false;

  Parameter<T> wx;    // K x C_in x 4H, gate order i, f, c, o
  Parameter<T> wh;    // K x H x 4H
  Parameter<T> bias;  // 4H
  Parameter<T> wc;    // 3 x S x H peepholes for i, f, o

  static LstmParams dense(std::size_t input, std::size_t hidden, bool peephole = false) {
    return make(LstmMode::kDense, 1, input, hidden, 1, peephole);
  }

  static LstmParams convolutional(std::size_t spatial, std::size_t in_channels,
                                  std::size_t hidden, std::size_t kernel,
                                  bool peephole = false) {
    if (kernel % 2 == 0) {
      throw ContractViolation("convolutional LSTM kernel width must be odd, got " +
                              std::to_string(kernel));
    }
    return make(LstmMode::kConvolutional, spatial, in_channels, hidden, kernel, peephole);
  }

  // Uniform(-1/sqrt(H*K), +) weights, forget-gate bias 1.
  void init(Rng& rng) {
    const double a = 1.0 / std::sqrt(static_cast<double>(hidden * kernel));
    for (T& v : wx.tensor.values()) v = static_cast<T>(rng.uniform(-a, a));
    for (T& v : wh.tensor.values()) v = static_cast<T>(rng.uniform(-a, a));
    for (std::size_t h = 0; h < hidden; ++h) bias.tensor[kGateF * hidden + h] = T(1);
    if (peephole) {
      for (T& v : wc.tensor.values()) v = static_cast<T>(rng.uniform(-a, a));
    }
  }

  std::vector<Parameter<T>*> parameters() {
    std::vector<Parameter<T>*> out{&wx, &wh, &bias};
    if (peephole) out.push_back(&wc);
    return out;
  }

 private:
  static LstmParams make(LstmMode mode, std::size_t s, std::size_t cin, std::size_t h,
                         std::size_t k, bool peephole) {
    if (s == 0 || cin == 0 || h == 0 || k == 0) {
      throw ContractViolation("LSTM dimensions must be positive");
    }
    LstmParams p;
    p.mode = mode;
    p.spatial = s;
    p.in_channels = cin;
    p.hidden = h;
    p.kernel = k;
    p.peephole = peephole;
    p.wx = Parameter<T>("lstm.wx", Tensor<T>({k, cin, 4 * h}));
    p.wh = Parameter<T>("lstm.wh", Tensor<T>({k, h, 4 * h}));
    p.bias = Parameter<T>("lstm.bias", Tensor<T>({4 * h}));
    p.wc = Parameter<T>("lstm.wc", Tensor<T>({3, s, h}));
    p.wc.trainable = peephole;
    return p;
  }
};

template <typename T>
struct LstmState {
  Tensor<T> h;  // S x H
  Tensor<T> c;  // S x H

  static LstmState zeros(const LstmParams<T>& p) {
    return {Tensor<T>({p.spatial, p.hidden}), Tensor<T>({p.spatial, p.hidden})};
  }
};

template <typename T>
struct LstmGates {
  Tensor<T> i, f, g, o;  // g is the tanh candidate
};

template <typename T>
struct LstmStepResult {
  LstmState<T> state;
  LstmGates<T> gates;
};

namespace detail {

template <typename T>
Tensor<T> as_lstm_input(const Tensor<T>& x, const LstmParams<T>& p) {
  if (x.size() != p.spatial * p.in_channels) {
    throw ShapeError("lstm_step: input " + shape_string(x.shape()) + " does not match " +
                     shape_string({p.spatial, p.in_channels}));
  }
  return Tensor<T>({p.spatial, p.in_channels}, std::vector<T>(x.values().begin(), x.values().end()));
}

}  // namespace detail

template <typename T>
LstmStepResult<T> lstm_step(const Tensor<T>& x, const LstmState<T>& prev,
                            const LstmParams<T>& p) {
  const std::size_t S = p.spatial, H = p.hidden;
  require_shape(prev.h.shape(), {S, H}, "lstm_step hidden state");
  require_shape(prev.c.shape(), {S, H}, "lstm_step cell state");
  const Tensor<T> xin = detail::as_lstm_input(x, p);

  Tensor<T> a = conv1d(xin, p.wx.tensor, p.bias.tensor);
  const Tensor<T> zero_bias({4 * H});
  const Tensor<T> ah = conv1d(prev.h, p.wh.tensor, zero_bias);
  for (std::size_t i = 0; i < a.size(); ++i) a[i] += ah[i];

  LstmStepResult<T> r{{Tensor<T>({S, H}), Tensor<T>({S, H})},
                      {Tensor<T>({S, H}), Tensor<T>({S, H}), Tensor<T>({S, H}),
                       Tensor<T>({S, H})}};
  const T* wc = p.wc.tensor.data();
  for (std::size_t s = 0; s < S; ++s) {
    const T* as = a.data() + s * 4 * H;
    for (std::size_t h = 0; h < H; ++h) {
      const std::size_t sh = s * H + h;
      const T c_prev = prev.c[sh];
      T zi = as[kGateI * H + h], zf = as[kGateF * H + h], zo = as[kGateO * H + h];
      if (p.peephole) {
        zi += wc[0 * S * H + sh] * c_prev;
        zf += wc[1 * S * H + sh] * c_prev;
      }
      const T i = sigmoid(zi), f = sigmoid(zf), g = std::tanh(as[kGateC * H + h]);
      const T c = f * c_prev + i * g;
      if (p.peephole) zo += wc[2 * S * H + sh] * c;
      const T o = sigmoid(zo);
      r.gates.i[sh] = i;
      r.gates.f[sh] = f;
      r.gates.g[sh] = g;
      r.gates.o[sh] = o;
      r.state.c[sh] = c;
      r.state.h[sh] = o * std::tanh(c);
    }
  }
  return r;
}

// Unrolled LSTM over a sequence with backpropagation through time.
template <typename T>
class LstmSequence {
 public:
  // Returns the hidden state after every step (S x H each).
  const std::vector<LstmState<T>>& forward(const std::vector<Tensor<T>>& inputs,
                                           const LstmParams<T>& p) {
    inputs_.clear();
    states_.clear();
    gates_.clear();
    states_.push_back(LstmState<T>::zeros(p));
    for (const Tensor<T>& x : inputs) {
      inputs_.push_back(detail::as_lstm_input(x, p));
      auto step = lstm_step(inputs_.back(), states_.back(), p);
      states_.push_back(std::move(step.state));
      gates_.push_back(std::move(step.gates));
    }
    outputs_.assign(states_.begin() + 1, states_.end());
    return outputs_;
  }

  // dh[t] is the loss gradient w.r.t. H_{t+1} (step t's output), possibly
  // empty for steps without a direct gradient. Parameter gradients are
  // accumulated into p; returns dX per step.
  std::vector<Tensor<T>> backward(const std::vector<Tensor<T>>& dh, LstmParams<T>& p) const {
    const std::size_t S = p.spatial, H = p.hidden, steps = inputs_.size();
    std::vector<Tensor<T>> dx(steps, Tensor<T>({S, p.in_channels}));
    Tensor<T> dh_next({S, H}), dc_next({S, H});
    const T* wc = p.wc.tensor.data();
    std::span<T> dwc = p.peephole ? p.wc.tensor.grad() : std::span<T>();
    for (std::size_t t = steps; t-- > 0;) {
      const LstmGates<T>& gt = gates_[t];
      const LstmState<T>& prev = states_[t];
      const LstmState<T>& cur = states_[t + 1];
      Tensor<T> da({S, 4 * H});
      Tensor<T> dc_prev({S, H});
      for (std::size_t s = 0; s < S; ++s) {
        for (std::size_t h = 0; h < H; ++h) {
          const std::size_t sh = s * H + h;
          T dH = dh_next[sh];
          if (t < dh.size() && dh[t].size() != 0) dH += dh[t][sh];
          const T i = gt.i[sh], f = gt.f[sh], g = gt.g[sh], o = gt.o[sh];
          const T c = cur.c[sh], c_prev = prev.c[sh];
          const T tc = std::tanh(c);
          T dC = dc_next[sh] + dH * o * (T(1) - tc * tc);
          const T dzo = dH * tc * o * (T(1) - o);
          if (p.peephole) {
            dC += dzo * wc[2 * S * H + sh];
            dwc[2 * S * H + sh] += dzo * c;
          }
          const T dzi = dC * g * i * (T(1) - i);
          const T dzf = dC * c_prev * f * (T(1) - f);
          const T dzg = dC * i * (T(1) - g * g);
          T dcp = dC * f;
          if (p.peephole) {
            dcp += dzi * wc[0 * S * H + sh] + dzf * wc[1 * S * H + sh];
            dwc[0 * S * H + sh] += dzi * c_prev;
            dwc[1 * S * H + sh] += dzf * c_prev;
          }
          dc_prev[sh] = dcp;
          T* das = da.data() + s * 4 * H;
          das[kGateI * H + h] = dzi;
          das[kGateF * H + h] = dzf;
          das[kGateC * H + h] = dzg;
          das[kGateO * H + h] = dzo;
        }
      }
      Tensor<T> dh_prev({S, H});
      conv1d_backward(inputs_[t], p.wx.tensor, da, dx[t].values(), p.wx.tensor.grad(),
                      p.bias.tensor.grad());
      conv1d_backward(prev.h, p.wh.tensor, da, dh_prev.values(), p.wh.tensor.grad(),
                      std::span<T>());
      dh_next = std::move(dh_prev);
      dc_next = std::move(dc_prev);
    }
    return dx;
  }

  std::size_t steps() const { return inputs_.size(); }
  const LstmGates<T>& gates(std::size_t t) const { return gates_.at(t); }

 private:
  std::vector<Tensor<T>> inputs_;
  std::vector<LstmState<T>> states_;  // states_[0] is the zero initial state
  std::vector<LstmGates<T>> gates_;
  std::vector<LstmState<T>> outputs_;
};

}  // namespace textclf::nn

#endif  // TEXTCLF_NN_LSTM_HPP_
