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

// Finite-difference gradient suite shared by the unit tests and the
// acceptance runner. Every check draws fresh random instances, evaluates
// an independently written double-precision loss, and compares central
// differences with the library's analytic gradients.

#ifndef TEXTCLF_TESTS_GRADIENT_SUITE_HPP_
#define TEXTCLF_TESTS_GRADIENT_SUITE_HPP_

#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "textclf/corpus.hpp"
#include "textclf/embeddings.hpp"
#include "textclf/model/fasttext.hpp"
#include "textclf/model/mconv_lstm.hpp"
#include "textclf/nn/gradcheck.hpp"
#include "textclf/nn/lstm.hpp"
#include "textclf/nn/ops.hpp"
#include "textclf/rng.hpp"

namespace textclf::testing {

using nn::GradCheckTarget;
using nn::Shape;
using nn::Tensor;

struct GradSuite {
  std::string name;
  double tolerance = 0.0;
  int instances = 0;
  double worst = 0.0;
  bool passed() const { return instances >= 20 && worst <= tolerance; }
};

inline Tensor<double> random_tensor(Rng& rng, Shape shape, double scale = 1.0) {
  Tensor<double> t(std::move(shape));
  for (double& v : t.values()) v = rng.uniform(-scale, scale);
  t.enable_grad();
  return t;
}

inline std::size_t pick(Rng& rng, std::size_t lo, std::size_t hi) {
  return lo + static_cast<std::size_t>(rng.below(hi - lo + 1));
}

inline double weighted_sum(const Tensor<double>& y, const Tensor<double>& w) {
  double s = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) s += y[i] * w[i];
  return s;
}

inline double stable_log_sigmoid(double x) {
  return x >= 0 ? -std::log1p(std::exp(-x)) : x - std::log1p(std::exp(x));
}

// ---------------------------------------------------------------------------

inline double check_conv1d(Rng& rng) {
  const std::size_t L = pick(rng, 3, 9), C = pick(rng, 1, 4), K = pick(rng, 1, 5),
                    F = pick(rng, 1, 3);
  auto x = random_tensor(rng, {L, C});
  auto k = random_tensor(rng, {K, C, F});
  auto b = random_tensor(rng, {F});
  const auto w = random_tensor(rng, {L, F});
  nn::conv1d_backward(x, k, w, x.grad(), k.grad(), b.grad());
  // direct same-padded correlation as the oracle
  auto loss = [&] {
    const std::size_t pl = (K - 1) / 2;
    double s = 0.0;
    for (std::size_t t = 0; t < L; ++t) {
      for (std::size_t f = 0; f < F; ++f) {
        double acc = b[f];
        for (std::size_t j = 0; j < K; ++j) {
          const long src = static_cast<long>(t + j) - static_cast<long>(pl);
          if (src < 0 || src >= static_cast<long>(L)) continue;
          for (std::size_t c = 0; c < C; ++c) {
            acc += x.at(static_cast<std::size_t>(src), c) * k[(j * C + c) * F + f];
          }
        }
        s += acc * w.at(t, f);
      }
    }
    return s;
  };
  const std::vector<GradCheckTarget> targets{
      {x.values(), x.grad()}, {k.values(), k.grad()}, {b.values(), b.grad()}};
  return nn::finite_difference_check(loss, targets);
}

inline double check_maxpool(Rng& rng) {
  const std::size_t L = pick(rng, 4, 13), F = pick(rng, 1, 3), pool = pick(rng, 1, 4);
  auto x = random_tensor(rng, {L, F});
  const std::size_t out_len = (L + pool - 1) / pool;
  const auto w = random_tensor(rng, {out_len, F});
  const auto fwd = nn::maxpool1d(x, pool);
  nn::pool_backward(fwd, std::span<const double>(w.values()), x.grad());
  auto loss = [&] {
    double s = 0.0;
    for (std::size_t o = 0; o < out_len; ++o) {
      for (std::size_t f = 0; f < F; ++f) {
        double m = -INFINITY;
        for (std::size_t t = o * pool; t < std::min(L, (o + 1) * pool); ++t) {
          m = std::max(m, x.at(t, f));
        }
        s += m * w.at(o, f);
      }
    }
    return s;
  };
  const std::vector<GradCheckTarget> targets{{x.values(), x.grad()}};
  return nn::finite_difference_check(loss, targets);
}

inline double check_global_maxpool(Rng& rng) {
  const std::size_t L = pick(rng, 1, 12), F = pick(rng, 1, 5);
  auto x = random_tensor(rng, {L, F});
  const auto w = random_tensor(rng, {F});
  const auto fwd = nn::global_maxpool(x);
  nn::pool_backward(fwd, std::span<const double>(w.values()), x.grad());
  auto loss = [&] {
    double s = 0.0;
    for (std::size_t f = 0; f < F; ++f) {
      double m = -INFINITY;
      for (std::size_t t = 0; t < L; ++t) m = std::max(m, x.at(t, f));
      s += m * w[f];
    }
    return s;
  };
  const std::vector<GradCheckTarget> targets{{x.values(), x.grad()}};
  return nn::finite_difference_check(loss, targets);
}

// Plain-loop reference of the gated cell, dense or same-padded convolutional.
inline double lstm_reference_loss(const nn::LstmParams<double>& p,
                                  const std::vector<Tensor<double>>& xs,
                                  const std::vector<Tensor<double>>& ws) {
  const std::size_t S = p.spatial, H = p.hidden, Cin = p.in_channels, K = p.kernel;
  const std::size_t pl = (K - 1) / 2;
  std::vector<double> h(S * H, 0.0), c(S * H, 0.0);
  auto sig = [](double v) { return 1.0 / (1.0 + std::exp(-v)); };
  double loss = 0.0;
  for (std::size_t t = 0; t < xs.size(); ++t) {
    std::vector<double> a(S * 4 * H, 0.0);
    for (std::size_t s = 0; s < S; ++s) {
      for (std::size_t g = 0; g < 4 * H; ++g) {
        double acc = p.bias.tensor[g];
        for (std::size_t j = 0; j < K; ++j) {
          const long src = static_cast<long>(s + j) - static_cast<long>(pl);
          if (src < 0 || src >= static_cast<long>(S)) continue;
          const auto u = static_cast<std::size_t>(src);
          for (std::size_t ci = 0; ci < Cin; ++ci) {
            acc += xs[t][u * Cin + ci] * p.wx.tensor[(j * Cin + ci) * 4 * H + g];
          }
          for (std::size_t hi = 0; hi < H; ++hi) {
            acc += h[u * H + hi] * p.wh.tensor[(j * H + hi) * 4 * H + g];
          }
        }
        a[s * 4 * H + g] = acc;
      }
    }
    std::vector<double> hn(S * H), cn(S * H);
    for (std::size_t s = 0; s < S; ++s) {
      for (std::size_t k = 0; k < H; ++k) {
        const std::size_t sh = s * H + k;
        const double* as = a.data() + s * 4 * H;
        const double wci = p.peephole ? p.wc.tensor[0 * S * H + sh] : 0.0;
        const double wcf = p.peephole ? p.wc.tensor[1 * S * H + sh] : 0.0;
        const double wco = p.peephole ? p.wc.tensor[2 * S * H + sh] : 0.0;
        const double i = sig(as[0 * H + k] + wci * c[sh]);
        const double f = sig(as[1 * H + k] + wcf * c[sh]);
        const double g = std::tanh(as[2 * H + k]);
        cn[sh] = f * c[sh] + i * g;
        const double o = sig(as[3 * H + k] + wco * cn[sh]);
        hn[sh] = o * std::tanh(cn[sh]);
        loss += hn[sh] * ws[t][sh];
      }
    }
    h = hn;
    c = cn;
  }
  return loss;
}

inline double check_lstm(Rng& rng, nn::LstmMode mode) {
  const bool peephole = rng.below(2) == 1;
  nn::LstmParams<double> p =
      mode == nn::LstmMode::kDense
          ? nn::LstmParams<double>::dense(pick(rng, 1, 4), pick(rng, 1, 3), peephole)
          : nn::LstmParams<double>::convolutional(pick(rng, 2, 5), pick(rng, 1, 2),
                                                  pick(rng, 1, 3), 2 * pick(rng, 0, 1) + 1,
                                                  peephole);
  for (auto* prm : {&p.wx, &p.wh, &p.bias, &p.wc}) {
    for (double& v : prm->tensor.values()) v = rng.uniform(-0.8, 0.8);
  }
  const std::size_t steps = 3;
  std::vector<Tensor<double>> xs, ws;
  for (std::size_t t = 0; t < steps; ++t) {
    xs.push_back(random_tensor(rng, {p.spatial, p.in_channels}));
    ws.push_back(random_tensor(rng, {p.spatial, p.hidden}));
  }
  nn::LstmSequence<double> seq;
  seq.forward(xs, p);
  const auto dx = seq.backward(ws, p);
  std::vector<GradCheckTarget> targets{{p.wx.tensor.values(), p.wx.tensor.grad()},
                                       {p.wh.tensor.values(), p.wh.tensor.grad()},
                                       {p.bias.tensor.values(), p.bias.tensor.grad()}};
  if (peephole) targets.push_back({p.wc.tensor.values(), p.wc.tensor.grad()});
  for (std::size_t t = 0; t < steps; ++t) targets.push_back({xs[t].values(), dx[t].values()});
  return nn::finite_difference_check([&] { return lstm_reference_loss(p, xs, ws); }, targets);
}

inline double check_dense(Rng& rng) {
  const std::size_t R = pick(rng, 1, 3), N = pick(rng, 1, 6), M = pick(rng, 1, 4);
  auto x = random_tensor(rng, {R, N});
  auto W = random_tensor(rng, {N, M});
  auto b = random_tensor(rng, {M});
  const auto w = random_tensor(rng, {R, M});
  nn::dense_backward(x, W, std::span<const double>(w.values()), x.grad(), W.grad(), b.grad());
  auto loss = [&] {
    double s = 0.0;
    for (std::size_t r = 0; r < R; ++r) {
      for (std::size_t m = 0; m < M; ++m) {
        double acc = b[m];
        for (std::size_t n = 0; n < N; ++n) acc += x.at(r, n) * W.at(n, m);
        s += acc * w.at(r, m);
      }
    }
    return s;
  };
  const std::vector<GradCheckTarget> targets{
      {x.values(), x.grad()}, {W.values(), W.grad()}, {b.values(), b.grad()}};
  return nn::finite_difference_check(loss, targets);
}

// Softmax followed by cross-entropy: a batched categorical case and the
// two-class binary case scored on p[1].
inline double check_softmax_ce(Rng& rng) {
  const bool binary = rng.below(3) == 0;
  const std::size_t R = binary ? 1 : pick(rng, 1, 3), C = binary ? 2 : pick(rng, 2, 6);
  auto z = random_tensor(rng, {R, C}, 3.0);
  std::vector<std::size_t> label(R);
  for (auto& l : label) l = static_cast<std::size_t>(rng.below(C));
  const auto p = nn::softmax(z);
  Tensor<double> dp({R, C});
  if (binary) {
    const Tensor<double> p1({1}, std::vector<double>{p[1]});
    const Tensor<double> y({1}, std::vector<double>{static_cast<double>(label[0])});
    double d = 0;
    nn::cross_entropy_backward(p1, y, nn::LossKind::kBinary, std::span<double>(&d, 1));
    dp[1] = d;
  } else {
    Tensor<double> y({R, C});
    for (std::size_t r = 0; r < R; ++r) y.at(r, label[r]) = 1.0;
    nn::cross_entropy_backward(p, y, nn::LossKind::kCategorical, dp.values());
  }
  nn::softmax_backward(p, std::span<const double>(dp.values()), z.grad());
  auto loss = [&] {
    double total = 0.0;
    for (std::size_t r = 0; r < R; ++r) {
      double m = -INFINITY;
      for (std::size_t c = 0; c < C; ++c) m = std::max(m, z.at(r, c));
      double lse = 0.0;
      for (std::size_t c = 0; c < C; ++c) lse += std::exp(z.at(r, c) - m);
      lse = m + std::log(lse);
      if (binary) {
        const double p1 = std::exp(z.at(r, 1) - lse);
        total += label[r] == 1 ? -std::log(p1) : -std::log(1.0 - p1);
      } else {
        total += lse - z.at(r, label[r]);
      }
    }
    return total / static_cast<double>(R);
  };
  const std::vector<GradCheckTarget> targets{{z.values(), z.grad()}};
  return nn::finite_difference_check(loss, targets);
}

// ---------------------------------------------------------------------------
// Trainer steps. The float step is run once with lr = 1, so the applied
// change equals minus the gradient at the starting point.

inline Vocabulary toy_vocabulary(std::size_t n) {
  static const char* kWords[] = {"runner", "running", "runs",   "walker", "walking",
                                 "walks",  "talker",  "talked", "ab",     "xyz"};
  std::vector<std::string> tokens;
  std::vector<std::int64_t> freq;
  for (std::size_t i = 0; i < n; ++i) {
    tokens.emplace_back(kWords[i % 10]);
    if (i >= 10) tokens.back() += std::to_string(i);
    freq.push_back(static_cast<std::int64_t>(n - i));
  }
  return Vocabulary(tokens, freq, freq);
}

inline std::vector<double> to_double(std::span<const float> v) { return {v.begin(), v.end()}; }

inline double sgns_reference(std::span<const double> center, std::span<const double> out,
                             std::size_t dim, int context, std::span<const int> negs) {
  auto dot = [&](int id) {
    double s = 0.0;
    for (std::size_t i = 0; i < dim; ++i) s += out[static_cast<std::size_t>(id) * dim + i] * center[i];
    return s;
  };
  double loss = -stable_log_sigmoid(dot(context));
  for (int n : negs) loss -= stable_log_sigmoid(-dot(n));
  return loss;
}

inline void randomize(std::vector<float>& v, Rng& rng, double scale, std::size_t skip = 0) {
  for (std::size_t i = skip; i < v.size(); ++i) v[i] = static_cast<float>(rng.uniform(-scale, scale));
}

inline std::vector<int> draw_negatives(Rng& rng, std::size_t V, int context) {
  std::vector<int> negs(pick(rng, 1, 4));
  for (int& n : negs) {
    do {
      n = static_cast<int>(pick(rng, 1, V));
    } while (n == context);
  }
  return negs;
}

inline double check_sgns_step(Rng& rng) {
  const std::size_t V = pick(rng, 3, 8);
  TrainSpec spec;
  spec.dim = pick(rng, 2, 8);
  spec.seed = rng.next();
  EmbeddingModel m = init_embedding_model(EmbeddingKind::kSgns, toy_vocabulary(V), spec);
  randomize(m.input, rng, 0.8, m.dim);
  randomize(m.output, rng, 0.8, m.dim);
  const int center = static_cast<int>(pick(rng, 1, V)), context = static_cast<int>(pick(rng, 1, V));
  const auto negs = draw_negatives(rng, V, context);
  std::vector<double> in = to_double(m.input), out = to_double(m.output);
  sgns_pair_step(center, context, negs, m, 1.0);
  std::vector<double> d_in(in.size()), d_out(out.size());
  for (std::size_t i = 0; i < in.size(); ++i) d_in[i] = in[i] - m.input[i];
  for (std::size_t i = 0; i < out.size(); ++i) d_out[i] = out[i] - m.output[i];
  const std::size_t dim = m.dim;
  auto loss = [&] {
    return sgns_reference(std::span<const double>(in).subspan(static_cast<std::size_t>(center) * dim, dim),
                          out, dim, context, negs);
  };
  const std::vector<GradCheckTarget> targets{{in, d_in}, {out, d_out}};
  return nn::finite_difference_check(loss, targets);
}

inline double check_subword_step(Rng& rng) {
  const std::size_t V = pick(rng, 3, 8);
  TrainSpec spec;
  spec.dim = pick(rng, 2, 6);
  spec.nmin = static_cast<int>(pick(rng, 2, 3));
  spec.nmax = spec.nmin + static_cast<int>(pick(rng, 0, 2));
  spec.bucket_count = static_cast<std::uint32_t>(pick(rng, 16, 64));  // collisions welcome
  spec.seed = rng.next();
  const Vocabulary vocab = toy_vocabulary(V);
  EmbeddingModel m = init_embedding_model(EmbeddingKind::kSubword, vocab, spec);
  randomize(m.buckets, rng, 0.8);
  randomize(m.output, rng, 0.8, m.dim);
  const int center = static_cast<int>(pick(rng, 1, V)), context = static_cast<int>(pick(rng, 1, V));
  const auto negs = draw_negatives(rng, V, context);
  const auto grams = subword_ngrams(vocab.token(center), spec.nmin, spec.nmax, spec.bucket_count);
  std::vector<double> bk = to_double(m.buckets), out = to_double(m.output);
  subword_pair_step(center, context, negs, m, 1.0);
  std::vector<double> d_bk(bk.size()), d_out(out.size());
  for (std::size_t i = 0; i < bk.size(); ++i) d_bk[i] = bk[i] - m.buckets[i];
  for (std::size_t i = 0; i < out.size(); ++i) d_out[i] = out[i] - m.output[i];
  const std::size_t dim = m.dim;
  auto loss = [&] {
    std::vector<double> v(dim, 0.0);
    for (std::uint32_t b : grams) {
      for (std::size_t i = 0; i < dim; ++i) v[i] += bk[std::size_t{b} * dim + i];
    }
    for (double& x : v) x /= static_cast<double>(grams.size());
    return sgns_reference(v, out, dim, context, negs);
  };
  const std::vector<GradCheckTarget> targets{{bk, d_bk}, {out, d_out}};
  return nn::finite_difference_check(loss, targets);
}

inline double check_glove_pair(Rng& rng) {
  const std::size_t dim = pick(rng, 1, 8);
  std::vector<double> w(dim), wc(dim), dw(dim, 0.0), dwc(dim, 0.0);
  for (auto* v : {&w, &wc}) {
    for (double& x : *v) x = rng.uniform(-1, 1);
  }
  double b = rng.uniform(-1, 1), bc = rng.uniform(-1, 1), db = 0, dbc = 0;
  const double count = rng.below(2) ? rng.uniform(1.0, 99.0) : rng.uniform(100.0, 500.0);
  const double x_max = 100.0, alpha = 0.75;
  glove_pair_loss<double>(w, wc, b, bc, count, x_max, alpha, dw, dwc, &db, &dbc);
  auto loss = [&] {
    double dot = 0.0;
    for (std::size_t i = 0; i < dim; ++i) dot += w[i] * wc[i];
    const double f = std::min(1.0, std::pow(count / x_max, alpha));
    const double r = dot + b + bc - std::log(count);
    return f * r * r;
  };
  const std::vector<GradCheckTarget> targets{{w, dw},
                                             {wc, dwc},
                                             {std::span<double>(&b, 1), std::span<const double>(&db, 1)},
                                             {std::span<double>(&bc, 1), std::span<const double>(&dbc, 1)}};
  return nn::finite_difference_check(loss, targets);
}

// Linear classifier of the fastText form: softmax(B * mean(A[ids])).
inline double check_fasttext(Rng& rng) {
  const std::size_t rows = pick(rng, 3, 9), dim = pick(rng, 1, 6), C = pick(rng, 2, 4);
  std::vector<double> A(rows * dim), B(C * dim), dA(A.size(), 0.0), dB(B.size(), 0.0);
  for (double& v : A) v = rng.uniform(-1, 1);
  for (double& v : B) v = rng.uniform(-1, 1);
  std::vector<int> ids(pick(rng, 1, 6));
  for (int& id : ids) id = static_cast<int>(pick(rng, 1, rows - 1));
  const int label = static_cast<int>(rng.below(C));
  fasttext_loss<double>(A, B, dim, ids, label, dA, dB);
  auto loss = [&] {
    std::vector<double> h(dim, 0.0), z(C, 0.0);
    for (int id : ids) {
      for (std::size_t k = 0; k < dim; ++k) h[k] += A[static_cast<std::size_t>(id) * dim + k];
    }
    for (double& v : h) v /= static_cast<double>(ids.size());
    double lse = 0.0;
    for (std::size_t c = 0; c < C; ++c) {
      for (std::size_t k = 0; k < dim; ++k) z[c] += B[c * dim + k] * h[k];
      lse += std::exp(z[c]);
    }
    return std::log(lse) - z[static_cast<std::size_t>(label)];
  };
  const std::vector<GradCheckTarget> targets{{A, dA}, {B, dB}};
  return nn::finite_difference_check(loss, targets);
}

// The assembled network in train mode with a replayed dropout/noise stream.
inline double check_mconv_lstm(Rng& rng) {
  MConvLstmConfig cfg;
  cfg.seq_len = 8;
  cfg.emb_dim = 6;
  cfg.kernel_sizes = {2, 3};
  cfg.filters_per_channel = 4;
  cfg.pool = 2;
  cfg.lstm_units = 3;
  cfg.n_classes = pick(rng, 2, 3);
  cfg.dropout_rate = rng.below(2) ? 0.3 : 0.0;
  cfg.noise_sigma = 0.1;
  cfg.lstm_mode = rng.below(3) == 0 ? nn::LstmMode::kConvolutional : nn::LstmMode::kDense;
  cfg.lstm_peephole = rng.below(2) == 1;
  cfg.lstm_readout = rng.below(2) ? LstmReadout::kTemporalMax : LstmReadout::kFinalState;
  cfg.loss = cfg.n_classes == 2 && rng.below(2) ? nn::LossKind::kBinary : nn::LossKind::kCategorical;
  const std::size_t rows = 7;
  Rng init(rng.next());
  auto net = MConvLstmNet<double>::create(cfg, rows, init);
  for (auto* p : net.parameters()) {
    if (p == &net.embedding) continue;
    for (double& v : p->tensor.values()) v = rng.uniform(-0.6, 0.6);
  }
  std::vector<int> ids(cfg.seq_len);
  for (int& id : ids) id = static_cast<int>(rng.below(rows));
  const int label = static_cast<int>(rng.below(cfg.n_classes));
  const std::uint64_t stream = rng.next();
  auto run = [&](MConvLstmCache<double>* cache) {
    Rng r(stream);
    const auto probs = mconv_forward<double>(net, ids, true, &r, cache);
    return probs;
  };
  MConvLstmCache<double> cache;
  const auto probs = run(&cache);
  std::vector<double> dprobs(cfg.n_classes, 0.0);
  mconv_loss<double>(probs, label, cfg.loss, dprobs);
  net.zero_grad();
  mconv_backward<double>(net, cache, dprobs);
  std::vector<GradCheckTarget> targets;
  for (auto* p : net.parameters()) {
    std::size_t skip = p == &net.embedding ? cfg.emb_dim : 0;  // pad row is frozen
    targets.push_back({p->tensor.values().subspan(skip), p->tensor.grad().subspan(skip)});
  }
  auto loss = [&] {
    return mconv_loss<double>(run(nullptr), label, cfg.loss, std::span<double>());
  };
  return nn::finite_difference_check(loss, targets);
}

// ---------------------------------------------------------------------------

inline std::vector<GradSuite> run_gradient_suite(int instances = 20, std::uint64_t seed = 2024) {
  struct Entry {
    const char* name;
    double tolerance;
    std::function<double(Rng&)> check;
  };
  const std::vector<Entry> entries{
      {"conv1d", 1e-5, check_conv1d},
      {"maxpool1d", 1e-6, check_maxpool},
      {"global_maxpool", 1e-6, check_global_maxpool},
      {"lstm_dense", 1e-4, [](Rng& r) { return check_lstm(r, nn::LstmMode::kDense); }},
      {"lstm_convolutional", 1e-4,
       [](Rng& r) { return check_lstm(r, nn::LstmMode::kConvolutional); }},
      {"dense", 1e-6, check_dense},
      {"softmax_cross_entropy", 1e-6, check_softmax_ce},
      {"sgns_pair_step", 1e-5, check_sgns_step},
      {"subword_sgns_step", 1e-5, check_subword_step},
      {"glove_pair", 1e-5, check_glove_pair},
      {"fasttext_linear", 1e-5, check_fasttext},
      {"mconv_lstm", 1e-4, check_mconv_lstm},
  };
  std::vector<GradSuite> out;
  for (std::size_t e = 0; e < entries.size(); ++e) {
    GradSuite s{entries[e].name, entries[e].tolerance, 0, 0.0};
    Rng rng(mix_seed(seed, e));
    for (int i = 0; i < instances; ++i) {
      s.worst = std::max(s.worst, entries[e].check(rng));
      ++s.instances;
    }
    out.push_back(s);
  }
  return out;
}

}  // namespace textclf::testing

#endif  // TEXTCLF_TESTS_GRADIENT_SUITE_HPP_
