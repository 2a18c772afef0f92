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


#ifndef TEXTCLF_MODEL_MCONV_LSTM_HPP_
#define TEXTCLF_MODEL_MCONV_LSTM_HPP_

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "textclf/corpus.hpp"
#include "textclf/embeddings.hpp"
#include "textclf/error.hpp"
#include "textclf/model/classifier.hpp"
#include "textclf/nn/lstm.hpp"
#include "textclf/nn/ops.hpp"
#include "textclf/nn/tensor.hpp"
#include "textclf/rng.hpp"

namespace textclf {

enum class EmbeddingInit { kRandom, kPretrained };
enum class LstmReadout { kFinalState, kTemporalMax };

struct MConvLstmConfig {
  std::size_t seq_len = 100;
  std::size_t emb_dim = 300;
  std::vector<std::size_t> kernel_sizes{4, 6, 8};
  std::size_t filters_per_channel = 100;
  std::size_t pool = 4;
  std::size_t lstm_units = 100;
  double dropout_rate = 0.5;
  double noise_sigma = 0.1;
  std::size_t n_classes = 2;
  EmbeddingInit embedding_init = EmbeddingInit::kRandom;
  bool freeze_embeddings = false;
  // Recurrent branch. Convolutional mode treats the embedding axis as the
  // spatial axis (one input channel) and max-pools it away at the readout.
  nn::LstmMode lstm_mode = nn::LstmMode::kDense;
  std::size_t lstm_kernel = 3;
  bool lstm_peephole = false;
  LstmReadout lstm_readout = LstmReadout::kFinalState;
  // kBinary requires n_classes == 2 and scores p(class 1) alone.
  nn::LossKind loss = nn::LossKind::kCategorical;
  OovStrategy oov = OovStrategy::kUniform;

  // Throws ConfigError.
  void validate() const;
  nlohmann::json to_json() const;
  static MConvLstmConfig from_json(const nlohmann::json& j);
};

// Shapes observed during a forward pass, per branch.
struct LayerShapes {
  nn::Shape input;
  std::vector<nn::Shape> conv_maps;
  std::vector<nn::Shape> pooled_maps;
  std::vector<nn::Shape> channel_vectors;
  nn::Shape lstm_vector;
  nn::Shape concat;
  nn::Shape output;
};

// ---------------------------------------------------------------------------
// Network core; float for training, double for gradient checks.

template <typename T>
struct MConvLstmNet {
  MConvLstmConfig cfg;
  nn::Parameter<T> embedding;  // rows x emb_dim, row 0 is the pad row
  std::vector<nn::Parameter<T>> conv_kernels;  // K x emb_dim x F
  std::vector<nn::Parameter<T>> conv_biases;   // F
  nn::LstmParams<T> lstm;
  nn::Parameter<T> head_w;  // concat x n_classes
  nn::Parameter<T> head_b;  // n_classes

  std::size_t rows() const { return embedding.tensor.dim(0); }
  std::size_t concat_width() const {
    return cfg.kernel_sizes.size() * cfg.filters_per_channel + cfg.lstm_units;
  }

  static MConvLstmNet create(const MConvLstmConfig& cfg, std::size_t rows, Rng& rng) {
    cfg.validate();
    if (rows < 1) throw ConfigError("embedding table needs at least the pad row");
    MConvLstmNet net;
    net.cfg = cfg;
    const std::size_t E = cfg.emb_dim, F = cfg.filters_per_channel;
    net.embedding = nn::Parameter<T>("embedding", nn::Tensor<T>({rows, E}));
    for (std::size_t i = E; i < rows * E; ++i) {
      net.embedding.tensor[i] = static_cast<T>(rng.uniform(-0.05, 0.05));
    }
    net.embedding.trainable = !cfg.freeze_embeddings;
    for (std::size_t c = 0; c < cfg.kernel_sizes.size(); ++c) {
      const std::size_t K = cfg.kernel_sizes[c];
      nn::Tensor<T> w({K, E, F});
      const double a = std::sqrt(6.0 / static_cast<double>(K * E + K * F));
      for (T& v : w.values()) v = static_cast<T>(rng.uniform(-a, a));
      net.conv_kernels.emplace_back("conv" + std::to_string(K) + ".w", std::move(w));
      net.conv_biases.emplace_back("conv" + std::to_string(K) + ".b", nn::Tensor<T>({F}));
    }
    net.lstm = cfg.lstm_mode == nn::LstmMode::kDense
                   ? nn::LstmParams<T>::dense(E, cfg.lstm_units, cfg.lstm_peephole)
                   : nn::LstmParams<T>::convolutional(E, 1, cfg.lstm_units, cfg.lstm_kernel,
                                                      cfg.lstm_peephole);
    net.lstm.init(rng);
    const std::size_t W = net.concat_width(), C = cfg.n_classes;
    nn::Tensor<T> hw({W, C});
    const double a = std::sqrt(6.0 / static_cast<double>(W + C));
    for (T& v : hw.values()) v = static_cast<T>(rng.uniform(-a, a));
    net.head_w = nn::Parameter<T>("head.w", std::move(hw));
    net.head_b = nn::Parameter<T>("head.b", nn::Tensor<T>({C}));
    return net;
  }

  std::vector<nn::Parameter<T>*> parameters() {
    std::vector<nn::Parameter<T>*> out{&embedding};
    for (std::size_t c = 0; c < conv_kernels.size(); ++c) {
      out.push_back(&conv_kernels[c]);
      out.push_back(&conv_biases[c]);
    }
    for (auto* p : lstm.parameters()) out.push_back(p);
    out.push_back(&head_w);
    out.push_back(&head_b);
    return out;
  }

  void zero_grad() {
    for (auto* p : parameters()) p->tensor.zero_grad();
    lstm.wc.tensor.zero_grad();
  }
};

template <typename T>
struct MConvLstmCache {
  std::vector<int> ids;
  nn::Tensor<T> embedded;  // L x E, after noise
  struct Channel {
    nn::Tensor<T> conv;  // pre-activation
    nn::DropoutResult<T> drop;
    nn::PoolResult<T> pool;
    nn::PoolResult<T> global;
  };
  std::vector<Channel> channels;
  nn::LstmSequence<T> sequence;
  nn::PoolResult<T> readout;  // over the stacked readout rows
  nn::Tensor<T> concat;
  nn::DropoutResult<T> head_drop;
  nn::Tensor<T> probs;
};

// Returns the class distribution. `rng` is required in train mode (noise and
// dropout); `cache` and `shapes` are optional outputs.
template <typename T>
nn::Tensor<T> mconv_forward(const MConvLstmNet<T>& net, std::span<const int> ids, bool train,
                            Rng* rng, MConvLstmCache<T>* cache = nullptr,
                            LayerShapes* shapes = nullptr) {
  const MConvLstmConfig& cfg = net.cfg;
  const std::size_t L = cfg.seq_len, E = cfg.emb_dim, F = cfg.filters_per_channel;
  if (ids.size() != L) {
    throw ShapeError("document length " + std::to_string(ids.size()) +
                     " does not match seq_len " + std::to_string(L));
  }
  if (train && rng == nullptr) throw ContractViolation("mconv_forward: train mode needs an rng");
  Rng eval_rng(0);
  Rng& r = rng ? *rng : eval_rng;
  MConvLstmCache<T> local;
  MConvLstmCache<T>& c = cache ? *cache : local;
  c.ids.assign(ids.begin(), ids.end());

  nn::Tensor<T> emb({L, E});
  for (std::size_t t = 0; t < L; ++t) {
    const int id = ids[t];
    if (id < 0 || static_cast<std::size_t>(id) >= net.rows()) {
      throw ContractViolation("token id " + std::to_string(id) + " outside the embedding table");
    }
    const T* row = net.embedding.tensor.data() + static_cast<std::size_t>(id) * E;
    std::copy(row, row + E, emb.data() + t * E);
  }
  c.embedded = nn::gaussian_noise(emb, cfg.noise_sigma, train, r);
  if (shapes) *shapes = LayerShapes{c.embedded.shape(), {}, {}, {}, {}, {}, {}};

  const std::size_t W = net.concat_width();
  c.concat = nn::Tensor<T>({W});
  c.channels.resize(cfg.kernel_sizes.size());
  for (std::size_t k = 0; k < cfg.kernel_sizes.size(); ++k) {
    auto& ch = c.channels[k];
    ch.conv = nn::conv1d(c.embedded, net.conv_kernels[k].tensor, net.conv_biases[k].tensor);
    ch.drop = nn::dropout(nn::relu(ch.conv), cfg.dropout_rate, train, r);
    ch.pool = nn::maxpool1d(ch.drop.out, cfg.pool);
    ch.global = nn::global_maxpool(ch.pool.out);
    std::copy(ch.global.out.values().begin(), ch.global.out.values().end(),
              c.concat.data() + k * F);
    if (shapes) {
      shapes->conv_maps.push_back(ch.conv.shape());
      shapes->pooled_maps.push_back(ch.pool.out.shape());
      shapes->channel_vectors.push_back(ch.global.out.shape());
    }
  }

  std::vector<nn::Tensor<T>> steps;
  steps.reserve(L);
  for (std::size_t t = 0; t < L; ++t) {
    steps.emplace_back(nn::Shape{E}, std::vector<T>(c.embedded.data() + t * E,
                                                    c.embedded.data() + (t + 1) * E));
  }
  const auto& states = c.sequence.forward(steps, net.lstm);
  const std::size_t S = net.lstm.spatial, H = net.lstm.hidden;
  const std::size_t first = cfg.lstm_readout == LstmReadout::kFinalState ? L - 1 : 0;
  nn::Tensor<T> source({(L - first) * S, H});
  for (std::size_t t = first; t < L; ++t) {
    std::copy(states[t].h.values().begin(), states[t].h.values().end(),
              source.data() + (t - first) * S * H);
  }
  c.readout = nn::global_maxpool(source);
  std::copy(c.readout.out.values().begin(), c.readout.out.values().end(),
            c.concat.data() + cfg.kernel_sizes.size() * F);

  c.head_drop = nn::dropout(c.concat, cfg.dropout_rate, train, r);
  c.probs = nn::softmax(nn::dense(c.head_drop.out, net.head_w.tensor, net.head_b.tensor));
  if (shapes) {
    shapes->lstm_vector = c.readout.out.shape();
    shapes->concat = c.concat.shape();
    shapes->output = c.probs.shape();
  }
  return c.probs;
}

// Loss of one example; adds d loss / d probs into `dprobs` when non-empty.
template <typename T>
T mconv_loss(const nn::Tensor<T>& probs, int label, nn::LossKind kind, std::span<T> dprobs) {
  const std::size_t C = probs.size();
  if (label < 0 || static_cast<std::size_t>(label) >= C) {
    throw ContractViolation("label index out of range");
  }
  if (kind == nn::LossKind::kBinary) {
    if (C != 2) throw ContractViolation("binary loss needs exactly 2 classes");
    const nn::Tensor<T> p({1}, std::vector<T>{probs[1]});
    const nn::Tensor<T> y({1}, std::vector<T>{static_cast<T>(label)});
    if (!dprobs.empty()) {
      T d = 0;
      nn::cross_entropy_backward(p, y, kind, std::span<T>(&d, 1));
      dprobs[1] += d;
    }
    return nn::cross_entropy_loss(p, y, kind);
  }
  nn::Tensor<T> y({C});
  y[static_cast<std::size_t>(label)] = T(1);
  if (!dprobs.empty()) nn::cross_entropy_backward(probs, y, kind, dprobs);
  return nn::cross_entropy_loss(probs, y, kind);
}

// Accumulates parameter gradients for one example. The pad row of the
// embedding never receives gradient.
template <typename T>
void mconv_backward(MConvLstmNet<T>& net, const MConvLstmCache<T>& c, std::span<const T> dprobs) {
  const MConvLstmConfig& cfg = net.cfg;
  const std::size_t L = cfg.seq_len, E = cfg.emb_dim, F = cfg.filters_per_channel;
  const std::size_t C = cfg.n_classes, W = net.concat_width();

  nn::Tensor<T> dlogits({C});
  nn::softmax_backward(c.probs, dprobs, dlogits.values());
  nn::Tensor<T> dhead({W});
  nn::dense_backward(c.head_drop.out, net.head_w.tensor, std::span<const T>(dlogits.values()),
                     dhead.values(), net.head_w.tensor.grad(), net.head_b.tensor.grad());
  nn::Tensor<T> dconcat({W});
  nn::dropout_backward(c.head_drop, std::span<const T>(dhead.values()), dconcat.values());

  nn::Tensor<T> demb({L, E});
  for (std::size_t k = 0; k < cfg.kernel_sizes.size(); ++k) {
    const auto& ch = c.channels[k];
    nn::Tensor<T> dpool(ch.pool.out.shape());
    nn::pool_backward(ch.global, std::span<const T>(dconcat.data() + k * F, F), dpool.values());
    nn::Tensor<T> ddrop(ch.conv.shape());
    nn::pool_backward(ch.pool, std::span<const T>(dpool.values()), ddrop.values());
    nn::Tensor<T> dact(ch.conv.shape());
    nn::dropout_backward(ch.drop, std::span<const T>(ddrop.values()), dact.values());
    nn::Tensor<T> dconv(ch.conv.shape());
    nn::relu_backward(ch.conv, std::span<const T>(dact.values()), dconv.values());
    nn::conv1d_backward(c.embedded, net.conv_kernels[k].tensor, dconv, demb.values(),
                        net.conv_kernels[k].tensor.grad(), net.conv_biases[k].tensor.grad());
  }

  const std::size_t S = net.lstm.spatial, H = net.lstm.hidden;
  const std::size_t first = cfg.lstm_readout == LstmReadout::kFinalState ? L - 1 : 0;
  std::vector<T> dsource((L - first) * S * H, T(0));
  nn::pool_backward(c.readout,
                    std::span<const T>(dconcat.data() + cfg.kernel_sizes.size() * F, H),
                    std::span<T>(dsource));
  std::vector<nn::Tensor<T>> dh(L);
  for (std::size_t t = first; t < L; ++t) {
    dh[t] = nn::Tensor<T>({S, H}, std::vector<T>(dsource.begin() + (t - first) * S * H,
                                                  dsource.begin() + (t - first + 1) * S * H));
  }
  const auto dx = c.sequence.backward(dh, net.lstm);
  for (std::size_t t = 0; t < L; ++t) {
    for (std::size_t e = 0; e < E; ++e) demb[t * E + e] += dx[t][e];
  }

  if (!net.embedding.trainable) return;
  auto g = net.embedding.tensor.grad();
  for (std::size_t t = 0; t < L; ++t) {
    const int id = c.ids[t];
    if (id == Vocabulary::kPadId) continue;
    T* row = g.data() + static_cast<std::size_t>(id) * E;
    for (std::size_t e = 0; e < E; ++e) row[e] += demb[t * E + e];
  }
}

// ---------------------------------------------------------------------------
// Trained model (float) and its training loop.

class MConvLstmModel : public Classifier {
 public:
  MConvLstmNet<float> net;
  Vocabulary vocab;
  std::vector<std::string> class_names;
  nlohmann::json embedding_provenance;

  // Known ids, truncated to seq_len, left-padded with the pad id.
  std::vector<int> encode(const std::vector<std::string>& tokens) const;

  std::vector<double> predict_ids(std::span<const int> ids) const;
  std::vector<double> predict_proba(const std::vector<std::string>& tokens) const override;
  const std::vector<std::string>& classes() const override { return class_names; }
  std::string name() const override { return "mconv_lstm"; }
};

// Pretrained init copies vectors for every vocabulary word, resolving words
// absent from `embeddings` through cfg.oov. Throws ConfigError on a
// dimension mismatch or a missing embedding model.
MConvLstmModel build_mconv_lstm(const MConvLstmConfig& cfg, const EmbeddingModel* embeddings,
                                const Vocabulary& vocab, std::uint64_t seed = 1);

LayerShapes layer_shapes(const MConvLstmModel& model);

struct TrainOptions {
  int epochs = 10;
  std::size_t batch_size = 128;
  double learning_rate = 0.01;
  std::uint64_t seed = 1;
  int threads = 1;  // data-parallel replicas, reduced in a fixed order
};

struct TrainHistory {
  std::vector<double> train_loss;
  std::vector<double> valid_loss;
  std::vector<double> valid_macro_f1;
  double wall_seconds = 0.0;
};

// Class names come from `train.classes` and must number cfg.n_classes.
// Throws DataError on an empty training set.
TrainHistory train_model(MConvLstmModel& model, const LabeledDataset& train,
                         const LabeledDataset& valid, const TrainOptions& opts);

// Mean loss and macro-F1 in eval mode.
std::pair<double, double> evaluate_model(const MConvLstmModel& model, const LabeledDataset& data);

// <stem>.bin checkpoint plus <stem>.json sidecar.
void save_mconv_lstm(const std::filesystem::path& stem, const MConvLstmModel& model);
MConvLstmModel load_mconv_lstm(const std::filesystem::path& stem);

}  // namespace textclf

#endif  // TEXTCLF_MODEL_MCONV_LSTM_HPP_
