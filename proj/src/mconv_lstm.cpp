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

#include "textclf/model/mconv_lstm.hpp"

#include <chrono>
#include <numeric>
#include <thread>

#include "textclf/eval/metrics.hpp"
#include "textclf/hash.hpp"
#include "textclf/nn/adagrad.hpp"
#include "textclf/nn/checkpoint.hpp"
#include "textclf/serialize.hpp"

namespace textclf {

namespace {

std::string oov_name(OovStrategy s) {
  switch (s) {
    case OovStrategy::kError: return "error";
    case OovStrategy::kUniform: return "uniform";
    case OovStrategy::kRandomInVocab: return "random_invocab";
    case OovStrategy::kSubword: return "subword";
  }
  return "error";
}

}  // namespace

void MConvLstmConfig::validate() const {
  auto positive = [](std::size_t v, const char* what) {
    if (v == 0) throw ConfigError(std::string(what) + " must be positive");
  };
  positive(seq_len, "seq_len");
  positive(emb_dim, "emb_dim");
  positive(filters_per_channel, "filters_per_channel");
  positive(pool, "pool");
  positive(lstm_units, "lstm_units");
  if (kernel_sizes.empty()) throw ConfigError("kernel_sizes must be non-empty");
  for (std::size_t k : kernel_sizes) positive(k, "kernel size");
  if (n_classes < 2) throw ConfigError("n_classes must be >= 2");
  if (!(dropout_rate >= 0.0 && dropout_rate < 1.0)) {
    throw ConfigError("dropout_rate must be in [0, 1)");
  }
  if (!(noise_sigma >= 0.0)) throw ConfigError("noise_sigma must be >= 0");
  if (loss == nn::LossKind::kBinary && n_classes != 2) {
    throw ConfigError("binary loss needs n_classes == 2");
  }
  if (lstm_mode == nn::LstmMode::kConvolutional && lstm_kernel % 2 == 0) {
    throw ConfigError("lstm_kernel must be odd");
  }
}

nlohmann::json MConvLstmConfig::to_json() const {
  return {{"seq_len", seq_len},
          {"emb_dim", emb_dim},
          {"kernel_sizes", kernel_sizes},
          {"filters_per_channel", filters_per_channel},
          {"pool", pool},
          {"lstm_units", lstm_units},
          {"dropout_rate", dropout_rate},
          {"noise_sigma", noise_sigma},
          {"n_classes", n_classes},
          {"embedding_init", embedding_init == EmbeddingInit::kRandom ? "random" : "pretrained"},
          {"freeze_embeddings", freeze_embeddings},
          {"lstm_mode", lstm_mode == nn::LstmMode::kDense ? "dense" : "convolutional"},
          {"lstm_kernel", lstm_kernel},
          {"lstm_peephole", lstm_peephole},
          {"lstm_readout", lstm_readout == LstmReadout::kFinalState ? "final" : "temporal_max"},
          {"loss", loss == nn::LossKind::kCategorical ? "categorical" : "binary"},
          {"oov", oov_name(oov)}};
}

MConvLstmConfig MConvLstmConfig::from_json(const nlohmann::json& j) {
  MConvLstmConfig c;
  try {
    auto opt = [&j](const char* key, auto& field) {
      if (j.contains(key)) field = j.at(key).get<std::decay_t<decltype(field)>>();
    };
    opt("seq_len", c.seq_len);
    opt("emb_dim", c.emb_dim);
    opt("kernel_sizes", c.kernel_sizes);
    opt("filters_per_channel", c.filters_per_channel);
    opt("pool", c.pool);
    opt("lstm_units", c.lstm_units);
    opt("dropout_rate", c.dropout_rate);
    opt("noise_sigma", c.noise_sigma);
    opt("n_classes", c.n_classes);
    opt("freeze_embeddings", c.freeze_embeddings);
    opt("lstm_kernel", c.lstm_kernel);
    opt("lstm_peephole", c.lstm_peephole);
    std::string s;
    if (j.contains("embedding_init")) {
      s = j.at("embedding_init").get<std::string>();
      if (s != "random" && s != "pretrained") throw ConfigError("unknown embedding_init '" + s + "'");
      c.embedding_init = s == "random" ? EmbeddingInit::kRandom : EmbeddingInit::kPretrained;
    }
    if (j.contains("lstm_mode")) {
      s = j.at("lstm_mode").get<std::string>();
      if (s != "dense" && s != "convolutional") throw ConfigError("unknown lstm_mode '" + s + "'");
      c.lstm_mode = s == "dense" ? nn::LstmMode::kDense : nn::LstmMode::kConvolutional;
    }
    if (j.contains("lstm_readout")) {
      s = j.at("lstm_readout").get<std::string>();
      if (s != "final" && s != "temporal_max") throw ConfigError("unknown lstm_readout '" + s + "'");
      c.lstm_readout = s == "final" ? LstmReadout::kFinalState : LstmReadout::kTemporalMax;
    }
    if (j.contains("loss")) {
      s = j.at("loss").get<std::string>();
      if (s != "categorical" && s != "binary") throw ConfigError("unknown loss '" + s + "'");
      c.loss = s == "categorical" ? nn::LossKind::kCategorical : nn::LossKind::kBinary;
    }
    if (j.contains("oov")) c.oov = parse_oov_strategy(j.at("oov").get<std::string>());
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("model config: ") + e.what());
  }
  c.validate();
  return c;
}

// ---------------------------------------------------------------------------

std::vector<int> MConvLstmModel::encode(const std::vector<std::string>& tokens) const {
  const std::size_t L = net.cfg.seq_len;
  std::vector<int> ids = encode_document(tokens, vocab, L);
  const auto real = static_cast<std::size_t>(
      std::find(ids.begin(), ids.end(), Vocabulary::kPadId) - ids.begin());
  std::rotate(ids.begin(), ids.begin() + static_cast<std::ptrdiff_t>(real), ids.end());
  return ids;
}

std::vector<double> MConvLstmModel::predict_ids(std::span<const int> ids) const {
  const nn::Tensor<float> p = mconv_forward<float>(net, ids, false, nullptr);
  return {p.values().begin(), p.values().end()};
}

std::vector<double> MConvLstmModel::predict_proba(const std::vector<std::string>& tokens) const {
  return predict_ids(encode(tokens));
}

MConvLstmModel build_mconv_lstm(const MConvLstmConfig& cfg, const EmbeddingModel* embeddings,
                                const Vocabulary& vocab, std::uint64_t seed) {
  cfg.validate();
  MConvLstmModel m;
  Rng rng(mix_seed(seed, 0x4D434C));
  m.net = MConvLstmNet<float>::create(cfg, vocab.size() + 1, rng);
  m.vocab = vocab;
  m.embedding_provenance = {{"source", "random"}, {"seed", seed}};
  if (cfg.embedding_init == EmbeddingInit::kPretrained) {
    if (embeddings == nullptr) throw ConfigError("pretrained init requested without embeddings");
    if (embeddings->dim != cfg.emb_dim) {
      throw ConfigError("embedding dim " + std::to_string(embeddings->dim) +
                        " does not match emb_dim " + std::to_string(cfg.emb_dim));
    }
    std::size_t oov = 0;
    const std::size_t E = cfg.emb_dim;
    for (std::size_t id = 1; id <= vocab.size(); ++id) {
      const std::string& w = vocab.token(static_cast<int>(id));
      if (!embeddings->vocab.id(w)) ++oov;
      const std::vector<float> v = word_vector(*embeddings, w, cfg.oov);
      std::copy(v.begin(), v.end(), m.net.embedding.tensor.data() + id * E);
    }
    m.embedding_provenance = {{"source", "pretrained"},
                              {"kind", to_string(embeddings->kind)},
                              {"dim", embeddings->dim},
                              {"vocab_fingerprint", hex64(embeddings->vocab.fingerprint())},
                              {"oov_strategy", oov_name(cfg.oov)},
                              {"oov_words", oov},
                              {"seed", seed}};
  }
  return m;
}

LayerShapes layer_shapes(const MConvLstmModel& model) {
  LayerShapes shapes;
  const std::vector<int> pad(model.net.cfg.seq_len, Vocabulary::kPadId);
  mconv_forward<float>(model.net, pad, false, nullptr, nullptr, &shapes);
  return shapes;
}

// ---------------------------------------------------------------------------

namespace {

struct Encoded {
  std::vector<std::vector<int>> ids;
  std::vector<int> labels;
};

Encoded encode_set(const MConvLstmModel& model, const LabeledDataset& ds) {
  Encoded e;
  const auto& names = model.class_names;
  for (const TokenizedDocument& d : ds.documents) {
    e.ids.push_back(model.encode(d.tokens));
    if (!d.label) throw DataError("document '" + d.id + "' has no label");
    auto it = std::find(names.begin(), names.end(), *d.label);
    if (it == names.end()) throw DataError("unknown label '" + *d.label + "'");
    e.labels.push_back(static_cast<int>(it - names.begin()));
  }
  return e;
}

std::pair<double, double> evaluate_encoded(const MConvLstmModel& model, const Encoded& e) {
  if (e.ids.empty()) return {0.0, 0.0};
  double loss = 0.0;
  std::vector<int> pred;
  for (std::size_t i = 0; i < e.ids.size(); ++i) {
    const auto p = mconv_forward<float>(model.net, e.ids[i], false, nullptr);
    loss += mconv_loss<float>(p, e.labels[i], model.net.cfg.loss, {});
    std::vector<double> pd(p.values().begin(), p.values().end());
    pred.push_back(argmax(pd));
  }
  const auto cm = confusion_matrix(e.labels, pred, model.net.cfg.n_classes);
  return {loss / static_cast<double>(e.ids.size()), macro_prf(cm).f1};
}

// Forward/backward over examples [begin, end) of `order`, accumulating into
// net's gradients. Returns the summed loss.
double accumulate_range(MConvLstmNet<float>& net, const Encoded& data,
                        const std::vector<std::size_t>& order, std::size_t begin,
                        std::size_t end, std::uint64_t epoch_seed) {
  double loss = 0.0;
  MConvLstmCache<float> cache;
  std::vector<float> dprobs(net.cfg.n_classes);
  for (std::size_t pos = begin; pos < end; ++pos) {
    const std::size_t i = order[pos];
    Rng rng(mix_seed(epoch_seed, pos));
    const auto probs = mconv_forward<float>(net, data.ids[i], true, &rng, &cache);
    std::fill(dprobs.begin(), dprobs.end(), 0.0f);
    loss += mconv_loss<float>(probs, data.labels[i], net.cfg.loss, dprobs);
    mconv_backward<float>(net, cache, dprobs);
  }
  return loss;
}

}  // namespace

std::pair<double, double> evaluate_model(const MConvLstmModel& model, const LabeledDataset& data) {
  return evaluate_encoded(model, encode_set(model, data));
}

TrainHistory train_model(MConvLstmModel& model, const LabeledDataset& train,
                         const LabeledDataset& valid, const TrainOptions& opts) {
  if (train.size() == 0) throw DataError("empty training set");
  if (opts.epochs < 0 || opts.batch_size == 0 || opts.threads < 1 ||
      !(opts.learning_rate >= 0.0)) {
    throw ContractViolation("train_model: invalid options");
  }
  if (model.class_names.empty()) model.class_names = train.classes;
  if (model.class_names.size() != model.net.cfg.n_classes) {
    throw ConfigError("training data has " + std::to_string(model.class_names.size()) +
                      " classes, model expects " + std::to_string(model.net.cfg.n_classes));
  }
  const Encoded tr = encode_set(model, train);
  const Encoded va = encode_set(model, valid);
  const auto start = std::chrono::steady_clock::now();
  TrainHistory history;
  nn::Adagrad<float> optimizer(opts.learning_rate);
  auto params = model.net.parameters();
  const std::size_t n = tr.ids.size();
  const auto threads = static_cast<std::size_t>(opts.threads);
  std::vector<MConvLstmNet<float>> replicas;

  for (int epoch = 0; epoch < opts.epochs; ++epoch) {
    const std::uint64_t epoch_seed = mix_seed(opts.seed, static_cast<std::uint64_t>(epoch));
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    Rng shuffle_rng(epoch_seed);
    shuffle_rng.shuffle(order.begin(), order.end());
    double epoch_loss = 0.0;
    for (std::size_t b = 0; b < n; b += opts.batch_size) {
      const std::size_t e = std::min(n, b + opts.batch_size);
      model.net.zero_grad();
      if (threads == 1) {
        epoch_loss += accumulate_range(model.net, tr, order, b, e, epoch_seed);
      } else {
        replicas.assign(threads, model.net);
        std::vector<double> losses(threads, 0.0);
        std::vector<std::thread> workers;
        const std::size_t chunk = (e - b + threads - 1) / threads;
        for (std::size_t w = 0; w < threads; ++w) {
          const std::size_t lo = std::min(e, b + w * chunk), hi = std::min(e, lo + chunk);
          workers.emplace_back([&, w, lo, hi] {
            losses[w] = accumulate_range(replicas[w], tr, order, lo, hi, epoch_seed);
          });
        }
        for (auto& t : workers) t.join();
        for (std::size_t w = 0; w < threads; ++w) {
          epoch_loss += losses[w];
          auto rp = replicas[w].parameters();
          for (std::size_t p = 0; p < params.size(); ++p) {
            auto dst = params[p]->tensor.grad();
            auto src = rp[p]->tensor.grad();
            for (std::size_t i = 0; i < dst.size(); ++i) dst[i] += src[i];
          }
        }
      }
      const float scale = 1.0f / static_cast<float>(e - b);
      for (auto* p : params) {
        for (float& g : p->tensor.grad()) g *= scale;
      }
      optimizer.step(params);
    }
    for (auto* p : params) p->tensor.check_finite(p->name.c_str());
    history.train_loss.push_back(epoch_loss / static_cast<double>(n));
    const auto [vloss, vf1] = evaluate_encoded(model, va);
    history.valid_loss.push_back(vloss);
    history.valid_macro_f1.push_back(vf1);
  }
  history.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return history;
}

// ---------------------------------------------------------------------------

void save_mconv_lstm(const std::filesystem::path& stem, const MConvLstmModel& model) {
  auto& net = const_cast<MConvLstmNet<float>&>(model.net);
  std::vector<nn::NamedTensor> tensors;
  for (const auto* p : net.parameters()) {
    const auto v = p->tensor.values();
    tensors.push_back({p->name, p->tensor.shape(), std::vector<float>(v.begin(), v.end())});
  }
  std::filesystem::path bin = stem, json_path = stem;
  bin += ".bin";
  json_path += ".json";
  nn::write_checkpoint(bin, tensors);
  nlohmann::json j = nn::checkpoint_manifest(tensors);
  j["config"] = model.net.cfg.to_json();
  j["classes"] = model.class_names;
  j["vocabulary"] = vocabulary_to_json(model.vocab);
  j["vocab_fingerprint"] = hex64(model.vocab.fingerprint());
  j["embedding_provenance"] = model.embedding_provenance;
  write_json_file(json_path, j);
}

MConvLstmModel load_mconv_lstm(const std::filesystem::path& stem) {
  std::filesystem::path bin = stem, json_path = stem;
  bin += ".bin";
  json_path += ".json";
  const nlohmann::json j = read_json_file(json_path);
  MConvLstmModel m;
  try {
    const MConvLstmConfig cfg = MConvLstmConfig::from_json(j.at("config"));
    m.vocab = vocabulary_from_json(j.at("vocabulary"));
    m.class_names = j.at("classes").get<std::vector<std::string>>();
    m.embedding_provenance = j.at("embedding_provenance");
    Rng rng(0);
    m.net = MConvLstmNet<float>::create(cfg, m.vocab.size() + 1, rng);
  } catch (const nlohmann::json::exception& e) {
    throw IoError(json_path.string() + ": " + e.what());
  }
  const auto tensors = nn::read_checkpoint(bin);
  for (auto* p : m.net.parameters()) {
    const nn::NamedTensor& t = nn::find_tensor(tensors, p->name);
    if (t.shape != p->tensor.shape()) {
      throw IoError(bin.string() + ": tensor '" + p->name + "' has shape " +
                    nn::shape_string(t.shape) + ", expected " +
                    nn::shape_string(p->tensor.shape()));
    }
    std::copy(t.values.begin(), t.values.end(), p->tensor.values().begin());
  }
  return m;
}

}  // namespace textclf
