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

#include "textclf/model/fasttext.hpp"

#include <numeric>

#include "textclf/hash.hpp"
#include "textclf/rng.hpp"
#include "textclf/serialize.hpp"

namespace textclf {

std::vector<int> FastTextClassifier::ids(const std::vector<std::string>& tokens) const {
  std::vector<int> out;
  for (const std::string& t : tokens) {
    if (auto id = vocab.id(t)) out.push_back(*id);
  }
  if (spec.bigrams) {
    const auto base = static_cast<int>(vocab.size() + 1);
    for (std::size_t i = 0; i + 1 < tokens.size(); ++i) {
      const std::uint32_t b = fnv1a32(tokens[i] + " " + tokens[i + 1]) % spec.bigram_buckets;
      out.push_back(base + static_cast<int>(b));
    }
  }
  return out;
}

std::vector<double> FastTextClassifier::predict_proba(const std::vector<std::string>& tokens) const {
  const std::vector<int> doc = ids(tokens);
  std::vector<double> p;
  for (std::size_t c = 0; c < class_names.size(); ++c) {
    // probability of c is exp(-loss(c))
    const double l = fasttext_loss<float>(A, B, spec.dim, doc, static_cast<int>(c), {}, {});
    p.push_back(std::exp(-l));
  }
  const double total = std::accumulate(p.begin(), p.end(), 0.0);
  for (double& v : p) v /= total;
  return p;
}

double FastTextClassifier::loss(const LabeledDataset& data) const {
  if (data.size() == 0) throw DataError("fasttext: empty dataset");
  double total = 0.0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    const auto it = std::find(class_names.begin(), class_names.end(), *data.documents[i].label);
    if (it == class_names.end()) throw DataError("unknown label '" + *data.documents[i].label + "'");
    total += fasttext_loss<float>(A, B, spec.dim, ids(data.documents[i].tokens),
                                  static_cast<int>(it - class_names.begin()), {}, {});
  }
  return total / static_cast<double>(data.size());
}

nlohmann::json FastTextClassifier::to_json() const {
  return {{"dim", spec.dim},
          {"epochs", spec.epochs},
          {"learning_rate", spec.learning_rate},
          {"seed", spec.seed},
          {"bigrams", spec.bigrams},
          {"bigram_buckets", spec.bigram_buckets},
          {"vocabulary", vocabulary_to_json(vocab)},
          {"classes", class_names},
          {"A", A},
          {"B", B},
          {"epoch_loss", epoch_loss}};
}

FastTextClassifier FastTextClassifier::from_json(const nlohmann::json& j) {
  FastTextClassifier m;
  try {
    m.spec.dim = j.at("dim").get<std::size_t>();
    m.spec.epochs = j.at("epochs").get<int>();
    m.spec.learning_rate = j.at("learning_rate").get<double>();
    m.spec.seed = j.at("seed").get<std::uint64_t>();
    m.spec.bigrams = j.at("bigrams").get<bool>();
    m.spec.bigram_buckets = j.at("bigram_buckets").get<std::uint32_t>();
    m.vocab = vocabulary_from_json(j.at("vocabulary"));
    m.class_names = j.at("classes").get<std::vector<std::string>>();
    m.A = j.at("A").get<std::vector<float>>();
    m.B = j.at("B").get<std::vector<float>>();
    m.epoch_loss = j.at("epoch_loss").get<std::vector<double>>();
  } catch (const nlohmann::json::exception& e) {
    throw IoError(std::string("malformed fastText model: ") + e.what());
  }
  return m;
}

FastTextClassifier init_fasttext(const LabeledDataset& docs, const Vocabulary& vocab,
                                 const FastTextSpec& spec) {
  if (spec.dim == 0 || spec.epochs < 0 || (spec.bigrams && spec.bigram_buckets == 0)) {
    throw ContractViolation("fasttext: invalid spec");
  }
  FastTextClassifier m;
  m.spec = spec;
  m.vocab = vocab;
  m.class_names = docs.classes;
  if (m.class_names.size() < 2) throw DataError("fasttext: need at least 2 classes");
  const std::size_t rows = vocab.size() + 1 + (spec.bigrams ? spec.bigram_buckets : 0);
  m.A.assign(rows * spec.dim, 0.0f);
  Rng rng(mix_seed(spec.seed, 0xFA57));
  const double a = 1.0 / static_cast<double>(spec.dim);
  for (std::size_t i = spec.dim; i < m.A.size(); ++i) m.A[i] = static_cast<float>(rng.uniform(-a, a));
  m.B.assign(m.class_names.size() * spec.dim, 0.0f);
  return m;
}

FastTextClassifier fasttext_linear_classifier(const LabeledDataset& docs, const Vocabulary& vocab,
                                              const FastTextSpec& spec) {
  if (docs.size() == 0) throw DataError("fasttext: empty dataset");
  FastTextClassifier m = init_fasttext(docs, vocab, spec);
  std::vector<std::vector<int>> encoded;
  std::vector<int> labels = docs.labels();
  for (const TokenizedDocument& d : docs.documents) encoded.push_back(m.ids(d.tokens));

  const float lr = static_cast<float>(spec.learning_rate);
  constexpr float kEps = 1e-8f;
  std::vector<float> accA(m.A.size(), 0.0f), accB(m.B.size(), 0.0f);
  std::vector<float> dA(m.A.size(), 0.0f), dB(m.B.size(), 0.0f);
  std::vector<std::size_t> order(encoded.size());
  for (int epoch = 0; epoch < spec.epochs; ++epoch) {
    std::iota(order.begin(), order.end(), 0);
    Rng rng(mix_seed(spec.seed, static_cast<std::uint64_t>(epoch)));
    rng.shuffle(order.begin(), order.end());
    double total = 0.0;
    for (std::size_t i : order) {
      const std::vector<int>& doc = encoded[i];
      total += fasttext_loss<float>(m.A, m.B, spec.dim, doc, labels[i], dA, dB);
      for (std::size_t j = 0; j < m.B.size(); ++j) {
        if (dB[j] == 0.0f) continue;
        accB[j] += dB[j] * dB[j];
        m.B[j] -= lr * dB[j] / (std::sqrt(accB[j]) + kEps);
        dB[j] = 0.0f;
      }
      for (int id : doc) {  // repeated ids: first visit applies and clears
        for (std::size_t k = 0; k < spec.dim; ++k) {
          float& g = dA[static_cast<std::size_t>(id) * spec.dim + k];
          if (g == 0.0f) continue;
          float& acc = accA[static_cast<std::size_t>(id) * spec.dim + k];
          acc += g * g;
          m.A[static_cast<std::size_t>(id) * spec.dim + k] -= lr * g / (std::sqrt(acc) + kEps);
          g = 0.0f;
        }
      }
    }
    m.epoch_loss.push_back(total / static_cast<double>(encoded.size()));
  }
  return m;
}

}  // namespace textclf
