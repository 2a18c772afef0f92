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


#ifndef TEXTCLF_MODEL_FASTTEXT_HPP_
#define TEXTCLF_MODEL_FASTTEXT_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "textclf/corpus.hpp"
#include "textclf/error.hpp"
#include "textclf/model/classifier.hpp"

namespace textclf {

struct FastTextSpec {
  std::size_t dim = 10;
  int epochs = 5;
  double learning_rate = 0.1;
  std::uint64_t seed = 1;
  bool bigrams = false;
  std::uint32_t bigram_buckets = 1u << 16;
};

// Loss of one document: -log softmax(B * mean(A[ids]))[label].
// A is rows x dim, B is classes x dim, both row-major. Gradients are added
// into dA / dB when those are non-empty. An empty id list gives a zero
// document vector.
template <typename T>
T fasttext_loss(std::span<const T> A, std::span<const T> B, std::size_t dim,
                std::span<const int> ids, int label, std::span<T> dA, std::span<T> dB) {
  const std::size_t C = B.size() / dim;
  if (label < 0 || static_cast<std::size_t>(label) >= C) {
    throw ContractViolation("fasttext: label index out of range");
  }
  std::vector<T> h(dim, T(0));
  const T inv = ids.empty() ? T(0) : T(1) / static_cast<T>(ids.size());
  for (int id : ids) {
    for (std::size_t k = 0; k < dim; ++k) h[k] += A[static_cast<std::size_t>(id) * dim + k] * inv;
  }
  std::vector<T> z(C, T(0));
  for (std::size_t c = 0; c < C; ++c) {
    for (std::size_t k = 0; k < dim; ++k) z[c] += B[c * dim + k] * h[k];
  }
  const T zmax = *std::max_element(z.begin(), z.end());
  T total = 0;
  for (T& v : z) {
    v = std::exp(v - zmax);
    total += v;
  }
  for (T& v : z) v /= total;  // z now holds probabilities
  const T loss = -std::log(std::max(z[static_cast<std::size_t>(label)], T(1e-300)));
  if (dA.empty() && dB.empty()) return loss;
  z[static_cast<std::size_t>(label)] -= T(1);  // d loss / d logits
  std::vector<T> dh(dim, T(0));
  for (std::size_t c = 0; c < C; ++c) {
    for (std::size_t k = 0; k < dim; ++k) {
      if (!dB.empty()) dB[c * dim + k] += z[c] * h[k];
      dh[k] += z[c] * B[c * dim + k];
    }
  }
  if (!dA.empty()) {
    for (int id : ids) {
      for (std::size_t k = 0; k < dim; ++k) dA[static_cast<std::size_t>(id) * dim + k] += dh[k] * inv;
    }
  }
  return loss;
}

class FastTextClassifier : public Classifier {
 public:
  FastTextSpec spec;
  Vocabulary vocab;
  std::vector<std::string> class_names;
  std::vector<float> A;  // (V + 1 [+ bigram buckets]) x dim
  std::vector<float> B;  // classes x dim
  std::vector<double> epoch_loss;

  // Word ids (unknown words skipped) followed by hashed bigram rows.
  std::vector<int> ids(const std::vector<std::string>& tokens) const;
  std::vector<double> predict_proba(const std::vector<std::string>& tokens) const override;
  const std::vector<std::string>& classes() const override { return class_names; }
  std::string name() const override { return "fasttext"; }
  // Mean document loss over a labeled set.
  double loss(const LabeledDataset& data) const;

  nlohmann::json to_json() const;
  static FastTextClassifier from_json(const nlohmann::json& j);
};

// A ~ U(-1/dim, 1/dim), B = 0 (so the untrained loss is ln C), pad row zero.
FastTextClassifier init_fasttext(const LabeledDataset& docs, const Vocabulary& vocab,
                                 const FastTextSpec& spec);

// Per-document AdaGrad on the averaged-embedding softmax loss.
// Throws DataError on an empty dataset.
FastTextClassifier fasttext_linear_classifier(const LabeledDataset& docs,
                                              const Vocabulary& vocab, const FastTextSpec& spec);

}  // namespace textclf

#endif  // TEXTCLF_MODEL_FASTTEXT_HPP_
