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


#ifndef TEXTCLF_MODEL_BASELINES_HPP_
#define TEXTCLF_MODEL_BASELINES_HPP_

#include <span>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "textclf/corpus.hpp"
#include "textclf/model/classifier.hpp"

namespace textclf {

struct TfidfConfig {
  // Character n-grams over the space-joined document; 0 disables.
  int char_ngram_min = 2;
  int char_ngram_max = 4;
  bool word_unigrams = true;
};

struct SparseRow {
  std::vector<std::pair<std::size_t, double>> entries;  // ascending index
};

struct SparseMatrix {
  std::size_t cols = 0;
  std::vector<SparseRow> rows;
};

// Raw feature counts ("c:<ngram>", "w:<word>"), sorted by feature string.
std::vector<std::pair<std::string, double>> raw_features(const std::vector<std::string>& tokens,
                                                         const TfidfConfig& cfg);

struct TfidfModel {
  TfidfConfig cfg;
  std::vector<std::string> features;  // sorted; position = column
  std::vector<double> idf;
  std::size_t n_docs = 0;

  // Unseen features are dropped. Rows are L2-normalized (all-zero rows stay zero).
  SparseRow transform(const std::vector<std::string>& tokens) const;
  nlohmann::json to_json() const;
  static TfidfModel from_json(const nlohmann::json& j);
};

// idf = ln((1 + N) / (1 + df)) + 1. Throws DataError on an empty corpus.
TfidfModel fit_tfidf(std::span<const TokenizedDocument> docs, const TfidfConfig& cfg);
SparseMatrix tfidf_features(std::span<const TokenizedDocument> docs, const TfidfConfig& cfg);

enum class BaselineKind { kLogReg, kMultinomialNb, kKnn };

std::string to_string(BaselineKind kind);
BaselineKind parse_baseline_kind(std::string_view name);

struct BaselineOptions {
  double l2 = 1e-4;
  int iterations = 300;
  double learning_rate = 1.0;
  double nb_alpha = 1.0;
  int knn_k = 5;
};

struct BaselineModel {
  BaselineKind kind = BaselineKind::kLogReg;
  std::size_t n_features = 0;
  std::size_t n_classes = 0;
  BaselineOptions options;
  // logreg: weights n_features x n_classes, bias n_classes.
  std::vector<double> weights;
  std::vector<double> bias;
  // NB: log priors and log feature likelihoods (n_classes x n_features).
  std::vector<double> log_prior;
  std::vector<double> log_likelihood;
  // knn
  std::vector<SparseRow> instances;
  std::vector<int> instance_labels;

  std::vector<double> predict_proba(const SparseRow& x) const;
  nlohmann::json to_json() const;
  static BaselineModel from_json(const nlohmann::json& j);
};

// Labels are class indices in [0, n_classes). Throws DataError for a
// single-class training set (logreg, NB) or a row/label count mismatch.
BaselineModel train_baseline(const SparseMatrix& features, std::span<const int> labels,
                             std::size_t n_classes, BaselineKind kind,
                             const BaselineOptions& options = {});

// tf-idf front end plus a baseline, usable wherever a Classifier is.
class BaselineClassifier : public Classifier {
 public:
  TfidfModel tfidf;
  BaselineModel model;
  std::vector<std::string> class_names;

  std::vector<double> predict_proba(const std::vector<std::string>& tokens) const override;
  const std::vector<std::string>& classes() const override { return class_names; }
  std::string name() const override { return to_string(model.kind); }
  nlohmann::json to_json() const;
  static BaselineClassifier from_json(const nlohmann::json& j);
};

BaselineClassifier train_baseline_classifier(const LabeledDataset& data, BaselineKind kind,
                                             const TfidfConfig& tfidf = {},
                                             const BaselineOptions& options = {});

}  // namespace textclf

#endif  // TEXTCLF_MODEL_BASELINES_HPP_
