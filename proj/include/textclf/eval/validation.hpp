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


#ifndef TEXTCLF_EVAL_VALIDATION_HPP_
#define TEXTCLF_EVAL_VALIDATION_HPP_

#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "textclf/corpus.hpp"
#include "textclf/eval/report.hpp"
#include "textclf/model/classifier.hpp"

namespace textclf {

using Trainer =
    std::function<std::unique_ptr<Classifier>(const LabeledDataset& train, std::uint64_t seed)>;

struct HoldoutSplit {
  std::vector<std::size_t> train;    // ascending dataset indices
  std::vector<std::size_t> holdout;  // ascending dataset indices
};

// Stratified 80/20: the hold-out is fold 0 of a stratified 5-fold split.
HoldoutSplit stratified_holdout(const LabeledDataset& data, std::uint64_t seed);

// Predicted distributions and gold class indices (in data.classes order)
// for every document of `data`.
void predict_dataset(const Classifier& model, const LabeledDataset& data,
                     std::vector<int>& gold, std::vector<std::vector<double>>& probabilities);

double macro_f1_on(const Classifier& model, const LabeledDataset& data);

// Outer stratified 80/20 split; stratified k-fold CV on the 80% (fold
// metrics summarized as mean and std); a final model trained on the whole
// 80% is scored on the hold-out. Fold f trains with mix_seed(seed, f + 1),
// the final model with `seed`.
EvalReport cross_validate(const Trainer& trainer, const LabeledDataset& data, int k,
                          std::uint64_t seed);

// Mean macro-F1 of a plain stratified k-fold CV over `data`.
double cv_macro_f1(const Trainer& trainer, const LabeledDataset& data, int k, std::uint64_t seed);

// Training fractions of the 80% split (per-class prefixes of a seeded
// shuffle); validation on the hold-out. Throws DataError when a fraction
// leaves a class without documents and ContractViolation for fractions not
// in (0, 1] ascending.
LearningCurve learning_curve(const Trainer& trainer, const LabeledDataset& data,
                             std::span<const double> fractions, std::uint64_t seed);

struct ParamRange {
  enum class Kind { kUniform, kLogUniform, kInt, kChoice };
  std::string name;
  Kind kind = Kind::kUniform;
  double lo = 0.0;
  double hi = 1.0;
  std::vector<nlohmann::json> choices;
};

struct SearchSpace {
  std::vector<ParamRange> params;

  // {"name": {"uniform": [lo, hi]} | {"log_uniform": [lo, hi]} |
  //  {"int": [lo, hi]} | {"choice": [...]}}
  static SearchSpace from_json(const nlohmann::json& j);
};

struct Trial {
  std::size_t index = 0;
  nlohmann::json config;
  double score = 0.0;
};

struct SearchResult {
  std::size_t best_index = 0;
  nlohmann::json best_config;
  double best_score = 0.0;
  std::vector<Trial> trials;

  nlohmann::json to_json() const;
};

using Objective = std::function<double(const nlohmann::json& config, std::uint64_t seed)>;

// Samples each trial's config independently from mix_seed(seed, trial);
// the first trial wins ties.
SearchResult random_search(const SearchSpace& space, int trials, const Objective& objective,
                           std::uint64_t seed);

}  // namespace textclf

#endif  // TEXTCLF_EVAL_VALIDATION_HPP_
