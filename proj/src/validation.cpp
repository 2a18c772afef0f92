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

#include "textclf/eval/validation.hpp"

#include <algorithm>
#include <cmath>

#include "textclf/error.hpp"
#include "textclf/rng.hpp"

namespace textclf {

HoldoutSplit stratified_holdout(const LabeledDataset& data, std::uint64_t seed) {
  const FoldAssignment folds = stratified_kfold(data, 5, seed);
  return {folds.complement(0), folds.members(0)};
}

void predict_dataset(const Classifier& model, const LabeledDataset& data, std::vector<int>& gold,
                     std::vector<std::vector<double>>& probabilities) {
  if (model.classes() != data.classes) {
    throw ContractViolation("model classes do not match the dataset classes");
  }
  gold = data.labels();
  probabilities.clear();
  for (const TokenizedDocument& d : data.documents) {
    probabilities.push_back(model.predict_proba(d.tokens));
  }
}

double macro_f1_on(const Classifier& model, const LabeledDataset& data) {
  std::vector<int> gold;
  std::vector<std::vector<double>> probs;
  predict_dataset(model, data, gold, probs);
  std::vector<int> pred;
  for (const auto& p : probs) pred.push_back(argmax(p));
  return macro_prf(confusion_matrix(gold, pred, data.classes.size())).f1;
}

namespace {

struct FoldScores {
  double precision, recall, f1, accuracy;
};

FoldScores score_fold(const Classifier& model, const LabeledDataset& valid) {
  std::vector<int> gold;
  std::vector<std::vector<double>> probs;
  predict_dataset(model, valid, gold, probs);
  std::vector<int> pred;
  std::size_t correct = 0;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    pred.push_back(argmax(probs[i]));
    correct += pred.back() == gold[i] ? 1 : 0;
  }
  const MacroPrf prf = macro_prf(confusion_matrix(gold, pred, valid.classes.size()));
  return {prf.precision, prf.recall, prf.f1,
          static_cast<double>(correct) / static_cast<double>(gold.size())};
}

std::unique_ptr<Classifier> train_checked(const Trainer& trainer, const LabeledDataset& data,
                                          std::uint64_t seed) {
  auto model = trainer(data, seed);
  if (!model) throw ContractViolation("trainer returned no model");
  return model;
}

}  // namespace

EvalReport cross_validate(const Trainer& trainer, const LabeledDataset& data, int k,
                          std::uint64_t seed) {
  if (k < 2) throw ContractViolation("cross_validate: k must be >= 2");
  const HoldoutSplit split = stratified_holdout(data, seed);
  const LabeledDataset train = data.subset(split.train);
  const LabeledDataset hold = data.subset(split.holdout);
  const FoldAssignment folds = stratified_kfold(train, k, mix_seed(seed, 0xCF));

  std::vector<double> p, r, f1, acc;
  std::map<std::string, int> assignment;
  for (int f = 0; f < k; ++f) {
    const LabeledDataset fold_train = train.subset(folds.complement(f));
    const LabeledDataset fold_valid = train.subset(folds.members(f));
    for (const TokenizedDocument& d : fold_valid.documents) assignment[d.id] = f;
    const auto model =
        train_checked(trainer, fold_train, mix_seed(seed, static_cast<std::uint64_t>(f) + 1));
    const FoldScores s = score_fold(*model, fold_valid);
    p.push_back(s.precision);
    r.push_back(s.recall);
    f1.push_back(s.f1);
    acc.push_back(s.accuracy);
  }

  const auto final_model = train_checked(trainer, train, seed);
  std::vector<int> gold;
  std::vector<std::vector<double>> probs;
  predict_dataset(*final_model, hold, gold, probs);
  EvalReport report = score_predictions(data.classes, gold, probs);
  report.eval_split = "holdout";
  report.cv_metrics["macro_precision"] = MetricSummary::of(p);
  report.cv_metrics["macro_recall"] = MetricSummary::of(r);
  report.cv_metrics["macro_f1"] = MetricSummary::of(f1);
  report.cv_metrics["accuracy"] = MetricSummary::of(acc);
  report.fold_assignment = std::move(assignment);
  for (const TokenizedDocument& d : hold.documents) report.holdout_ids.push_back(d.id);
  report.config = {{"k", k}, {"model", final_model->name()}, {"n_documents", data.size()}};
  report.seeds = {{"seed", seed}};
  return report;
}

double cv_macro_f1(const Trainer& trainer, const LabeledDataset& data, int k, std::uint64_t seed) {
  if (k < 2) throw ContractViolation("cv_macro_f1: k must be >= 2");
  const FoldAssignment folds = stratified_kfold(data, k, seed);
  double total = 0.0;
  for (int f = 0; f < k; ++f) {
    const auto model = train_checked(trainer, data.subset(folds.complement(f)),
                                     mix_seed(seed, static_cast<std::uint64_t>(f) + 1));
    total += score_fold(*model, data.subset(folds.members(f))).f1;
  }
  return total / static_cast<double>(k);
}

LearningCurve learning_curve(const Trainer& trainer, const LabeledDataset& data,
                             std::span<const double> fractions, std::uint64_t seed) {
  if (fractions.empty()) throw ContractViolation("learning_curve: no fractions");
  for (std::size_t i = 0; i < fractions.size(); ++i) {
    if (!(fractions[i] > 0.0 && fractions[i] <= 1.0) || (i > 0 && fractions[i] <= fractions[i - 1])) {
      throw ContractViolation("learning_curve: fractions must be ascending within (0, 1]");
    }
  }
  const HoldoutSplit split = stratified_holdout(data, seed);
  const LabeledDataset train = data.subset(split.train);
  const LabeledDataset hold = data.subset(split.holdout);

  std::vector<std::vector<std::size_t>> by_class(data.classes.size());
  for (std::size_t i = 0; i < train.size(); ++i) {
    by_class[static_cast<std::size_t>(train.label_of(i))].push_back(i);
  }
  for (std::size_t c = 0; c < by_class.size(); ++c) {
    Rng rng(mix_seed(seed, 0x1C00 + c));
    rng.shuffle(by_class[c].begin(), by_class[c].end());
  }

  LearningCurve curve;
  for (double f : fractions) {
    std::vector<std::size_t> chosen;
    for (std::size_t c = 0; c < by_class.size(); ++c) {
      const auto take = static_cast<std::size_t>(
          std::floor(f * static_cast<double>(by_class[c].size()) + 1e-9));
      if (take == 0) {
        throw DataError("learning_curve: fraction " + std::to_string(f) + " leaves class '" +
                        data.classes[c] + "' without documents");
      }
      chosen.insert(chosen.end(), by_class[c].begin(),
                    by_class[c].begin() + static_cast<std::ptrdiff_t>(take));
    }
    std::sort(chosen.begin(), chosen.end());
    const LabeledDataset sub = train.subset(chosen);
    const auto model = train_checked(trainer, sub, seed);
    curve.points.push_back({f, sub.size(), macro_f1_on(*model, sub), macro_f1_on(*model, hold)});
  }
  return curve;
}

// ---------------------------------------------------------------------------

SearchSpace SearchSpace::from_json(const nlohmann::json& j) {
  if (!j.is_object() || j.empty()) throw ConfigError("search space must be a non-empty object");
  SearchSpace space;
  try {
    for (const auto& [name, spec] : j.items()) {
      if (!spec.is_object() || spec.size() != 1) {
        throw ConfigError("search parameter '" + name + "' needs exactly one range kind");
      }
      ParamRange r;
      r.name = name;
      const std::string kind = spec.begin().key();
      const nlohmann::json& value = spec.begin().value();
      if (kind == "choice") {
        r.kind = ParamRange::Kind::kChoice;
        for (const auto& v : value) r.choices.push_back(v);
      } else {
        if (kind == "uniform") r.kind = ParamRange::Kind::kUniform;
        else if (kind == "log_uniform") r.kind = ParamRange::Kind::kLogUniform;
        else if (kind == "int") r.kind = ParamRange::Kind::kInt;
        else throw ConfigError("unknown range kind '" + kind + "' for '" + name + "'");
        r.lo = value.at(0).get<double>();
        r.hi = value.at(1).get<double>();
      }
      space.params.push_back(std::move(r));
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("search space: ") + e.what());
  }
  return space;
}

nlohmann::json SearchResult::to_json() const {
  nlohmann::json log = nlohmann::json::array();
  for (const Trial& t : trials) {
    log.push_back({{"index", t.index}, {"config", t.config}, {"score", t.score}});
  }
  return {{"best_index", best_index}, {"best_config", best_config}, {"best_score", best_score},
          {"trials", log}};
}

SearchResult random_search(const SearchSpace& space, int trials, const Objective& objective,
                           std::uint64_t seed) {
  if (trials < 1) throw ContractViolation("random_search: trials must be >= 1");
  if (space.params.empty()) throw ContractViolation("random_search: empty search space");
  for (const ParamRange& r : space.params) {
    const bool ok = r.kind == ParamRange::Kind::kChoice
                        ? !r.choices.empty()
                        : (r.lo <= r.hi && (r.kind != ParamRange::Kind::kLogUniform || r.lo > 0));
    if (!ok) throw ContractViolation("random_search: empty or invalid range for '" + r.name + "'");
  }
  SearchResult result;
  for (int t = 0; t < trials; ++t) {
    Rng rng(mix_seed(seed, static_cast<std::uint64_t>(t)));
    nlohmann::json config = nlohmann::json::object();
    for (const ParamRange& r : space.params) {
      switch (r.kind) {
        case ParamRange::Kind::kUniform:
          config[r.name] = rng.uniform(r.lo, r.hi);
          break;
        case ParamRange::Kind::kLogUniform:
          config[r.name] = std::exp(rng.uniform(std::log(r.lo), std::log(r.hi)));
          break;
        case ParamRange::Kind::kInt: {
          const auto lo = static_cast<std::int64_t>(std::ceil(r.lo));
          const auto hi = static_cast<std::int64_t>(std::floor(r.hi));
          if (hi < lo) throw ContractViolation("random_search: empty integer range '" + r.name + "'");
          config[r.name] = lo + static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(hi - lo + 1)));
          break;
        }
        case ParamRange::Kind::kChoice:
          config[r.name] = r.choices[rng.below(r.choices.size())];
          break;
      }
    }
    const double score = objective(config, seed);
    result.trials.push_back({static_cast<std::size_t>(t), config, score});
    if (t == 0 || score > result.best_score) {
      result.best_index = static_cast<std::size_t>(t);
      result.best_config = config;
      result.best_score = score;
    }
  }
  return result;
}

}  // namespace textclf
