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

#include "textclf/model/ensemble.hpp"

#include <algorithm>
#include <numeric>

#include "textclf/error.hpp"

namespace textclf {

std::vector<double> ensemble_average(const std::vector<std::vector<double>>& distributions) {
  if (distributions.empty()) throw ContractViolation("ensemble: empty member list");
  std::vector<double> mean(distributions.front().size(), 0.0);
  for (const auto& d : distributions) {
    if (d.size() != mean.size()) {
      throw ContractViolation("ensemble: members disagree on the number of classes");
    }
    for (std::size_t c = 0; c < d.size(); ++c) mean[c] += d[c];
  }
  for (double& v : mean) v /= static_cast<double>(distributions.size());
  return mean;
}

std::vector<double> ensemble_average(std::span<const Classifier* const> members,
                                     const std::vector<std::string>& tokens) {
  if (members.empty()) throw ContractViolation("ensemble: empty member list");
  std::vector<std::vector<double>> dists;
  for (const Classifier* m : members) {
    if (m->classes() != members.front()->classes()) {
      throw ContractViolation("ensemble: members do not share the class set");
    }
    dists.push_back(m->predict_proba(tokens));
  }
  return ensemble_average(dists);
}

std::vector<std::size_t> select_top_k(std::span<const double> scores, std::size_t k) {
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });
  if (order.size() > k) order.resize(k);
  return order;
}

EnsembleClassifier::EnsembleClassifier(std::vector<std::shared_ptr<const Classifier>> members)
    : members_(std::move(members)) {
  if (members_.empty()) throw ContractViolation("ensemble: empty member list");
  for (const auto& m : members_) {
    if (m->classes() != members_.front()->classes()) {
      throw ContractViolation("ensemble: members do not share the class set");
    }
  }
}

std::vector<double> EnsembleClassifier::predict_proba(const std::vector<std::string>& tokens) const {
  std::vector<const Classifier*> raw;
  for (const auto& m : members_) raw.push_back(m.get());
  return ensemble_average(raw, tokens);
}

const std::vector<std::string>& EnsembleClassifier::classes() const {
  return members_.front()->classes();
}

std::string EnsembleClassifier::name() const {
  std::string out = "ensemble(";
  for (std::size_t i = 0; i < members_.size(); ++i) {
    if (i) out += ",";
    out += members_[i]->name();
  }
  return out + ")";
}

}  // namespace textclf
