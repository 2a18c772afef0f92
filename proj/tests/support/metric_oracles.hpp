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

// Brute-force metric references, written from the definitions over raw
// (gold, prediction) samples rather than from a confusion matrix.

#ifndef TEXTCLF_TESTS_METRIC_ORACLES_HPP_
#define TEXTCLF_TESTS_METRIC_ORACLES_HPP_

#include <cmath>
#include <cstddef>
#include <vector>

#include "textclf/rng.hpp"

namespace textclf::testing {

struct OraclePrf {
  double precision = 0.0, recall = 0.0, f1 = 0.0;
};

inline OraclePrf oracle_macro_prf(const std::vector<int>& gold, const std::vector<int>& pred,
                                  int n_classes) {
  OraclePrf macro;
  for (int c = 0; c < n_classes; ++c) {
    double tp = 0, fp = 0, fn = 0;
    for (std::size_t i = 0; i < gold.size(); ++i) {
      if (pred[i] == c && gold[i] == c) tp += 1;
      if (pred[i] == c && gold[i] != c) fp += 1;
      if (pred[i] != c && gold[i] == c) fn += 1;
    }
    const double p = tp + fp > 0 ? tp / (tp + fp) : 0.0;
    const double r = tp + fn > 0 ? tp / (tp + fn) : 0.0;
    const double f = p + r > 0 ? 2 * p * r / (p + r) : 0.0;
    macro.precision += p / n_classes;
    macro.recall += r / n_classes;
    macro.f1 += f / n_classes;
  }
  return macro;
}

// Pearson correlation of the two 0/1 indicator vectors.
inline double oracle_mcc(const std::vector<int>& gold, const std::vector<int>& pred) {
  const double n = static_cast<double>(gold.size());
  double sy = 0, sp = 0, syp = 0;
  for (std::size_t i = 0; i < gold.size(); ++i) {
    sy += gold[i];
    sp += pred[i];
    syp += gold[i] * pred[i];
  }
  const double den = (n * sy - sy * sy) * (n * sp - sp * sp);
  return den == 0.0 ? 0.0 : (n * syp - sy * sp) / std::sqrt(den);
}

// P(score of a random positive > score of a random negative), ties 1/2.
inline double oracle_auc(const std::vector<double>& scores, const std::vector<int>& labels) {
  double wins = 0, pairs = 0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (labels[i] != 1) continue;
    for (std::size_t j = 0; j < scores.size(); ++j) {
      if (labels[j] != 0) continue;
      pairs += 1;
      if (scores[i] > scores[j]) wins += 1;
      if (scores[i] == scores[j]) wins += 0.5;
    }
  }
  return wins / pairs;
}

struct MetricInstance {
  int n_classes = 2;
  std::vector<int> gold, pred;
  std::vector<double> scores;  // binary score per sample, coarse grid for ties
};

inline MetricInstance random_metric_instance(Rng& rng, bool binary) {
  MetricInstance m;
  m.n_classes = binary ? 2 : 2 + static_cast<int>(rng.below(4));
  const std::size_t n = 2 + rng.below(40);
  for (std::size_t i = 0; i < n; ++i) {
    m.gold.push_back(static_cast<int>(rng.below(static_cast<std::uint64_t>(m.n_classes))));
    m.pred.push_back(static_cast<int>(rng.below(static_cast<std::uint64_t>(m.n_classes))));
    m.scores.push_back(static_cast<double>(rng.below(8)) / 8.0);
  }
  if (binary) {  // both labels present so AUC is defined
    m.gold[0] = 0;
    m.gold[1] = 1;
  }
  return m;
}

}  // namespace textclf::testing

#endif  // TEXTCLF_TESTS_METRIC_ORACLES_HPP_
