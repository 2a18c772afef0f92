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

#include "textclf/eval/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "textclf/error.hpp"

namespace textclf {

ConfusionMatrix confusion_matrix(std::span<const std::string> gold,
                                 std::span<const std::string> pred,
                                 std::span<const std::string> classes) {
  if (gold.size() != pred.size()) {
    throw ContractViolation("confusion_matrix: gold and pred lengths differ (" +
                            std::to_string(gold.size()) + " vs " + std::to_string(pred.size()) +
                            ")");
  }
  auto index = [&](const std::string& label) {
    auto it = std::find(classes.begin(), classes.end(), label);
    if (it == classes.end()) throw DataError("unknown label '" + label + "'");
    return static_cast<int>(it - classes.begin());
  };
  std::vector<int> g, p;
  for (std::size_t i = 0; i < gold.size(); ++i) {
    g.push_back(index(gold[i]));
    p.push_back(index(pred[i]));
  }
  return confusion_matrix(g, p, classes.size());
}

ConfusionMatrix confusion_matrix(std::span<const int> gold, std::span<const int> pred,
                                 std::size_t n_classes) {
  if (gold.size() != pred.size()) {
    throw ContractViolation("confusion_matrix: gold and pred lengths differ");
  }
  ConfusionMatrix m(n_classes, std::vector<std::int64_t>(n_classes, 0));
  for (std::size_t i = 0; i < gold.size(); ++i) {
    const auto in_range = [n_classes](int c) {
      return c >= 0 && static_cast<std::size_t>(c) < n_classes;
    };
    if (!in_range(gold[i]) || !in_range(pred[i])) {
      throw DataError("confusion_matrix: class index out of range at position " +
                      std::to_string(i));
    }
    ++m[static_cast<std::size_t>(gold[i])][static_cast<std::size_t>(pred[i])];
  }
  return m;
}

std::int64_t matrix_total(const ConfusionMatrix& m) {
  std::int64_t total = 0;
  for (const auto& row : m) total = std::accumulate(row.begin(), row.end(), total);
  return total;
}

namespace {
double ratio(double num, double den) { return den == 0.0 ? 0.0 : num / den; }
}  // namespace

MacroPrf macro_prf(const ConfusionMatrix& m) {
  const std::size_t c = m.size();
  if (c == 0) throw ContractViolation("macro_prf: empty matrix");
  MacroPrf out;
  for (std::size_t k = 0; k < c; ++k) {
    if (m[k].size() != c) throw ContractViolation("macro_prf: matrix is not square");
    double tp = static_cast<double>(m[k][k]), row = 0.0, col = 0.0;
    for (std::size_t j = 0; j < c; ++j) {
      row += static_cast<double>(m[k][j]);
      col += static_cast<double>(m[j][k]);
    }
    ClassPrf cls;
    cls.precision = ratio(tp, col);
    cls.recall = ratio(tp, row);
    cls.f1 = ratio(2.0 * cls.precision * cls.recall, cls.precision + cls.recall);
    cls.support = static_cast<std::int64_t>(row);
    out.precision += cls.precision;
    out.recall += cls.recall;
    out.f1 += cls.f1;
    out.per_class.push_back(cls);
  }
  out.precision /= static_cast<double>(c);
  out.recall /= static_cast<double>(c);
  out.f1 /= static_cast<double>(c);
  return out;
}

double mcc(const ConfusionMatrix& m) {
  if (m.size() != 2 || m[0].size() != 2 || m[1].size() != 2) {
    throw ContractViolation("mcc: needs a 2x2 confusion matrix");
  }
  const double tn = static_cast<double>(m[0][0]), fp = static_cast<double>(m[0][1]);
  const double fn = static_cast<double>(m[1][0]), tp = static_cast<double>(m[1][1]);
  const double den = (tp + fp) * (tp + fn) * (tn + fp) * (tn + fn);
  if (den == 0.0) return 0.0;
  return (tp * tn - fp * fn) / std::sqrt(den);
}

RocCurve roc_auc(std::span<const double> scores, std::span<const int> labels) {
  if (scores.size() != labels.size()) {
    throw ContractViolation("roc_auc: scores and labels lengths differ");
  }
  std::int64_t pos = 0, neg = 0;
  for (int l : labels) {
    if (l == 1) ++pos;
    else if (l == 0) ++neg;
    else throw ContractViolation("roc_auc: labels must be 0 or 1");
  }
  if (pos == 0 || neg == 0) throw DataError("AUC undefined: only one class present");
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });
  RocCurve roc;
  roc.points.push_back({0.0, 0.0, 0});
  // Twice the Mann-Whitney count, kept integral until the final division.
  std::int64_t tp = 0, fp = 0, twice_area = 0;
  for (std::size_t i = 0; i < order.size();) {
    std::int64_t gtp = 0, gfp = 0;
    std::size_t j = i;
    while (j < order.size() && scores[order[j]] == scores[order[i]]) {
      (labels[order[j]] == 1 ? gtp : gfp) += 1;
      ++j;
    }
    twice_area += gfp * (2 * tp + gtp);
    tp += gtp;
    fp += gfp;
    roc.points.push_back({static_cast<double>(fp) / static_cast<double>(neg),
                          static_cast<double>(tp) / static_cast<double>(pos), 0});
    i = j;
  }
  roc.auc = static_cast<double>(twice_area) / (2.0 * static_cast<double>(pos) *
                                               static_cast<double>(neg));
  return roc;
}

MulticlassRoc roc_auc_ovr(const std::vector<std::vector<double>>& probabilities,
                          std::span<const int> labels, std::size_t n_classes) {
  if (probabilities.size() != labels.size()) {
    throw ContractViolation("roc_auc_ovr: probabilities and labels lengths differ");
  }
  MulticlassRoc out;
  double sum = 0.0;
  std::size_t defined = 0;
  for (std::size_t c = 0; c < n_classes; ++c) {
    std::vector<double> s;
    std::vector<int> y;
    bool has_pos = false, has_neg = false;
    for (std::size_t i = 0; i < labels.size(); ++i) {
      s.push_back(probabilities[i].at(c));
      y.push_back(labels[i] == static_cast<int>(c) ? 1 : 0);
      (y.back() ? has_pos : has_neg) = true;
    }
    if (has_pos && has_neg) {
      out.per_class.push_back(roc_auc(s, y));
      out.defined.push_back(true);
      sum += out.per_class.back().auc;
      ++defined;
    } else {
      out.per_class.emplace_back();
      out.defined.push_back(false);
    }
  }
  if (defined == 0) throw DataError("AUC undefined: only one class present");
  out.macro_auc = sum / static_cast<double>(defined);
  return out;
}

CalibrationCurve calibration_curve(std::span<const double> probabilities,
                                   std::span<const int> labels, int bins) {
  if (bins < 1) throw ContractViolation("calibration_curve: bins must be >= 1");
  if (probabilities.size() != labels.size()) {
    throw ContractViolation("calibration_curve: probabilities and labels lengths differ");
  }
  std::vector<double> psum(static_cast<std::size_t>(bins), 0.0),
      ysum(static_cast<std::size_t>(bins), 0.0);
  std::vector<std::int64_t> count(static_cast<std::size_t>(bins), 0);
  for (std::size_t i = 0; i < probabilities.size(); ++i) {
    const double p = probabilities[i];
    if (!(p >= 0.0 && p <= 1.0)) {
      throw ContractViolation("calibration_curve: probability outside [0, 1]");
    }
    const auto b = std::min(static_cast<std::size_t>(p * bins), static_cast<std::size_t>(bins - 1));
    psum[b] += p;
    ysum[b] += labels[i] == 1 ? 1.0 : 0.0;
    ++count[b];
  }
  CalibrationCurve out;
  out.bins = bins;
  for (std::size_t b = 0; b < psum.size(); ++b) {
    if (count[b] == 0) continue;
    const double n = static_cast<double>(count[b]);
    out.points.push_back({psum[b] / n, ysum[b] / n, count[b]});
  }
  return out;
}

int argmax(std::span<const double> values) {
  if (values.empty()) throw ContractViolation("argmax of an empty vector");
  return static_cast<int>(std::max_element(values.begin(), values.end()) - values.begin());
}

}  // namespace textclf
