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


#ifndef TEXTCLF_EVAL_METRICS_HPP_
#define TEXTCLF_EVAL_METRICS_HPP_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace textclf {

// Row = gold class, column = predicted class.
using ConfusionMatrix = std::vector<std::vector<std::int64_t>>;

// Throws DataError naming the first label not in `classes`; ContractViolation
// on a length mismatch.
ConfusionMatrix confusion_matrix(std::span<const std::string> gold,
                                 std::span<const std::string> pred,
                                 std::span<const std::string> classes);
ConfusionMatrix confusion_matrix(std::span<const int> gold, std::span<const int> pred,
                                 std::size_t n_classes);

std::int64_t matrix_total(const ConfusionMatrix& m);

struct ClassPrf {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::int64_t support = 0;
};

struct MacroPrf {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::vector<ClassPrf> per_class;
};

// 0/0 is taken as 0 everywhere.
MacroPrf macro_prf(const ConfusionMatrix& m);

// Matthews coefficient of a 2x2 matrix with class 1 as the positive class.
// A zero denominator yields 0.
double mcc(const ConfusionMatrix& m);

struct CurvePoint {
  double x = 0.0;
  double y = 0.0;
  std::int64_t count = 0;  // calibration bin size; 0 elsewhere
};

struct RocCurve {
  std::vector<CurvePoint> points;  // (FPR, TPR), starts at (0, 0)
  double auc = 0.0;
};

// Labels are 0/1. Throws DataError when only one label value is present.
RocCurve roc_auc(std::span<const double> scores, std::span<const int> labels);

struct MulticlassRoc {
  std::vector<RocCurve> per_class;  // one-vs-rest
  std::vector<bool> defined;        // false when a class is absent or universal
  double macro_auc = 0.0;           // mean over defined classes
};

MulticlassRoc roc_auc_ovr(const std::vector<std::vector<double>>& probabilities,
                          std::span<const int> labels, std::size_t n_classes);

struct CalibrationCurve {
  std::vector<CurvePoint> points;  // (mean predicted, fraction positive, count)
  int bins = 10;
};

// Equal-width bins over [0, 1]; p = 1 falls in the last bin; empty bins are
// omitted. Throws ContractViolation for p outside [0, 1].
CalibrationCurve calibration_curve(std::span<const double> probabilities,
                                   std::span<const int> labels, int bins = 10);

// Lowest index wins ties.
int argmax(std::span<const double> values);

}  // namespace textclf

#endif  // TEXTCLF_EVAL_METRICS_HPP_
