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


#ifndef TEXTCLF_EVAL_REPORT_HPP_
#define TEXTCLF_EVAL_REPORT_HPP_

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "textclf/eval/metrics.hpp"

namespace textclf {

struct LearningPoint {
  double fraction = 0.0;
  std::size_t train_size = 0;
  double train_score = 0.0;
  double valid_score = 0.0;
};

struct LearningCurve {
  std::vector<LearningPoint> points;
};

struct MetricSummary {
  std::vector<double> values;  // fold order
  double mean = 0.0;
  double std = 0.0;  // sample standard deviation; 0 for one value

  static MetricSummary of(std::vector<double> values);
};

// Every section is optional (a lone ROC curve is a valid report). No
// wall-clock data.
struct EvalReport {
  std::vector<std::string> classes;
  std::string eval_split = "given";  // which documents the metrics cover
  std::size_t n_eval = 0;
  std::optional<ConfusionMatrix> confusion;
  std::optional<MacroPrf> prf;
  std::optional<double> mcc;
  // Binary: one curve for the positive class (index 1). Multiclass: one
  // one-vs-rest curve per class; undefined classes are left out.
  std::map<std::string, RocCurve> roc;
  std::optional<double> macro_auc;
  std::optional<CalibrationCurve> calibration;
  std::optional<LearningCurve> learning_curve;
  std::map<std::string, MetricSummary> cv_metrics;
  std::map<std::string, int> fold_assignment;  // doc id -> CV fold
  std::vector<std::string> holdout_ids;
  nlohmann::json config = nlohmann::json::object();
  std::map<std::string, std::uint64_t> seeds;

  nlohmann::json to_json() const;
};

// Fills confusion, P/R/F1, ROC (+ macro AUC), calibration and, for two
// classes, MCC from gold indices and predicted distributions. Calibration
// uses p(class 1) for binary tasks and top-class confidence otherwise.
EvalReport score_predictions(const std::vector<std::string>& classes,
                             const std::vector<int>& gold,
                             const std::vector<std::vector<double>>& probabilities);

// report.json plus confusion.csv, roc.csv, calibration.csv and
// learning_curve.csv for the sections present. Creates `dir` if needed;
// throws IoError when it cannot be written. Returns the files written.
std::vector<std::filesystem::path> write_report(const EvalReport& report,
                                                const std::filesystem::path& dir);

// Reads report.json back into the subset of fields it carries.
EvalReport read_report(const std::filesystem::path& dir);

}  // namespace textclf

#endif  // TEXTCLF_EVAL_REPORT_HPP_
