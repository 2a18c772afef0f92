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

#include "textclf/eval/report.hpp"

#include <cmath>
#include <cstdio>
#include <numeric>
#include <set>

#include "textclf/error.hpp"
#include "textclf/serialize.hpp"

namespace textclf {

MetricSummary MetricSummary::of(std::vector<double> values) {
  MetricSummary s;
  s.values = std::move(values);
  if (s.values.empty()) return s;
  const double n = static_cast<double>(s.values.size());
  s.mean = std::accumulate(s.values.begin(), s.values.end(), 0.0) / n;
  if (s.values.size() > 1) {
    double ss = 0.0;
    for (double v : s.values) ss += (v - s.mean) * (v - s.mean);
    s.std = std::sqrt(ss / (n - 1.0));
  }
  return s;
}

namespace {

nlohmann::json points_json(const std::vector<CurvePoint>& pts, bool with_count) {
  nlohmann::json out = nlohmann::json::array();
  for (const CurvePoint& p : pts) {
    if (with_count) {
      out.push_back({p.x, p.y, p.count});
    } else {
      out.push_back({p.x, p.y});
    }
  }
  return out;
}

std::vector<CurvePoint> points_from_json(const nlohmann::json& j) {
  std::vector<CurvePoint> pts;
  for (const auto& p : j) {
    CurvePoint c{p.at(0).get<double>(), p.at(1).get<double>(), 0};
    if (p.size() > 2) c.count = p.at(2).get<std::int64_t>();
    pts.push_back(c);
  }
  return pts;
}

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

nlohmann::json EvalReport::to_json() const {
  nlohmann::json j = nlohmann::json::object();
  j["classes"] = classes;
  j["eval_split"] = eval_split;
  j["n_eval"] = n_eval;
  if (confusion) j["confusion"] = *confusion;
  if (prf) {
    nlohmann::json per = nlohmann::json::object();
    for (std::size_t c = 0; c < prf->per_class.size(); ++c) {
      const ClassPrf& p = prf->per_class[c];
      const std::string key = c < classes.size() ? classes[c] : std::to_string(c);
      per[key] = {{"precision", p.precision}, {"recall", p.recall}, {"f1", p.f1},
                  {"support", p.support}};
    }
    j["metrics"] = {{"macro_precision", prf->precision},
                    {"macro_recall", prf->recall},
                    {"macro_f1", prf->f1},
                    {"per_class", per}};
  }
  if (mcc) j["mcc"] = *mcc;
  if (!roc.empty()) {
    nlohmann::json r = nlohmann::json::object();
    for (const auto& [name, curve] : roc) {
      r[name] = {{"auc", curve.auc}, {"points", points_json(curve.points, false)}};
    }
    j["roc"] = r;
  }
  if (macro_auc) j["macro_auc"] = *macro_auc;
  if (calibration) {
    j["calibration"] = {{"bins", calibration->bins},
                        {"points", points_json(calibration->points, true)}};
  }
  if (learning_curve) {
    nlohmann::json pts = nlohmann::json::array();
    for (const LearningPoint& p : learning_curve->points) {
      pts.push_back({{"fraction", p.fraction},
                     {"train_size", p.train_size},
                     {"train_score", p.train_score},
                     {"valid_score", p.valid_score}});
    }
    j["learning_curve"] = pts;
  }
  if (!cv_metrics.empty()) {
    nlohmann::json cv = nlohmann::json::object();
    for (const auto& [name, s] : cv_metrics) {
      cv[name] = {{"mean", s.mean}, {"std", s.std}, {"values", s.values}};
    }
    j["cv"] = cv;
  }
  if (!fold_assignment.empty()) j["fold_assignment"] = fold_assignment;
  if (!holdout_ids.empty()) j["holdout_ids"] = holdout_ids;
  j["config"] = config;
  j["seeds"] = seeds;
  return j;
}

EvalReport score_predictions(const std::vector<std::string>& classes, const std::vector<int>& gold,
                             const std::vector<std::vector<double>>& probabilities) {
  if (gold.size() != probabilities.size()) {
    throw ContractViolation("score_predictions: gold and prediction counts differ");
  }
  if (gold.empty()) throw DataError("score_predictions: nothing to evaluate");
  const std::size_t C = classes.size();
  EvalReport r;
  r.classes = classes;
  r.n_eval = gold.size();
  std::vector<int> pred;
  for (const auto& p : probabilities) {
    if (p.size() != C) throw DataError("prediction has " + std::to_string(p.size()) +
                                       " probabilities, expected " + std::to_string(C));
    pred.push_back(argmax(p));
  }
  r.confusion = confusion_matrix(gold, pred, C);
  r.prf = macro_prf(*r.confusion);
  std::vector<double> conf;
  std::vector<int> hit;
  if (C == 2) {
    r.mcc = mcc(*r.confusion);
    std::vector<double> s;
    for (const auto& p : probabilities) s.push_back(p[1]);
    bool both = std::count(gold.begin(), gold.end(), 1) > 0 &&
                std::count(gold.begin(), gold.end(), 0) > 0;
    if (both) {
      r.roc[classes[1]] = roc_auc(s, gold);
      r.macro_auc = r.roc[classes[1]].auc;
    }
    conf = s;
    hit = gold;
  } else {
    const std::set<int> present(gold.begin(), gold.end());
    if (present.size() > 1) {
      const MulticlassRoc m = roc_auc_ovr(probabilities, gold, C);
      for (std::size_t c = 0; c < C; ++c) {
        if (m.defined[c]) r.roc[classes[c]] = m.per_class[c];
      }
      r.macro_auc = m.macro_auc;
    }
    for (std::size_t i = 0; i < gold.size(); ++i) {
      conf.push_back(probabilities[i][static_cast<std::size_t>(pred[i])]);
      hit.push_back(pred[i] == gold[i] ? 1 : 0);
    }
  }
  for (double& p : conf) p = std::clamp(p, 0.0, 1.0);
  r.calibration = calibration_curve(conf, hit, 10);
  return r;
}

std::vector<std::filesystem::path> write_report(const EvalReport& report,
                                                const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());
  std::vector<std::filesystem::path> written;
  auto emit = [&](const char* name, const std::string& text) {
    write_text_file(dir / name, text);
    written.push_back(dir / name);
  };
  emit("report.json", report.to_json().dump(2) + "\n");
  if (report.confusion) {
    std::string s;
    for (const std::string& c : report.classes) s += "," + csv_field(c);
    s += "\n";
    for (std::size_t i = 0; i < report.confusion->size(); ++i) {
      s += csv_field(i < report.classes.size() ? report.classes[i] : std::to_string(i));
      for (std::int64_t v : (*report.confusion)[i]) s += "," + std::to_string(v);
      s += "\n";
    }
    emit("confusion.csv", s);
  }
  if (!report.roc.empty()) {
    std::string s = "class,x,y\n";
    for (const auto& [name, curve] : report.roc) {
      for (const CurvePoint& p : curve.points) {
        s += csv_field(name) + "," + num(p.x) + "," + num(p.y) + "\n";
      }
    }
    emit("roc.csv", s);
  }
  if (report.calibration) {
    std::string s = "x,y,count\n";
    for (const CurvePoint& p : report.calibration->points) {
      s += num(p.x) + "," + num(p.y) + "," + std::to_string(p.count) + "\n";
    }
    emit("calibration.csv", s);
  }
  if (report.learning_curve) {
    std::string s = "x,y_train,y_valid,count\n";
    for (const LearningPoint& p : report.learning_curve->points) {
      s += num(p.fraction) + "," + num(p.train_score) + "," + num(p.valid_score) + "," +
           std::to_string(p.train_size) + "\n";
    }
    emit("learning_curve.csv", s);
  }
  return written;
}

EvalReport read_report(const std::filesystem::path& dir) {
  const nlohmann::json j = read_json_file(dir / "report.json");
  EvalReport r;
  try {
    r.classes = j.at("classes").get<std::vector<std::string>>();
    r.eval_split = j.at("eval_split").get<std::string>();
    r.n_eval = j.at("n_eval").get<std::size_t>();
    if (j.contains("confusion")) r.confusion = j.at("confusion").get<ConfusionMatrix>();
    if (j.contains("metrics")) {
      const auto& m = j.at("metrics");
      MacroPrf prf;
      prf.precision = m.at("macro_precision").get<double>();
      prf.recall = m.at("macro_recall").get<double>();
      prf.f1 = m.at("macro_f1").get<double>();
      for (const std::string& c : r.classes) {
        const auto& pc = m.at("per_class").at(c);
        prf.per_class.push_back({pc.at("precision").get<double>(), pc.at("recall").get<double>(),
                                 pc.at("f1").get<double>(), pc.at("support").get<std::int64_t>()});
      }
      r.prf = prf;
    }
    if (j.contains("mcc")) r.mcc = j.at("mcc").get<double>();
    if (j.contains("roc")) {
      for (const auto& [name, curve] : j.at("roc").items()) {
        r.roc[name] = RocCurve{points_from_json(curve.at("points")), curve.at("auc").get<double>()};
      }
    }
    if (j.contains("macro_auc")) r.macro_auc = j.at("macro_auc").get<double>();
    if (j.contains("calibration")) {
      r.calibration = CalibrationCurve{points_from_json(j.at("calibration").at("points")),
                                       j.at("calibration").at("bins").get<int>()};
    }
    if (j.contains("learning_curve")) {
      LearningCurve lc;
      for (const auto& p : j.at("learning_curve")) {
        lc.points.push_back({p.at("fraction").get<double>(), p.at("train_size").get<std::size_t>(),
                             p.at("train_score").get<double>(), p.at("valid_score").get<double>()});
      }
      r.learning_curve = lc;
    }
    if (j.contains("cv")) {
      for (const auto& [name, s] : j.at("cv").items()) {
        MetricSummary m;
        m.values = s.at("values").get<std::vector<double>>();
        m.mean = s.at("mean").get<double>();
        m.std = s.at("std").get<double>();
        r.cv_metrics[name] = m;
      }
    }
    if (j.contains("fold_assignment")) {
      r.fold_assignment = j.at("fold_assignment").get<std::map<std::string, int>>();
    }
    if (j.contains("holdout_ids")) r.holdout_ids = j.at("holdout_ids").get<std::vector<std::string>>();
    r.config = j.at("config");
    r.seeds = j.at("seeds").get<std::map<std::string, std::uint64_t>>();
  } catch (const nlohmann::json::exception& e) {
    throw IoError((dir / "report.json").string() + ": " + e.what());
  }
  return r;
}

}  // namespace textclf
