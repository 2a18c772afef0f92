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

#include "textclf/model/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "textclf/error.hpp"
#include "textclf/utf8.hpp"

namespace textclf {

std::vector<std::pair<std::string, double>> raw_features(const std::vector<std::string>& tokens,
                                                         const TfidfConfig& cfg) {
  std::map<std::string, double> counts;
  if (cfg.char_ngram_min > 0 && cfg.char_ngram_max >= cfg.char_ngram_min) {
    std::string joined;
    for (std::size_t i = 0; i < tokens.size(); ++i) {
      if (i) joined += ' ';
      joined += tokens[i];
    }
    const std::u32string text = utf8::decode(joined);
    const auto len = static_cast<int>(text.size());
    for (int n = cfg.char_ngram_min; n <= cfg.char_ngram_max; ++n) {
      for (int s = 0; s + n <= len; ++s) {
        counts["c:" + utf8::encode(std::u32string_view(text).substr(
                          static_cast<std::size_t>(s), static_cast<std::size_t>(n)))] += 1.0;
      }
    }
  }
  if (cfg.word_unigrams) {
    for (const std::string& t : tokens) counts["w:" + t] += 1.0;
  }
  return {counts.begin(), counts.end()};
}

namespace {

void l2_normalize(SparseRow& row) {
  double norm = 0.0;
  for (const auto& [i, v] : row.entries) norm += v * v;
  if (norm == 0.0) return;
  norm = std::sqrt(norm);
  for (auto& e : row.entries) e.second /= norm;
}

double dot(const SparseRow& a, const SparseRow& b) {
  double s = 0.0;
  std::size_t i = 0, j = 0;
  while (i < a.entries.size() && j < b.entries.size()) {
    if (a.entries[i].first < b.entries[j].first) {
      ++i;
    } else if (a.entries[i].first > b.entries[j].first) {
      ++j;
    } else {
      s += a.entries[i++].second * b.entries[j++].second;
    }
  }
  return s;
}

std::vector<double> softmax(std::vector<double> z) {
  const double m = *std::max_element(z.begin(), z.end());
  double total = 0.0;
  for (double& v : z) {
    v = std::exp(v - m);
    total += v;
  }
  for (double& v : z) v /= total;
  return z;
}

}  // namespace

SparseRow TfidfModel::transform(const std::vector<std::string>& tokens) const {
  SparseRow row;
  for (const auto& [feature, count] : raw_features(tokens, cfg)) {
    auto it = std::lower_bound(features.begin(), features.end(), feature);
    if (it == features.end() || *it != feature) continue;
    const auto col = static_cast<std::size_t>(it - features.begin());
    row.entries.emplace_back(col, count * idf[col]);
  }
  l2_normalize(row);
  return row;
}

nlohmann::json TfidfModel::to_json() const {
  return {{"char_ngram_min", cfg.char_ngram_min},
          {"char_ngram_max", cfg.char_ngram_max},
          {"word_unigrams", cfg.word_unigrams},
          {"features", features},
          {"idf", idf},
          {"n_docs", n_docs}};
}

TfidfModel TfidfModel::from_json(const nlohmann::json& j) {
  TfidfModel m;
  m.cfg.char_ngram_min = j.at("char_ngram_min").get<int>();
  m.cfg.char_ngram_max = j.at("char_ngram_max").get<int>();
  m.cfg.word_unigrams = j.at("word_unigrams").get<bool>();
  m.features = j.at("features").get<std::vector<std::string>>();
  m.idf = j.at("idf").get<std::vector<double>>();
  m.n_docs = j.at("n_docs").get<std::size_t>();
  return m;
}

TfidfModel fit_tfidf(std::span<const TokenizedDocument> docs, const TfidfConfig& cfg) {
  if (docs.empty()) throw DataError("tf-idf: empty corpus");
  std::map<std::string, std::size_t> df;
  for (const TokenizedDocument& d : docs) {
    for (const auto& f : raw_features(d.tokens, cfg)) ++df[f.first];
  }
  TfidfModel m;
  m.cfg = cfg;
  m.n_docs = docs.size();
  const double n = static_cast<double>(docs.size());
  for (const auto& [feature, count] : df) {
    m.features.push_back(feature);
    m.idf.push_back(std::log((1.0 + n) / (1.0 + static_cast<double>(count))) + 1.0);
  }
  return m;
}

SparseMatrix tfidf_features(std::span<const TokenizedDocument> docs, const TfidfConfig& cfg) {
  const TfidfModel m = fit_tfidf(docs, cfg);
  SparseMatrix x;
  x.cols = m.features.size();
  for (const TokenizedDocument& d : docs) x.rows.push_back(m.transform(d.tokens));
  return x;
}

// ---------------------------------------------------------------------------

std::string to_string(BaselineKind kind) {
  switch (kind) {
    case BaselineKind::kLogReg: return "logreg";
    case BaselineKind::kMultinomialNb: return "multinomial_nb";
    case BaselineKind::kKnn: return "knn";
  }
  return "unknown";
}

BaselineKind parse_baseline_kind(std::string_view name) {
  if (name == "logreg") return BaselineKind::kLogReg;
  if (name == "multinomial_nb" || name == "nb") return BaselineKind::kMultinomialNb;
  if (name == "knn") return BaselineKind::kKnn;
  throw ConfigError("unknown baseline kind '" + std::string(name) + "'");
}

std::vector<double> BaselineModel::predict_proba(const SparseRow& x) const {
  for (const auto& e : x.entries) {
    if (e.first >= n_features) throw ShapeError("baseline: feature index out of range");
  }
  switch (kind) {
    case BaselineKind::kLogReg: {
      std::vector<double> z = bias;
      for (const auto& [f, v] : x.entries) {
        for (std::size_t c = 0; c < n_classes; ++c) z[c] += v * weights[f * n_classes + c];
      }
      return softmax(std::move(z));
    }
    case BaselineKind::kMultinomialNb: {
      std::vector<double> z = log_prior;
      for (const auto& [f, v] : x.entries) {
        for (std::size_t c = 0; c < n_classes; ++c) z[c] += v * log_likelihood[c * n_features + f];
      }
      return softmax(std::move(z));
    }
    case BaselineKind::kKnn: {
      std::vector<std::pair<double, std::size_t>> sims;
      const double xn = std::sqrt(dot(x, x));
      for (std::size_t i = 0; i < instances.size(); ++i) {
        const double in = std::sqrt(dot(instances[i], instances[i]));
        const double s = (xn == 0.0 || in == 0.0) ? 0.0 : dot(x, instances[i]) / (xn * in);
        sims.emplace_back(s, i);
      }
      const std::size_t k = std::min(sims.size(), static_cast<std::size_t>(options.knn_k));
      std::partial_sort(sims.begin(), sims.begin() + static_cast<std::ptrdiff_t>(k), sims.end(),
                        [](const auto& a, const auto& b) {
                          return a.first != b.first ? a.first > b.first : a.second < b.second;
                        });
      std::vector<double> p(n_classes, 0.0);
      for (std::size_t i = 0; i < k; ++i) {
        p[static_cast<std::size_t>(instance_labels[sims[i].second])] += 1.0 / static_cast<double>(k);
      }
      return p;
    }
  }
  throw ContractViolation("unknown baseline kind");
}

namespace {

nlohmann::json rows_to_json(const std::vector<SparseRow>& rows) {
  nlohmann::json out = nlohmann::json::array();
  for (const SparseRow& r : rows) {
    nlohmann::json row = nlohmann::json::array();
    for (const auto& [i, v] : r.entries) row.push_back({i, v});
    out.push_back(row);
  }
  return out;
}

std::vector<SparseRow> rows_from_json(const nlohmann::json& j) {
  std::vector<SparseRow> rows;
  for (const auto& row : j) {
    SparseRow r;
    for (const auto& e : row) r.entries.emplace_back(e.at(0).get<std::size_t>(), e.at(1).get<double>());
    rows.push_back(std::move(r));
  }
  return rows;
}

}  // namespace

nlohmann::json BaselineModel::to_json() const {
  nlohmann::json j{{"kind", to_string(kind)},
                   {"n_features", n_features},
                   {"n_classes", n_classes},
                   {"options",
                    {{"l2", options.l2},
                     {"iterations", options.iterations},
                     {"learning_rate", options.learning_rate},
                     {"nb_alpha", options.nb_alpha},
                     {"knn_k", options.knn_k}}}};
  switch (kind) {
    case BaselineKind::kLogReg:
      j["weights"] = weights;
      j["bias"] = bias;
      break;
    case BaselineKind::kMultinomialNb:
      j["log_prior"] = log_prior;
      j["log_likelihood"] = log_likelihood;
      break;
    case BaselineKind::kKnn:
      j["instances"] = rows_to_json(instances);
      j["instance_labels"] = instance_labels;
      break;
  }
  return j;
}

BaselineModel BaselineModel::from_json(const nlohmann::json& j) {
  BaselineModel m;
  try {
    m.kind = parse_baseline_kind(j.at("kind").get<std::string>());
    m.n_features = j.at("n_features").get<std::size_t>();
    m.n_classes = j.at("n_classes").get<std::size_t>();
    const auto& o = j.at("options");
    m.options.l2 = o.at("l2").get<double>();
    m.options.iterations = o.at("iterations").get<int>();
    m.options.learning_rate = o.at("learning_rate").get<double>();
    m.options.nb_alpha = o.at("nb_alpha").get<double>();
    m.options.knn_k = o.at("knn_k").get<int>();
    if (m.kind == BaselineKind::kLogReg) {
      m.weights = j.at("weights").get<std::vector<double>>();
      m.bias = j.at("bias").get<std::vector<double>>();
    } else if (m.kind == BaselineKind::kMultinomialNb) {
      m.log_prior = j.at("log_prior").get<std::vector<double>>();
      m.log_likelihood = j.at("log_likelihood").get<std::vector<double>>();
    } else {
      m.instances = rows_from_json(j.at("instances"));
      m.instance_labels = j.at("instance_labels").get<std::vector<int>>();
    }
  } catch (const nlohmann::json::exception& e) {
    throw IoError(std::string("malformed baseline model: ") + e.what());
  }
  return m;
}

BaselineModel train_baseline(const SparseMatrix& x, std::span<const int> labels,
                             std::size_t n_classes, BaselineKind kind,
                             const BaselineOptions& options) {
  if (x.rows.size() != labels.size()) {
    throw DataError("baseline: " + std::to_string(x.rows.size()) + " rows but " +
                    std::to_string(labels.size()) + " labels");
  }
  if (x.rows.empty()) throw DataError("baseline: empty training set");
  if (n_classes < 2) throw DataError("baseline: need at least 2 classes");
  std::vector<std::size_t> class_count(n_classes, 0);
  for (int l : labels) {
    if (l < 0 || static_cast<std::size_t>(l) >= n_classes) {
      throw DataError("baseline: label index out of range");
    }
    ++class_count[static_cast<std::size_t>(l)];
  }
  const auto present = std::count_if(class_count.begin(), class_count.end(),
                                     [](std::size_t c) { return c > 0; });
  if (present < 2 && kind != BaselineKind::kKnn) {
    throw DataError("baseline " + to_string(kind) + ": training set has a single class");
  }

  BaselineModel m;
  m.kind = kind;
  m.n_features = x.cols;
  m.n_classes = n_classes;
  m.options = options;
  const std::size_t F = x.cols, C = n_classes;
  const double n = static_cast<double>(x.rows.size());

  if (kind == BaselineKind::kLogReg) {
    m.weights.assign(F * C, 0.0);
    m.bias.assign(C, 0.0);
    std::vector<double> gw(F * C), gb(C);
    for (int it = 0; it < options.iterations; ++it) {
      for (std::size_t i = 0; i < F * C; ++i) gw[i] = options.l2 * m.weights[i];
      std::fill(gb.begin(), gb.end(), 0.0);
      for (std::size_t r = 0; r < x.rows.size(); ++r) {
        std::vector<double> p = m.predict_proba(x.rows[r]);
        p[static_cast<std::size_t>(labels[r])] -= 1.0;
        for (std::size_t c = 0; c < C; ++c) gb[c] += p[c] / n;
        for (const auto& [f, v] : x.rows[r].entries) {
          for (std::size_t c = 0; c < C; ++c) gw[f * C + c] += v * p[c] / n;
        }
      }
      for (std::size_t i = 0; i < F * C; ++i) m.weights[i] -= options.learning_rate * gw[i];
      for (std::size_t c = 0; c < C; ++c) m.bias[c] -= options.learning_rate * gb[c];
    }
  } else if (kind == BaselineKind::kMultinomialNb) {
    std::vector<double> mass(C * F, 0.0), total(C, 0.0);
    for (std::size_t r = 0; r < x.rows.size(); ++r) {
      const auto c = static_cast<std::size_t>(labels[r]);
      for (const auto& [f, v] : x.rows[r].entries) {
        mass[c * F + f] += v;
        total[c] += v;
      }
    }
    m.log_prior.resize(C);
    m.log_likelihood.resize(C * F);
    for (std::size_t c = 0; c < C; ++c) {
      // absent class: half a count
      m.log_prior[c] = class_count[c] > 0
                           ? std::log(static_cast<double>(class_count[c]) / n)
                           : std::log(0.5 / n);
      const double den = total[c] + options.nb_alpha * static_cast<double>(F);
      for (std::size_t f = 0; f < F; ++f) {
        m.log_likelihood[c * F + f] = std::log((mass[c * F + f] + options.nb_alpha) / den);
      }
    }
  } else {
    if (options.knn_k < 1) throw ContractViolation("knn: k must be >= 1");
    m.instances = x.rows;
    m.instance_labels.assign(labels.begin(), labels.end());
  }
  return m;
}

std::vector<double> BaselineClassifier::predict_proba(const std::vector<std::string>& tokens) const {
  return model.predict_proba(tfidf.transform(tokens));
}

nlohmann::json BaselineClassifier::to_json() const {
  return {{"tfidf", tfidf.to_json()}, {"model", model.to_json()}, {"classes", class_names}};
}

BaselineClassifier BaselineClassifier::from_json(const nlohmann::json& j) {
  BaselineClassifier b;
  try {
    b.tfidf = TfidfModel::from_json(j.at("tfidf"));
    b.model = BaselineModel::from_json(j.at("model"));
    b.class_names = j.at("classes").get<std::vector<std::string>>();
  } catch (const nlohmann::json::exception& e) {
    throw IoError(std::string("malformed baseline classifier: ") + e.what());
  }
  return b;
}

BaselineClassifier train_baseline_classifier(const LabeledDataset& data, BaselineKind kind,
                                             const TfidfConfig& tfidf,
                                             const BaselineOptions& options) {
  BaselineClassifier b;
  b.tfidf = fit_tfidf(data.documents, tfidf);
  b.class_names = data.classes;
  SparseMatrix x;
  x.cols = b.tfidf.features.size();
  for (const TokenizedDocument& d : data.documents) x.rows.push_back(b.tfidf.transform(d.tokens));
  b.model = train_baseline(x, data.labels(), data.classes.size(), kind, options);
  return b;
}

}  // namespace textclf
