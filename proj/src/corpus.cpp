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

#include "textclf/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <set>

#include "textclf/error.hpp"
#include "textclf/hash.hpp"
#include "textclf/rng.hpp"
#include "textclf/text_pipeline.hpp"

namespace textclf {

Vocabulary::Vocabulary(std::vector<std::string> tokens,
                       std::vector<std::int64_t> corpus_frequency,
                       std::vector<std::int64_t> document_frequency)
    : tokens_(std::move(tokens)),
      cf_(std::move(corpus_frequency)),
      df_(std::move(document_frequency)) {
  if (cf_.size() != tokens_.size() || df_.size() != tokens_.size()) {
    throw ContractViolation("vocabulary frequency tables do not match token count");
  }
  index_.reserve(tokens_.size());
  for (std::size_t i = 0; i < tokens_.size(); ++i) {
    if (!index_.emplace(tokens_[i], static_cast<int>(i) + 1).second) {
      throw ContractViolation("duplicate vocabulary token '" + tokens_[i] + "'");
    }
  }
}

std::optional<int> Vocabulary::id(std::string_view token) const {
  auto it = index_.find(std::string(token));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

const std::string& Vocabulary::token(int id) const {
  if (id <= 0 || static_cast<std::size_t>(id) > tokens_.size()) {
    throw LookupError("vocabulary id " + std::to_string(id) + " has no token");
  }
  return tokens_[static_cast<std::size_t>(id) - 1];
}

std::int64_t Vocabulary::corpus_frequency(int id) const {
  token(id);
  return cf_[static_cast<std::size_t>(id) - 1];
}

std::int64_t Vocabulary::document_frequency(int id) const {
  token(id);
  return df_[static_cast<std::size_t>(id) - 1];
}

std::vector<std::int64_t> Vocabulary::corpus_frequencies() const {
  std::vector<std::int64_t> out(tokens_.size() + 1, 0);
  std::copy(cf_.begin(), cf_.end(), out.begin() + 1);
  return out;
}

std::uint64_t Vocabulary::fingerprint() const {
  std::string joined;
  for (const std::string& t : tokens_) {
    joined += t;
    joined.push_back('\n');
  }
  return fnv1a64(joined);
}

Vocabulary build_vocabulary(std::span<const TokenizedDocument> docs, int min_df) {
  if (min_df < 1) throw ContractViolation("build_vocabulary: min_df must be >= 1");
  std::map<std::string, std::pair<std::int64_t, std::int64_t>> counts;  // cf, df
  for (const TokenizedDocument& d : docs) {
    std::set<std::string_view> seen;
    for (const std::string& t : d.tokens) {
      auto& c = counts[t];
      ++c.first;
      if (seen.insert(t).second) ++c.second;
    }
  }
  struct Entry {
    std::string token;
    std::int64_t cf, df;
  };
  std::vector<Entry> entries;
  for (auto& [token, c] : counts) {
    if (c.second >= min_df) entries.push_back({token, c.first, c.second});
  }
  if (entries.empty()) {
    throw DataError("empty vocabulary: no token reaches document frequency " +
                    std::to_string(min_df));
  }
  std::stable_sort(entries.begin(), entries.end(),
                   [](const Entry& a, const Entry& b) { return a.cf > b.cf; });
  std::vector<std::string> tokens;
  std::vector<std::int64_t> cf, df;
  for (Entry& e : entries) {
    tokens.push_back(std::move(e.token));
    cf.push_back(e.cf);
    df.push_back(e.df);
  }
  return Vocabulary(std::move(tokens), std::move(cf), std::move(df));
}

std::vector<int> encode_document(std::span<const std::string> tokens,
                                 const Vocabulary& vocab, std::size_t max_len) {
  if (max_len < 1) throw ContractViolation("encode_document: max_len must be >= 1");
  std::vector<int> ids;
  ids.reserve(max_len);
  for (const std::string& t : tokens) {
    if (ids.size() == max_len) break;
    if (auto id = vocab.id(t)) ids.push_back(*id);
  }
  ids.resize(max_len, Vocabulary::kPadId);
  return ids;
}

std::vector<std::string> decode_document(std::span<const int> ids,
                                         const Vocabulary& vocab) {
  std::vector<std::string> out;
  for (int id : ids) {
    if (id == Vocabulary::kPadId) break;
    out.push_back(vocab.token(id));
  }
  return out;
}

LabeledDataset LabeledDataset::from_documents(std::vector<TokenizedDocument> docs) {
  std::set<std::string> labels;
  for (const TokenizedDocument& d : docs) {
    if (!d.label) throw DataError("document '" + d.id + "' has no label");
    labels.insert(*d.label);
  }
  if (labels.empty()) throw DataError("labeled dataset is empty");
  return with_classes(std::move(docs), {labels.begin(), labels.end()});
}

LabeledDataset LabeledDataset::with_classes(std::vector<TokenizedDocument> docs,
                                            std::vector<std::string> classes) {
  if (classes.empty()) throw DataError("class list is empty");
  std::set<std::string> unique(classes.begin(), classes.end());
  if (unique.size() != classes.size()) throw DataError("duplicate class names");
  LabeledDataset ds{std::move(docs), std::move(classes)};
  for (const TokenizedDocument& d : ds.documents) {
    if (!d.label) throw DataError("document '" + d.id + "' has no label");
    ds.class_index(*d.label);
  }
  return ds;
}

int LabeledDataset::class_index(std::string_view label) const {
  for (std::size_t i = 0; i < classes.size(); ++i) {
    if (classes[i] == label) return static_cast<int>(i);
  }
  throw DataError("unknown label '" + std::string(label) + "'");
}

int LabeledDataset::label_of(std::size_t doc) const {
  return class_index(*documents.at(doc).label);
}

std::vector<int> LabeledDataset::labels() const {
  std::vector<int> out;
  out.reserve(documents.size());
  for (std::size_t i = 0; i < documents.size(); ++i) out.push_back(label_of(i));
  return out;
}

LabeledDataset LabeledDataset::subset(std::span<const std::size_t> indices) const {
  LabeledDataset out{{}, classes};
  out.documents.reserve(indices.size());
  for (std::size_t i : indices) out.documents.push_back(documents.at(i));
  return out;
}

std::vector<std::size_t> FoldAssignment::members(int f) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < fold.size(); ++i) {
    if (fold[i] == f) out.push_back(i);
  }
  return out;
}

std::vector<std::size_t> FoldAssignment::complement(int f) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < fold.size(); ++i) {
    if (fold[i] != f) out.push_back(i);
  }
  return out;
}

FoldAssignment stratified_kfold(const LabeledDataset& ds, int k, std::uint64_t seed) {
  if (k < 2) throw ContractViolation("stratified_kfold: k must be >= 2");
  std::vector<std::vector<std::size_t>> by_class(ds.classes.size());
  const std::vector<int> labels = ds.labels();
  for (std::size_t i = 0; i < labels.size(); ++i) {
    by_class[static_cast<std::size_t>(labels[i])].push_back(i);
  }
  FoldAssignment out{k, std::vector<int>(ds.size(), -1), seed};
  std::size_t offset = 0;
  for (std::size_t c = 0; c < by_class.size(); ++c) {
    auto& members = by_class[c];
    if (members.size() < static_cast<std::size_t>(k)) {
      throw DataError("cannot stratify class '" + ds.classes[c] + "' with " +
                      std::to_string(members.size()) + " members into " +
                      std::to_string(k) + " folds");
    }
    Rng rng(mix_seed(seed, c));
    rng.shuffle(members.begin(), members.end());
    for (std::size_t j = 0; j < members.size(); ++j) {
      out.fold[members[j]] = static_cast<int>((offset + j) % static_cast<std::size_t>(k));
    }
    offset = (offset + members.size()) % static_cast<std::size_t>(k);
  }
  return out;
}

ZipfFit zipf_fit(std::span<const std::int64_t> frequencies) {
  std::vector<std::int64_t> f;
  for (std::int64_t v : frequencies) {
    if (v > 0) f.push_back(v);
  }
  if (f.size() < 3) {
    throw DataError("zipf_fit needs at least 3 tokens, got " + std::to_string(f.size()));
  }
  std::sort(f.begin(), f.end(), std::greater<>());
  const double n = static_cast<double>(f.size());
  // y relative to the top frequency
  const double y0 = std::log(static_cast<double>(f[0]));
  double sx = 0, sy = 0;
  std::vector<double> xs, ys;
  for (std::size_t i = 0; i < f.size(); ++i) {
    xs.push_back(std::log(static_cast<double>(i + 1)));
    ys.push_back(std::log(static_cast<double>(f[i])) - y0);
    sx += xs.back();
    sy += ys.back();
  }
  const double mx = sx / n, my = sy / n;
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
    syy += (ys[i] - my) * (ys[i] - my);
  }
  ZipfFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = y0 + my - fit.slope * mx;
  fit.r_squared = syy == 0.0 ? 1.0 : (sxy * sxy) / (sxx * syy);
  return fit;
}

ZipfFit zipf_fit(const Vocabulary& vocab) {
  const auto cf = vocab.corpus_frequencies();
  return zipf_fit(std::span<const std::int64_t>(cf).subspan(1));
}

namespace {

class ZipfTable {
 public:
  ZipfTable(int n, double s) {
    double total = 0;
    for (int r = 1; r <= n; ++r) {
      total += 1.0 / std::pow(static_cast<double>(r), s);
      cdf_.push_back(total);
    }
    for (double& c : cdf_) c /= total;
  }
  int sample(Rng& rng) const {
    const double u = rng.uniform();
    auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
    if (it == cdf_.end()) --it;
    return static_cast<int>(it - cdf_.begin());
  }

 private:
  std::vector<double> cdf_;
};

}  // namespace

LabeledDataset generate_synthetic_corpus(const SyntheticCorpusSpec& spec,
                                         std::uint64_t seed) {
  if (spec.classes < 1 || spec.docs_per_class < 1 || spec.vocab_per_class < 1 ||
      spec.shared_vocab < 0 || spec.doc_len < 1) {
    throw ContractViolation("generate_synthetic_corpus: counts must be >= 1");
  }
  const ZipfTable private_table(spec.vocab_per_class, spec.zipf_exponent);
  const ZipfTable shared_table(std::max(spec.shared_vocab, 1), spec.zipf_exponent);
  const double p_shared = static_cast<double>(spec.shared_vocab) /
                          (spec.vocab_per_class + spec.shared_vocab);

  std::vector<std::string> classes;
  for (int c = 0; c < spec.classes; ++c) classes.push_back("class" + std::to_string(c));

  const int total = spec.total_docs.value_or(spec.classes * spec.docs_per_class);
  Rng rng(seed);
  std::vector<TokenizedDocument> docs;
  docs.reserve(static_cast<std::size_t>(total));
  for (int n = 0; n < total; ++n) {
    const int c = n % spec.classes;
    TokenizedDocument d{"syn" + std::to_string(n), {}, classes[static_cast<std::size_t>(c)]};
    for (int t = 0; t < spec.doc_len; ++t) {
      if (spec.shared_vocab > 0 && rng.uniform() < p_shared) {
        d.tokens.push_back("s_w" + std::to_string(shared_table.sample(rng)));
      } else {
        d.tokens.push_back("c" + std::to_string(c) + "_w" +
                           std::to_string(private_table.sample(rng)));
      }
    }
    docs.push_back(std::move(d));
  }
  return LabeledDataset::with_classes(std::move(docs), std::move(classes));
}

std::vector<TokenizedDocument> read_tokenized_tsv(const std::filesystem::path& path) {
  std::vector<TokenizedDocument> docs;
  for (const RawDocument& raw : read_raw_corpus(path)) {
    docs.push_back({raw.id, tokenize(raw.text), raw.label});
  }
  return docs;
}

void write_tokenized_tsv(const std::filesystem::path& path,
                         std::span<const TokenizedDocument> docs) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  for (const TokenizedDocument& d : docs) {
    if (d.label) out << *d.label << '\t';
    for (std::size_t i = 0; i < d.tokens.size(); ++i) {
      if (i) out << ' ';
      out << d.tokens[i];
    }
    out << '\n';
  }
  if (!out) throw IoError("failed writing " + path.string());
}

void write_fold_csv(const std::filesystem::path& path, const LabeledDataset& ds,
                    const FoldAssignment& folds) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out << "doc_id,fold\n";
  for (std::size_t i = 0; i < ds.size(); ++i) {
    out << ds.documents[i].id << ',' << folds.fold[i] << '\n';
  }
  if (!out) throw IoError("failed writing " + path.string());
}

}  // namespace textclf
