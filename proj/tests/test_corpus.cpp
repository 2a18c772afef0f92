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

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <map>
#include <set>

#include "textclf/corpus.hpp"
#include "textclf/error.hpp"
#include "textclf/rng.hpp"
#include "textclf/serialize.hpp"

namespace fs = std::filesystem;
using namespace textclf;

namespace {

TokenizedDocument doc(std::vector<std::string> tokens, std::string label = "A") {
  static int n = 0;
  return {"doc" + std::to_string(n++), std::move(tokens), std::move(label)};
}

LabeledDataset balanced(int per_class, int classes) {
  std::vector<TokenizedDocument> docs;
  for (int i = 0; i < per_class * classes; ++i) {
    docs.push_back(doc({"w"}, "c" + std::to_string(i % classes)));
  }
  return LabeledDataset::from_documents(docs);
}

}  // namespace

TEST(Vocabulary, FrequencyOrderedIds) {
  const std::vector<TokenizedDocument> docs{doc({"a", "b"}), doc({"a"})};
  const Vocabulary v = build_vocabulary(docs, 1);
  EXPECT_EQ(v.id("a"), 1);
  EXPECT_EQ(v.id("b"), 2);
  EXPECT_EQ(v.size(), 2u);
  EXPECT_EQ(v.corpus_frequency(1), 2);
  EXPECT_EQ(v.document_frequency(2), 1);
  EXPECT_FALSE(v.id("zzz").has_value());
}

TEST(Vocabulary, TiesAreLexicographic) {
  const std::vector<TokenizedDocument> docs{doc({"b", "a"})};
  const Vocabulary v = build_vocabulary(docs, 1);
  EXPECT_EQ(v.id("a"), 1);
  EXPECT_EQ(v.id("b"), 2);
}

TEST(Vocabulary, EmptyAfterPruningIsAnError) {
  const std::vector<TokenizedDocument> docs{doc({"a"})};
  EXPECT_THROW(build_vocabulary(docs, 2), DataError);
  EXPECT_THROW(build_vocabulary(docs, 0), ContractViolation);
}

TEST(Vocabulary, MatchesCountingOracle) {
  Rng rng(5);
  std::vector<TokenizedDocument> docs;
  for (int d = 0; d < 40; ++d) {
    std::vector<std::string> t;
    for (std::size_t k = 0; k < rng.below(10); ++k) t.push_back("t" + std::to_string(rng.below(25)));
    docs.push_back(doc(t));
  }
  for (int min_df : {1, 2, 4}) {
    std::map<std::string, std::int64_t> cf, df;
    for (const auto& d : docs) {
      for (const auto& t : d.tokens) ++cf[t];
      for (const auto& t : std::set<std::string>(d.tokens.begin(), d.tokens.end())) ++df[t];
    }
    std::vector<std::pair<std::int64_t, std::string>> order;
    for (const auto& [t, f] : cf) {
      if (df[t] >= min_df) order.emplace_back(-f, t);
    }
    std::sort(order.begin(), order.end());
    const Vocabulary v = build_vocabulary(docs, min_df);
    ASSERT_EQ(v.size(), order.size());
    for (std::size_t i = 0; i < order.size(); ++i) {
      const int id = static_cast<int>(i) + 1;
      EXPECT_EQ(v.token(id), order[i].second);
      EXPECT_EQ(v.corpus_frequency(id), -order[i].first);
      EXPECT_EQ(v.document_frequency(id), df[order[i].second]);
    }
  }
}

TEST(Vocabulary, JsonRoundTripPreservesFingerprint) {
  const std::vector<TokenizedDocument> docs{doc({"x", "y", "x"}), doc({"z"})};
  const Vocabulary v = build_vocabulary(docs, 1);
  const Vocabulary back = vocabulary_from_json(vocabulary_to_json(v));
  EXPECT_EQ(back.tokens(), v.tokens());
  EXPECT_EQ(back.fingerprint(), v.fingerprint());
}

TEST(Encode, PadsTruncatesAndDropsUnknown) {
  const std::vector<TokenizedDocument> docs{doc({"a", "b", "c"})};
  const Vocabulary v = build_vocabulary(docs, 1);
  const std::vector<std::string> three{"a", "b", "c"};
  EXPECT_EQ(encode_document(three, v, 5), (std::vector<int>{1, 2, 3, 0, 0}));
  std::vector<std::string> many;
  for (int i = 0; i < 120; ++i) many.push_back(three[static_cast<std::size_t>(i % 3)]);
  const auto ids = encode_document(many, v, 100);
  ASSERT_EQ(ids.size(), 100u);
  for (std::size_t i = 0; i < 100; ++i) EXPECT_EQ(ids[i], static_cast<int>(i % 3) + 1);
  const std::vector<std::string> unknown{"q", "r"};
  EXPECT_EQ(encode_document(unknown, v, 4), (std::vector<int>(4, 0)));
  const std::vector<std::string> mixed{"q", "c", "r", "a"};
  EXPECT_EQ(encode_document(mixed, v, 3), (std::vector<int>{3, 1, 0}));
}

TEST(Encode, DecodeRoundTrip) {
  Rng rng(2);
  std::vector<std::string> words;
  for (int i = 0; i < 20; ++i) words.push_back("w" + std::to_string(i));
  const Vocabulary v = build_vocabulary(std::vector<TokenizedDocument>{doc(words)}, 1);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<std::string> seq;
    const std::size_t n = rng.below(12);
    for (std::size_t i = 0; i < n; ++i) seq.push_back(words[rng.below(words.size())]);
    const auto ids = encode_document(seq, v, 12);
    std::vector<int> prefix;
    for (int id : ids) {
      if (id == Vocabulary::kPadId) break;
      prefix.push_back(id);
    }
    EXPECT_EQ(decode_document(prefix, v), seq);
  }
}

TEST(Dataset, ClassesAndSubset) {
  const LabeledDataset ds = LabeledDataset::from_documents(
      {doc({"a"}, "neg"), doc({"b"}, "pos"), doc({"c"}, "neg")});
  EXPECT_EQ(ds.classes, (std::vector<std::string>{"neg", "pos"}));
  EXPECT_EQ(ds.labels(), (std::vector<int>{0, 1, 0}));
  const std::vector<std::size_t> idx{2, 1};
  const auto sub = ds.subset(idx);
  EXPECT_EQ(sub.size(), 2u);
  EXPECT_EQ(sub.classes, ds.classes);
  EXPECT_EQ(sub.documents[0].tokens, (std::vector<std::string>{"c"}));
  EXPECT_THROW(LabeledDataset::with_classes({doc({"a"}, "x")}, {"y"}), DataError);
}

TEST(Folds, BalancedFiveFold) {
  const LabeledDataset ds = balanced(50, 2);
  const FoldAssignment f = stratified_kfold(ds, 5, 1);
  for (int k = 0; k < 5; ++k) {
    std::map<int, int> per_class;
    for (std::size_t i : f.members(k)) ++per_class[ds.label_of(i)];
    EXPECT_EQ(per_class[0], 10);
    EXPECT_EQ(per_class[1], 10);
  }
}

TEST(Folds, TooFewMembersNamesTheClass) {
  std::vector<TokenizedDocument> docs;
  for (int i = 0; i < 10; ++i) docs.push_back(doc({"w"}, "big"));
  for (int i = 0; i < 3; ++i) docs.push_back(doc({"w"}, "tiny"));
  try {
    stratified_kfold(LabeledDataset::from_documents(docs), 5, 1);
    FAIL() << "expected DataError";
  } catch (const DataError& e) {
    EXPECT_NE(std::string(e.what()).find("tiny"), std::string::npos);
  }
  EXPECT_THROW(stratified_kfold(balanced(10, 2), 1, 1), ContractViolation);
}

TEST(Folds, PartitionPropertiesAndDeterminism) {
  Rng rng(12);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<TokenizedDocument> docs;
    const int k = 2 + static_cast<int>(rng.below(4));
    for (int c = 0; c < 3; ++c) {
      const int n = k + static_cast<int>(rng.below(20));
      for (int i = 0; i < n; ++i) docs.push_back(doc({"w"}, "c" + std::to_string(c)));
    }
    const LabeledDataset ds = LabeledDataset::from_documents(docs);
    const std::uint64_t seed = rng.next();
    const FoldAssignment f = stratified_kfold(ds, k, seed);
    ASSERT_EQ(f.fold.size(), ds.size());
    std::map<int, std::vector<int>> counts;  // class -> per-fold counts
    for (std::size_t i = 0; i < ds.size(); ++i) {
      ASSERT_GE(f.fold[i], 0);
      ASSERT_LT(f.fold[i], k);
      counts[ds.label_of(i)].resize(static_cast<std::size_t>(k));
      ++counts[ds.label_of(i)][static_cast<std::size_t>(f.fold[i])];
    }
    for (const auto& [c, v] : counts) {
      EXPECT_LE(*std::max_element(v.begin(), v.end()) - *std::min_element(v.begin(), v.end()), 1);
    }
    std::size_t total = 0;
    for (int fold = 0; fold < k; ++fold) {
      const auto m = f.members(fold), rest = f.complement(fold);
      total += m.size();
      EXPECT_EQ(m.size() + rest.size(), ds.size());
    }
    EXPECT_EQ(total, ds.size());
    EXPECT_EQ(stratified_kfold(ds, k, seed).fold, f.fold);
  }
}

TEST(Zipf, Examples) {
  const std::vector<std::int64_t> f{100, 50, 33, 25};
  EXPECT_NEAR(zipf_fit(f).slope, -1.0, 0.02);
  const std::vector<std::int64_t> flat{7, 7, 7, 7, 7};
  EXPECT_DOUBLE_EQ(zipf_fit(flat).slope, 0.0);
  const std::vector<std::int64_t> two{3, 1};
  EXPECT_THROW(zipf_fit(two), DataError);
}

TEST(Zipf, MatchesClosedFormLeastSquares) {
  const std::vector<std::int64_t> f{90, 41, 30, 20, 20, 11, 5, 2};
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double x = std::log(static_cast<double>(i + 1)), y = std::log(static_cast<double>(f[i]));
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  const ZipfFit fit = zipf_fit(f);
  EXPECT_NEAR(fit.slope, slope, 1e-12);
  EXPECT_NEAR(fit.intercept, (sy - slope * sx) / n, 1e-12);
}

TEST(Zipf, GeneratedCorpusHasUnitSlope) {
  SyntheticCorpusSpec spec;
  spec.classes = 1;
  spec.docs_per_class = 500;
  spec.vocab_per_class = 1000;
  spec.shared_vocab = 0;
  spec.doc_len = 1000;
  const LabeledDataset ds = generate_synthetic_corpus(spec, 3);
  const ZipfFit fit = zipf_fit(build_vocabulary(ds.documents, 1));
  EXPECT_GE(fit.slope, -1.1);
  EXPECT_LE(fit.slope, -0.9);
}

TEST(Synthetic, CountsSharingAndDeterminism) {
  SyntheticCorpusSpec spec;
  spec.classes = 2;
  spec.docs_per_class = 10;
  const LabeledDataset ds = generate_synthetic_corpus(spec, 1);
  EXPECT_EQ(ds.size(), 20u);
  EXPECT_EQ(ds.classes.size(), 2u);
  EXPECT_EQ(generate_synthetic_corpus(spec, 1).documents, ds.documents);
  EXPECT_NE(generate_synthetic_corpus(spec, 2).documents, ds.documents);

  spec.shared_vocab = 0;
  const LabeledDataset apart = generate_synthetic_corpus(spec, 1);
  std::map<std::string, std::set<std::string>> seen;  // token -> labels
  for (const auto& d : apart.documents) {
    for (const auto& t : d.tokens) seen[t].insert(*d.label);
  }
  for (const auto& [t, labels] : seen) EXPECT_EQ(labels.size(), 1u) << t;

  spec.total_docs = 7;
  EXPECT_EQ(generate_synthetic_corpus(spec, 1).size(), 7u);
}

TEST(Files, TokenizedTsvAndFoldCsvRoundTrip) {
  const fs::path dir = fs::temp_directory_path() / "textclf_corpus_files";
  fs::create_directories(dir);
  const std::vector<TokenizedDocument> docs{doc({"a", "b"}, "x"), doc({"c"}, "y"), doc({}, "x")};
  write_tokenized_tsv(dir / "t.tsv", docs);
  const auto back = read_tokenized_tsv(dir / "t.tsv");
  ASSERT_EQ(back.size(), docs.size());
  for (std::size_t i = 0; i < docs.size(); ++i) {
    EXPECT_EQ(back[i].tokens, docs[i].tokens);
    EXPECT_EQ(back[i].label, docs[i].label);
  }
  const LabeledDataset ds = balanced(4, 2);
  const FoldAssignment f = stratified_kfold(ds, 2, 9);
  write_fold_csv(dir / "folds.csv", ds, f);
  const auto lines = read_text_file(dir / "folds.csv");
  EXPECT_EQ(lines.substr(0, lines.find('\n')), "doc_id,fold");
  EXPECT_EQ(std::count(lines.begin(), lines.end(), '\n'), static_cast<long>(ds.size() + 1));
  fs::remove_all(dir);
}
