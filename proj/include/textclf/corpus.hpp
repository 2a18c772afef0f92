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

#ifndef TEXTCLF_CORPUS_HPP_
#define TEXTCLF_CORPUS_HPP_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "textclf/document.hpp"

namespace textclf {

// Token <-> id table. Id 0 is the padding id and maps to no token; real
// tokens occupy 1..size() ordered by descending corpus frequency with
// bytewise ties. Immutable after construction.
class Vocabulary {
 public:
  static constexpr int kPadId = 0;

  Vocabulary() = default;
  // Tokens listed in id order (element 0 gets id 1).
  Vocabulary(std::vector<std::string> tokens,
             std::vector<std::int64_t> corpus_frequency,
             std::vector<std::int64_t> document_frequency);

  std::size_t size() const { return tokens_.size(); }
  bool empty() const { return tokens_.empty(); }

  std::optional<int> id(std::string_view token) const;
  // Throws LookupError for the pad id or an out-of-range id.
  const std::string& token(int id) const;

  std::int64_t corpus_frequency(int id) const;
  std::int64_t document_frequency(int id) const;
  // Indexed by id; element 0 (pad) is zero.
  std::vector<std::int64_t> corpus_frequencies() const;

  const std::vector<std::string>& tokens() const { return tokens_; }
  // Content hash over tokens in id order.
  std::uint64_t fingerprint() const;

 private:
  std::vector<std::string> tokens_;
  std::vector<std::int64_t> cf_;
  std::vector<std::int64_t> df_;
  std::unordered_map<std::string, int> index_;
};

// Throws ContractViolation for min_df < 1 and DataError when no token
// survives the document-frequency threshold.
Vocabulary build_vocabulary(std::span<const TokenizedDocument> docs, int min_df);

// Known ids in order, truncated to max_len and right-padded with the pad id.
std::vector<int> encode_document(std::span<const std::string> tokens,
                                 const Vocabulary& vocab, std::size_t max_len);
// Inverse of encode_document over the non-pad prefix.
std::vector<std::string> decode_document(std::span<const int> ids,
                                         const Vocabulary& vocab);

struct LabeledDataset {
  std::vector<TokenizedDocument> documents;
  std::vector<std::string> classes;

  // Classes are the sorted distinct labels. Throws DataError on an unlabeled
  // document or an empty input.
  static LabeledDataset from_documents(std::vector<TokenizedDocument> docs);
  // Throws DataError when a label is missing from `classes`.
  static LabeledDataset with_classes(std::vector<TokenizedDocument> docs,
                                     std::vector<std::string> classes);

  std::size_t size() const { return documents.size(); }
  int class_index(std::string_view label) const;
  int label_of(std::size_t doc) const;
  std::vector<int> labels() const;
  LabeledDataset subset(std::span<const std::size_t> indices) const;
};

struct FoldAssignment {
  int k = 0;
  std::vector<int> fold;
  std::uint64_t seed = 0;

  std::vector<std::size_t> members(int f) const;
  std::vector<std::size_t> complement(int f) const;
};

// Per-class shuffled round-robin assignment; class start offsets rotate so
// fold sizes also stay within one. Throws DataError naming any class with
// fewer than k members.
FoldAssignment stratified_kfold(const LabeledDataset& ds, int k, std::uint64_t seed);

struct ZipfFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
};

// Least squares on (ln rank, ln frequency), 1-based ranks by descending
// frequency. Throws DataError with fewer than 3 tokens.
ZipfFit zipf_fit(const Vocabulary& vocab);
ZipfFit zipf_fit(std::span<const std::int64_t> frequencies);

struct SyntheticCorpusSpec {
  int classes = 2;
  int docs_per_class = 10;
  int vocab_per_class = 50;
  int shared_vocab = 10;
  int doc_len = 20;
  double zipf_exponent = 1.0;
  // When set, overrides docs_per_class and spreads this many documents over
  // the classes round-robin.
  std::optional<int> total_docs;
};

// Class c draws each token from its private vocabulary ("c<c>_w<r>") or the
// shared pool ("s_w<r>") with probability proportional to pool size, then
// by Zipf rank within the pool. Labels are "class<c>".
LabeledDataset generate_synthetic_corpus(const SyntheticCorpusSpec& spec,
                                         std::uint64_t seed);

// Tokenized dataset file: "label<TAB>space separated tokens" per line.
std::vector<TokenizedDocument> read_tokenized_tsv(const std::filesystem::path& path);
void write_tokenized_tsv(const std::filesystem::path& path,
                         std::span<const TokenizedDocument> docs);
// "doc_id,fold" with a header line.
void write_fold_csv(const std::filesystem::path& path, const LabeledDataset& ds,
                    const FoldAssignment& folds);

}  // namespace textclf

#endif  // TEXTCLF_CORPUS_HPP_
