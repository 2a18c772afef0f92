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

#ifndef TEXTCLF_TEXT_PIPELINE_HPP_
#define TEXTCLF_TEXT_PIPELINE_HPP_

#include <cstddef>
#include <filesystem>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "textclf/document.hpp"

namespace textclf {

struct PipelineConfig {
  bool strip_markup = true;
  bool remove_digits_and_specials = true;
  std::filesystem::path hashtag_lexicon_path;
  std::filesystem::path suffix_rules_path;
  std::filesystem::path stopword_path;
  // Alternate rule table used instead of suffix_rules_path when use_lemmas.
  std::filesystem::path lemma_rules_path;
  int min_doc_frequency = 5;
  bool use_lemmas = false;

  // Paths to the resource files shipped under resources/.
  static PipelineConfig with_default_resources();
};

// Suffix rewrite rules, kept sorted longest suffix first. Equal-length
// suffixes are ordered bytewise so the table order is canonical.
class SuffixRuleTable {
 public:
  using Rule = std::pair<std::string, std::string>;

  SuffixRuleTable() = default;
  // Throws ConfigError on a duplicate or empty suffix.
  explicit SuffixRuleTable(std::vector<Rule> rules);

  // File format: "suffix<TAB>replacement" per line; replacement may be empty.
  static SuffixRuleTable load(const std::filesystem::path& path);

  const std::vector<Rule>& rules() const { return rules_; }

 private:
  std::vector<Rule> rules_;
};

class HashtagLexicon {
 public:
  // Entries are ASCII-lowercased on insertion. Throws ConfigError when empty.
  explicit HashtagLexicon(const std::vector<std::string>& words);
  static HashtagLexicon load(const std::filesystem::path& path);

  bool contains(std::string_view word) const;
  std::size_t max_entry_bytes() const { return max_bytes_; }
  std::size_t size() const { return words_.size(); }

 private:
  std::set<std::string, std::less<>> words_;
  std::size_t max_bytes_ = 0;
};

// Removes markup, links, image titles, digits (ASCII and Bengali) and the
// special-character set, then collapses whitespace runs to one space.
std::string clean_text(const RawDocument& raw, const PipelineConfig& cfg);

// Splits on Unicode whitespace and drops empty tokens.
std::vector<std::string> tokenize(std::string_view text);

// Greedy longest-prefix segmentation of a '#'-prefixed token. Returns the
// whole de-hashed token when no full segmentation exists.
std::vector<std::string> normalize_hashtag(std::string_view token,
                                           const HashtagLexicon& lex);

// Applies the single longest matching suffix rule, at most once.
std::string stem_token(std::string_view token, const SuffixRuleTable& rules);

bool is_special_char(char32_t cp);
bool is_digit_char(char32_t cp);

// Loaded resources plus the fixed stage order
// clean -> tokenize -> hashtag -> stem -> stopword.
class TextPipeline {
 public:
  // Loads every referenced resource; throws ConfigError naming the path.
  explicit TextPipeline(PipelineConfig cfg);
  TextPipeline(PipelineConfig cfg, HashtagLexicon lexicon,
               SuffixRuleTable rules, std::set<std::string> stopwords);

  TokenizedDocument apply(const RawDocument& doc) const;
  std::vector<TokenizedDocument> apply(std::span<const RawDocument> docs) const;

  const PipelineConfig& config() const { return cfg_; }

 private:
  PipelineConfig cfg_;
  HashtagLexicon lexicon_;
  SuffixRuleTable rules_;
  std::set<std::string, std::less<>> stopwords_;
};

std::vector<TokenizedDocument> apply_pipeline(std::span<const RawDocument> docs,
                                              const PipelineConfig& cfg);

// Drops every token whose document frequency over `docs` is below min_df.
std::vector<TokenizedDocument> prune_infrequent(
    std::span<const TokenizedDocument> docs, int min_df);

// One entry per non-empty line (CR stripped). Throws ConfigError naming the
// path when unreadable or not valid UTF-8.
std::vector<std::string> read_lines(const std::filesystem::path& path);
// As read_lines, minus '#' comment lines. Used for lexicons, rules and stopwords.
std::vector<std::string> read_resource_lines(const std::filesystem::path& path);

// "label<TAB>text" or plain "text" per line; ids are "doc<line-number>".
std::vector<RawDocument> read_raw_corpus(const std::filesystem::path& path);

}  // namespace textclf

#endif  // TEXTCLF_TEXT_PIPELINE_HPP_
