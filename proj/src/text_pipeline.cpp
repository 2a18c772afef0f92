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

#include "textclf/text_pipeline.hpp"

#include <algorithm>
#include <fstream>
#include <map>

#include "textclf/error.hpp"
#include "textclf/utf8.hpp"

namespace textclf {

namespace {

char ascii_lower(char c) {
  return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c;
}

std::string ascii_lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = ascii_lower(c);
  return out;
}

bool starts_with_ci(std::u32string_view text, std::size_t pos,
                    std::string_view prefix) {
  if (pos + prefix.size() > text.size()) return false;
  for (std::size_t i = 0; i < prefix.size(); ++i) {
    const char32_t cp = text[pos + i];
    if (cp >= 0x80 || ascii_lower(static_cast<char>(cp)) != prefix[i]) {
      return false;
    }
  }
  return true;
}

// Markdown image "![title](target)"; returns the end index or npos.
std::size_t match_markdown_image(std::u32string_view t, std::size_t pos) {
  if (t[pos] != U'!' || pos + 1 >= t.size() || t[pos + 1] != U'[') {
    return std::u32string_view::npos;
  }
  const std::size_t close = t.find(U"](", pos + 2);
  if (close == std::u32string_view::npos) return close;
  const std::size_t end = t.find(U')', close + 2);
  if (end == std::u32string_view::npos) return end;
  return end + 1;
}

// "&amp;" / "&#2534;" style character references, up to 10 characters.
std::size_t match_entity(std::u32string_view t, std::size_t pos) {
  if (t[pos] != U'&') return std::u32string_view::npos;
  for (std::size_t i = pos + 1; i < t.size() && i <= pos + 10; ++i) {
    const char32_t c = t[i];
    if (c == U';') return i > pos + 1 ? i + 1 : std::u32string_view::npos;
    const bool ok = (c >= U'a' && c <= U'z') || (c >= U'A' && c <= U'Z') ||
                    (c >= U'0' && c <= U'9') || c == U'#';
    if (!ok) break;
  }
  return std::u32string_view::npos;
}

std::u32string strip_markup(std::u32string_view t) {
  std::u32string out;
  out.reserve(t.size());
  std::size_t i = 0;
  while (i < t.size()) {
    const bool word_start = i == 0 || utf8::is_space(t[i - 1]) ||
                            t[i - 1] == U'>' || t[i - 1] == U'(';
    if (std::size_t end = match_markdown_image(t, i);
        end != std::u32string_view::npos) {
      out.push_back(U' ');
      i = end;
      continue;
    }
    if (t[i] == U'<') {
      const std::size_t end = t.find(U'>', i + 1);
      if (end != std::u32string_view::npos) {
        out.push_back(U' ');
        i = end + 1;
        continue;
      }
    }
    if (std::size_t end = match_entity(t, i); end != std::u32string_view::npos) {
      out.push_back(U' ');
      i = end;
      continue;
    }
    if (word_start && (starts_with_ci(t, i, "http://") ||
                       starts_with_ci(t, i, "https://") ||
                       starts_with_ci(t, i, "www."))) {
      while (i < t.size() && !utf8::is_space(t[i]) && t[i] != U'<') ++i;
      out.push_back(U' ');
      continue;
    }
    out.push_back(t[i]);
    ++i;
  }
  return out;
}

std::set<std::string, std::less<>> to_stopword_set(std::set<std::string> words) {
  return {words.begin(), words.end()};
}

}  // namespace

bool is_digit_char(char32_t cp) {
  return (cp >= U'0' && cp <= U'9') || (cp >= 0x09E6 && cp <= 0x09EF);
}

bool is_special_char(char32_t cp) {
  // ASCII punctuation except '#', which the hashtag stage consumes.
  if (cp < 0x80) {
    return cp != U'#' && ((cp >= 0x21 && cp <= 0x2F) ||
                          (cp >= 0x3A && cp <= 0x40) ||
                          (cp >= 0x5B && cp <= 0x60) ||
                          (cp >= 0x7B && cp <= 0x7E));
  }
  switch (cp) {
    case 0x00A1: case 0x00AB: case 0x00B7: case 0x00BB: case 0x00BF:
    case 0x0964: case 0x0965:  // danda, double danda
    case 0x09F3:               // taka sign
    case 0x2013: case 0x2014: case 0x2018: case 0x2019: case 0x201C:
    case 0x201D: case 0x2022: case 0x2026: case 0x2039: case 0x203A:
      return true;
    default:
      return false;
  }
}

PipelineConfig PipelineConfig::with_default_resources() {
  const std::filesystem::path dir = TEXTCLF_RESOURCE_DIR;
  PipelineConfig cfg;
  cfg.hashtag_lexicon_path = dir / "hashtag_lexicon_bn.txt";
  cfg.suffix_rules_path = dir / "stem_rules_bn.txt";
  cfg.lemma_rules_path = dir / "lemma_rules_bn.txt";
  cfg.stopword_path = dir / "stopwords_bn.txt";
  return cfg;
}

SuffixRuleTable::SuffixRuleTable(std::vector<Rule> rules) : rules_(std::move(rules)) {
  std::sort(rules_.begin(), rules_.end(), [](const Rule& a, const Rule& b) {
    if (a.first.size() != b.first.size()) return a.first.size() > b.first.size();
    return a.first < b.first;
  });
  for (std::size_t i = 0; i < rules_.size(); ++i) {
    if (rules_[i].first.empty()) throw ConfigError("suffix rule with empty suffix");
    if (i > 0 && rules_[i].first == rules_[i - 1].first) {
      throw ConfigError("duplicate suffix rule '" + rules_[i].first + "'");
    }
  }
}

SuffixRuleTable SuffixRuleTable::load(const std::filesystem::path& path) {
  std::vector<Rule> rules;
  for (const std::string& line : read_resource_lines(path)) {
    const auto tab = line.find('\t');
    if (tab == std::string::npos) {
      rules.emplace_back(line, "");
    } else {
      rules.emplace_back(line.substr(0, tab), line.substr(tab + 1));
    }
  }
  try {
    return SuffixRuleTable(std::move(rules));
  } catch (const ConfigError& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

HashtagLexicon::HashtagLexicon(const std::vector<std::string>& words) {
  for (const std::string& w : words) {
    if (w.empty()) continue;
    auto lowered = ascii_lower(w);
    max_bytes_ = std::max(max_bytes_, lowered.size());
    words_.insert(std::move(lowered));
  }
  if (words_.empty()) throw ConfigError("hashtag lexicon is empty");
}

HashtagLexicon HashtagLexicon::load(const std::filesystem::path& path) {
  try {
    return HashtagLexicon(read_resource_lines(path));
  } catch (const ConfigError& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

bool HashtagLexicon::contains(std::string_view word) const {
  return words_.find(word) != words_.end();
}

std::string clean_text(const RawDocument& raw, const PipelineConfig& cfg) {
  std::u32string text = utf8::decode(raw.text);
  if (cfg.strip_markup) text = strip_markup(text);

  std::string out;
  out.reserve(raw.text.size());
  bool pending_space = false;
  for (char32_t cp : text) {
    if (utf8::is_space(cp)) {
      pending_space = !out.empty();
      continue;
    }
    if (cfg.remove_digits_and_specials &&
        (is_digit_char(cp) || is_special_char(cp))) {
      continue;
    }
    if (pending_space) {
      out.push_back(' ');
      pending_space = false;
    }
    utf8::append(out, cp);
  }
  return out;
}

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> tokens;
  std::string current;
  for (char32_t cp : utf8::decode(text)) {
    if (utf8::is_space(cp)) {
      if (!current.empty()) tokens.push_back(std::move(current));
      current.clear();
    } else {
      utf8::append(current, cp);
    }
  }
  if (!current.empty()) tokens.push_back(std::move(current));
  return tokens;
}

std::vector<std::string> normalize_hashtag(std::string_view token,
                                           const HashtagLexicon& lex) {
  if (token.empty() || token.front() != '#') {
    throw ContractViolation("normalize_hashtag: token '" + std::string(token) +
                            "' lacks the '#' prefix");
  }
  const std::size_t first = token.find_first_not_of('#');
  if (first == std::string_view::npos) return {};
  const std::string body(token.substr(first));
  const std::string lowered = ascii_lower(body);

  std::vector<std::string> parts;
  std::size_t pos = 0;
  while (pos < lowered.size()) {
    std::size_t best = 0;
    const std::size_t limit = std::min(lex.max_entry_bytes(), lowered.size() - pos);
    for (std::size_t len = limit; len > 0; --len) {
      if (lex.contains(std::string_view(lowered).substr(pos, len))) {
        best = len;
        break;
      }
    }
    if (best == 0) return {body};
    parts.push_back(lowered.substr(pos, best));
    pos += best;
  }
  return parts;
}

std::string stem_token(std::string_view token, const SuffixRuleTable& rules) {
  for (const auto& [suffix, replacement] : rules.rules()) {
    if (token.size() > suffix.size() && token.ends_with(suffix)) {
      std::string stem(token.substr(0, token.size() - suffix.size()));
      stem += replacement;
      return stem;
    }
  }
  return std::string(token);
}

TextPipeline::TextPipeline(PipelineConfig cfg)
    : cfg_(std::move(cfg)),
      lexicon_(HashtagLexicon::load(cfg_.hashtag_lexicon_path)),
      rules_(SuffixRuleTable::load(cfg_.use_lemmas ? cfg_.lemma_rules_path
                                                   : cfg_.suffix_rules_path)) {
  if (cfg_.min_doc_frequency < 1) {
    throw ConfigError("min_doc_frequency must be >= 1");
  }
  for (std::string& w : read_resource_lines(cfg_.stopword_path)) {
    stopwords_.insert(std::move(w));
  }
}

TextPipeline::TextPipeline(PipelineConfig cfg, HashtagLexicon lexicon,
                           SuffixRuleTable rules, std::set<std::string> stopwords)
    : cfg_(std::move(cfg)),
      lexicon_(std::move(lexicon)),
      rules_(std::move(rules)),
      stopwords_(to_stopword_set(std::move(stopwords))) {
  if (cfg_.min_doc_frequency < 1) {
    throw ConfigError("min_doc_frequency must be >= 1");
  }
}

TokenizedDocument TextPipeline::apply(const RawDocument& doc) const {
  TokenizedDocument out{doc.id, {}, doc.label};
  for (const std::string& token : tokenize(clean_text(doc, cfg_))) {
    std::vector<std::string> pieces;
    if (token.front() == '#') {
      pieces = normalize_hashtag(token, lexicon_);
    } else {
      pieces.push_back(token);
    }
    for (std::string& piece : pieces) {
      std::erase(piece, '#');
      if (piece.empty()) continue;
      std::string stemmed = stem_token(piece, rules_);
      if (stopwords_.contains(piece) || stopwords_.contains(stemmed)) continue;
      out.tokens.push_back(std::move(stemmed));
    }
  }
  return out;
}

std::vector<TokenizedDocument> TextPipeline::apply(
    std::span<const RawDocument> docs) const {
  std::vector<TokenizedDocument> out;
  out.reserve(docs.size());
  for (const RawDocument& d : docs) out.push_back(apply(d));
  return out;
}

std::vector<TokenizedDocument> apply_pipeline(std::span<const RawDocument> docs,
                                              const PipelineConfig& cfg) {
  return TextPipeline(cfg).apply(docs);
}

std::vector<TokenizedDocument> prune_infrequent(
    std::span<const TokenizedDocument> docs, int min_df) {
  if (min_df < 1) throw ContractViolation("prune_infrequent: min_df must be >= 1");
  std::map<std::string_view, int> df;
  for (const TokenizedDocument& d : docs) {
    std::set<std::string_view> seen(d.tokens.begin(), d.tokens.end());
    for (std::string_view t : seen) ++df[t];
  }
  std::vector<TokenizedDocument> out;
  out.reserve(docs.size());
  for (const TokenizedDocument& d : docs) {
    TokenizedDocument kept{d.id, {}, d.label};
    for (const std::string& t : d.tokens) {
      if (df[t] >= min_df) kept.tokens.push_back(t);
    }
    out.push_back(std::move(kept));
  }
  return out;
}

std::vector<std::string> read_lines(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read resource file " + path.string());
  std::vector<std::string> lines;
  std::string line;
  std::size_t offset = 0;
  while (std::getline(in, line)) {
    const std::size_t line_bytes = line.size() + 1;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!utf8::is_valid(line)) {
      throw ConfigError(path.string() + ": invalid UTF-8 in line starting at byte " +
                        std::to_string(offset));
    }
    offset += line_bytes;
    if (!line.empty()) lines.push_back(std::move(line));
  }
  return lines;
}

std::vector<std::string> read_resource_lines(const std::filesystem::path& path) {
  std::vector<std::string> lines = read_lines(path);
  std::erase_if(lines, [](const std::string& l) { return l.front() == '#'; });
  return lines;
}

std::vector<RawDocument> read_raw_corpus(const std::filesystem::path& path) {
  std::vector<RawDocument> docs;
  for (std::string& line : read_lines(path)) {
    RawDocument doc;
    doc.id = "doc" + std::to_string(docs.size() + 1);
    const auto tab = line.find('\t');
    if (tab == std::string::npos) {
      doc.text = std::move(line);
    } else {
      doc.label = line.substr(0, tab);
      doc.text = line.substr(tab + 1);
    }
    docs.push_back(std::move(doc));
  }
  return docs;
}

}  // namespace textclf
