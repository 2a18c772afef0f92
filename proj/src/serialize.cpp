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

#include "textclf/serialize.hpp"

#include <fstream>
#include <sstream>

#include "textclf/error.hpp"

namespace textclf {

nlohmann::json vocabulary_to_json(const Vocabulary& vocab) {
  std::vector<std::int64_t> cf, df;
  for (std::size_t id = 1; id <= vocab.size(); ++id) {
    cf.push_back(vocab.corpus_frequency(static_cast<int>(id)));
    df.push_back(vocab.document_frequency(static_cast<int>(id)));
  }
  return {{"tokens", vocab.tokens()}, {"corpus_frequency", cf}, {"document_frequency", df}};
}

Vocabulary vocabulary_from_json(const nlohmann::json& j) {
  try {
    return Vocabulary(j.at("tokens").get<std::vector<std::string>>(),
                      j.at("corpus_frequency").get<std::vector<std::int64_t>>(),
                      j.at("document_frequency").get<std::vector<std::int64_t>>());
  } catch (const nlohmann::json::exception& e) {
    throw IoError(std::string("malformed vocabulary: ") + e.what());
  }
}

nlohmann::json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path.string());
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw IoError(path.string() + ": " + e.what());
  }
}

void write_json_file(const std::filesystem::path& path, const nlohmann::json& j) {
  // std::map backed: keys come out sorted
  write_text_file(path, j.dump(2) + "\n");
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out << text;
  if (!out) throw IoError("failed writing " + path.string());
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace textclf
