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


#ifndef TEXTCLF_SERIALIZE_HPP_
#define TEXTCLF_SERIALIZE_HPP_

#include <filesystem>
#include <string>

#include "json.hpp"
#include "textclf/corpus.hpp"

namespace textclf {

nlohmann::json vocabulary_to_json(const Vocabulary& vocab);
Vocabulary vocabulary_from_json(const nlohmann::json& j);

// Throws IoError on open or parse failure.
nlohmann::json read_json_file(const std::filesystem::path& path);
// Pretty-printed with sorted keys and a trailing newline.
void write_json_file(const std::filesystem::path& path, const nlohmann::json& j);

void write_text_file(const std::filesystem::path& path, const std::string& text);
std::string read_text_file(const std::filesystem::path& path);

}  // namespace textclf

#endif  // TEXTCLF_SERIALIZE_HPP_
