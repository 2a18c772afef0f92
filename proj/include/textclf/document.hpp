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

#ifndef TEXTCLF_DOCUMENT_HPP_
#define TEXTCLF_DOCUMENT_HPP_

#include <optional>
#include <string>
#include <vector>

namespace textclf {

struct RawDocument {
  std::string id;
  std::string text;
  std::optional<std::string> label;
};

struct TokenizedDocument {
  std::string id;
  std::vector<std::string> tokens;
  std::optional<std::string> label;

  friend bool operator==(const TokenizedDocument&,
                         const TokenizedDocument&) = default;
};

}  // namespace textclf

#endif  // TEXTCLF_DOCUMENT_HPP_
