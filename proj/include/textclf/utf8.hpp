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

#ifndef TEXTCLF_UTF8_HPP_
#define TEXTCLF_UTF8_HPP_

#include <string>
#include <string_view>

namespace textclf::utf8 {

// Strict decoder: rejects overlong forms, surrogates and truncated
// sequences. Throws DecodingError carrying the offending byte offset.
std::u32string decode(std::string_view bytes);

std::string encode(std::u32string_view text);
void append(std::string& out, char32_t cp);

bool is_valid(std::string_view bytes);

// White_Space property code points.
bool is_space(char32_t cp);

}  // namespace textclf::utf8

#endif  // TEXTCLF_UTF8_HPP_
