/*
 * Copyright 2026 The stancegp Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

// Internal UTF-8 helpers for the normalization pipeline.

#include <string>
#include <string_view>
#include <vector>

namespace stancegp::utf8 {

/// Decodes UTF-8; malformed sequences decode to U+FFFD.
std::u32string decode(std::string_view text);
std::string encode(std::u32string_view text);
void append(std::string& out, char32_t cp);

bool is_space(char32_t cp);
/// Punctuation (ASCII and common Unicode punctuation blocks).
bool is_punct(char32_t cp);
/// Simple case folding for Latin, Greek, Cyrillic, and fullwidth Latin.
char32_t to_lower(char32_t cp);
bool is_upper(char32_t cp);

/// Splits on whitespace, dropping empty pieces.
std::vector<std::string_view> split_whitespace(std::string_view text);

}  // namespace stancegp::utf8
