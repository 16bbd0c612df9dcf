// Copyright 2026 The sstmeta Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace sstmeta {

// UTF-8 helpers. Invalid byte sequences decode to U+FFFD.
std::u32string decode_utf8(std::string_view text);
std::string encode_utf8(std::u32string_view text);
void append_utf8(std::string& out, char32_t cp);

// Same character set as Python's str.isspace().
bool is_unicode_space(char32_t cp);

// Splits on runs of Unicode whitespace; leading/trailing whitespace produces
// no empty tokens.
std::vector<std::string> split_whitespace(std::string_view text);

std::string join(std::span<const std::string> parts, std::string_view sep);

// Collapses whitespace runs to single ASCII spaces and trims both ends.
std::string normalize_whitespace(std::string_view text);

std::string_view trim_right(std::string_view text);
std::string_view trim(std::string_view text);

// Simple case folding for ASCII, Latin-1 and Latin Extended-A letters.
std::string to_lower(std::string_view text);

}  // namespace sstmeta
