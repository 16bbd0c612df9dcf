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

#include <string>
#include <string_view>

namespace sstmeta {

// Rule-based detokenizer for whitespace-tokenized German or English text.
//
// Only whitespace is changed: closing punctuation (. , : ; ? ! % and closing
// brackets) attaches to the preceding token, opening brackets attach to the
// following one, and straight quotes alternate between opening and closing.
// Typographic quotes follow the conventions of `language` ("de" uses „..“ and
// »..«, anything else is treated as English “..” and «..»). English clitics
// such as 's and n't attach to the left.
std::string detokenize(std::string_view text, std::string_view language);

// Removes the terminal end-of-sequence marker "</s>" together with the
// whitespace around it. Repeated terminal markers are all removed so that the
// operation is idempotent; interior markers are kept. Text without a terminal
// marker is returned unchanged.
std::string strip_terminal_eos(std::string_view text);

}  // namespace sstmeta
