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

#include "sstmeta/detokenizer.hpp"

#include <algorithm>
#include <array>
#include <vector>

#include "sstmeta/text.hpp"

namespace sstmeta {

namespace {

enum class Attach { None, Left, Right };

bool all_closing_punct(std::u32string_view tok) {
  static constexpr std::u32string_view kClosing = U".,:;?!%)]}…";
  return !tok.empty() && std::all_of(tok.begin(), tok.end(), [](char32_t c) {
    return kClosing.find(c) != std::u32string_view::npos;
  });
}

bool is_english_clitic(std::u32string_view tok) {
  static const std::array<std::u32string_view, 14> kClitics = {
      U"'s", U"'re", U"'ve", U"'ll", U"'d", U"'m", U"'t",
      U"’s", U"’re", U"’ve", U"’ll", U"’d", U"’m", U"n't"};
  std::u32string lower(tok);
  for (char32_t& c : lower) {
    if (c >= 'A' && c <= 'Z') c += 0x20;
  }
  return std::find(kClitics.begin(), kClitics.end(), lower) != kClitics.end();
}

class Detokenizer {
 public:
  explicit Detokenizer(std::string_view language) : german_(language.starts_with("de")) {}

  Attach classify(std::u32string_view tok) {
    if (tok.size() == 1) {
      switch (tok[0]) {
        case U'(': case U'[': case U'{': case U'¿': case U'¡':
          return Attach::Right;
        case U'"':
          return toggle(double_open_);
        case U'\'':
          return toggle(single_open_);
        case U'„': case U'‚':  // „ ‚
          return Attach::Right;
        case U'“': case U'‘':  // “ ‘
          return german_ ? Attach::Left : Attach::Right;
        case U'”': case U'’':  // ” ’
          return Attach::Left;
        case U'»':  // »
          return german_ ? Attach::Right : Attach::Left;
        case U'«':  // «
          return german_ ? Attach::Left : Attach::Right;
        default:
          break;
      }
    }
    if (german_ && tok == U"%") return Attach::None;
    if (all_closing_punct(tok)) return Attach::Left;
    if (!german_ && is_english_clitic(tok)) return Attach::Left;
    return Attach::None;
  }

 private:
  static Attach toggle(bool& open) {
    open = !open;
    return open ? Attach::Right : Attach::Left;
  }

  bool german_;
  bool double_open_ = false;
  bool single_open_ = false;
};

}  // namespace

std::string detokenize(std::string_view text, std::string_view language) {
  Detokenizer rules(language);
  std::string out;
  bool glue_next = false;
  for (const std::string& token : split_whitespace(text)) {
    const Attach attach = rules.classify(decode_utf8(token));
    if (!out.empty() && !glue_next && attach != Attach::Left) out.push_back(' ');
    out += token;
    glue_next = attach == Attach::Right;
  }
  return out;
}

std::string strip_terminal_eos(std::string_view text) {
  static constexpr std::string_view kEos = "</s>";
  std::string_view rest = trim_right(text);
  bool stripped = false;
  while (rest.ends_with(kEos)) {
    rest = trim_right(rest.substr(0, rest.size() - kEos.size()));
    stripped = true;
  }
  return std::string(stripped ? rest : text);
}

}  // namespace sstmeta
