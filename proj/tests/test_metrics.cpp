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

#include "doctest.h"

#include <random>

#include "oracles.hpp"
#include "sstmeta/bleu.hpp"
#include "sstmeta/chrf.hpp"
#include "sstmeta/error.hpp"
#include "sstmeta/text.hpp"
#include "sstmeta/tokenizer_13a.hpp"
#include "test_support.hpp"

using namespace sstmeta;

namespace {

struct Case {
  std::string name;
  std::vector<std::string> hyps;
  std::vector<std::vector<std::string>> refs;
  double bleu = 0.0;
  double chrf = 0.0;
};

std::vector<Case> load_cases() {
  std::vector<Case> out;
  read_jsonl(testing::data_dir() / "bleu_cases.jsonl", [&](const Json& rec, const RecordLocation&) {
    out.push_back({rec.at("name"), rec.at("hyps"), rec.at("refs"), rec.at("sacrebleu_bleu"), rec.at("sacrebleu_chrf")});
  });
  return out;
}

std::string random_text(std::mt19937& rng, std::size_t max_words, const std::vector<std::string>& vocab) {
  const std::size_t n = std::uniform_int_distribution<std::size_t>(0, max_words)(rng);
  std::string s;
  for (std::size_t i = 0; i < n; ++i) {
    if (i) s += ' ';
    s += vocab[std::uniform_int_distribution<std::size_t>(0, vocab.size() - 1)(rng)];
  }
  return s;
}

}  // namespace

TEST_CASE("BLEU fixture matches the brute-force oracle and frozen reference values") {
  const auto cases = load_cases();
  REQUIRE(cases.size() == 20);
  for (const auto& c : cases) {
    const double native = bleu_document(c.hyps, c.refs);
    CHECK_MESSAGE(std::abs(native - oracle::bleu(c.hyps, c.refs)) < 1e-6, c.name);
    CHECK_MESSAGE(std::abs(native - c.bleu) < 0.01, c.name);
  }
}

TEST_CASE("BLEU hand-derived case") {
  const std::vector<std::string> hyp{"a b c d e"};
  const std::vector<std::vector<std::string>> refs{{"a b c d f"}};
  CHECK(bleu_document(hyp, refs) == doctest::Approx(66.874).epsilon(1e-4));
}

TEST_CASE("BLEU on random inputs matches the oracle") {
  std::mt19937 rng(11);
  const std::vector<std::string> vocab{"a", "b", "c", "d", "der", "die", "Haus", ".", ",", "3,5", "1990-2000", "(x)", "&amp;", "ü"};
  for (int i = 0; i < 300; ++i) {
    const std::size_t segs = std::uniform_int_distribution<std::size_t>(1, 3)(rng);
    const std::size_t nrefs = std::uniform_int_distribution<std::size_t>(1, 2)(rng);
    std::vector<std::string> hyps;
    std::vector<std::vector<std::string>> refs(nrefs);
    for (std::size_t s = 0; s < segs; ++s) {
      hyps.push_back(random_text(rng, 8, vocab));
      for (auto& r : refs) r.push_back(random_text(rng, 8, vocab));
    }
    CHECK(std::abs(bleu_document(hyps, refs) - oracle::bleu(hyps, refs)) < 1e-6);
  }
}

TEST_CASE("13a tokenizer agrees with the regex oracle") {
  std::mt19937 rng(5);
  const std::string alphabet = "ab09.,-&;:'\"()[]{}<>/!?$%#@ ~`^_|\\+=*";
  for (int i = 0; i < 2000; ++i) {
    const std::size_t n = std::uniform_int_distribution<std::size_t>(0, 20)(rng);
    std::string s;
    for (std::size_t k = 0; k < n; ++k) s += alphabet[std::uniform_int_distribution<std::size_t>(0, alphabet.size() - 1)(rng)];
    if (i % 7 == 0) s += "&quot;x&amp;y&lt;z&gt;";
    CHECK_MESSAGE(tokenize_13a(s) == oracle::tokenize_13a(s), s);
  }
  CHECK(tokenize_13a("Hallo, Welt! (Test) 3,5 1990-2000") == "Hallo , Welt ! ( Test ) 3,5 1990 - 2000");
}

TEST_CASE("BLEU rejects mismatched reference streams") {
  const std::vector<std::string> hyp{"a", "b"};
  const std::vector<std::vector<std::string>> refs{{"a"}};
  CHECK_THROWS_AS(bleu_document(hyp, refs), Error);
}

TEST_CASE("chrF fixture matches oracle and frozen reference values") {
  for (const auto& c : load_cases()) {
    const double native = chrf_document(c.hyps, c.refs);
    CHECK_MESSAGE(std::abs(native - oracle::chrf(c.hyps, c.refs)) < 1e-6, c.name);
    CHECK_MESSAGE(std::abs(native - c.chrf) < 0.01, c.name);
  }
}

TEST_CASE("chrF identity is exactly 100") {
  std::mt19937 rng(3);
  const std::vector<std::string> vocab{"ab", "c", "Straße", "über", "x.y", "12"};
  for (int i = 0; i < 200; ++i) {
    std::string s = random_text(rng, 6, vocab);
    if (s.empty()) s = "a";
    const std::vector<std::string> hyp{s};
    const std::vector<std::vector<std::string>> refs{{s}};
    CHECK(chrf_document(hyp, refs) == 100.0);
  }
}

TEST_CASE("chrF on short random strings matches the oracle") {
  std::mt19937 rng(9);
  const std::u32string alphabet = U"abcdeäöß .,";
  auto random_string = [&] {
    const std::size_t n = std::uniform_int_distribution<std::size_t>(0, 30)(rng);
    std::string s;
    for (std::size_t k = 0; k < n; ++k) {
      const char32_t c = alphabet[std::uniform_int_distribution<std::size_t>(0, alphabet.size() - 1)(rng)];
      s += encode_utf8(std::u32string(1, c));
    }
    return s;
  };
  for (int i = 0; i < 1000; ++i) {
    const std::size_t nrefs = std::uniform_int_distribution<std::size_t>(1, 2)(rng);
    std::vector<std::string> hyps{random_string()};
    std::vector<std::vector<std::string>> refs;
    for (std::size_t r = 0; r < nrefs; ++r) refs.push_back({random_string()});
    CHECK(std::abs(chrf_document(hyps, refs) - oracle::chrf(hyps, refs)) < 1e-6);
  }
  const std::vector<std::string> hyp{"abc"};
  const std::vector<std::vector<std::string>> refs{{"abd"}};
  CHECK(chrf_document(hyp, refs) == doctest::Approx(700.0 / 18.0));
}
