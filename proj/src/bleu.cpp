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

#include "sstmeta/bleu.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <unordered_map>

#include <fmt/format.h>

#include "sstmeta/error.hpp"
#include "sstmeta/text.hpp"
#include "sstmeta/tokenizer_13a.hpp"

namespace sstmeta {

namespace {

using NgramCounts = std::unordered_map<std::string, std::int64_t>;

std::vector<std::string> tokens_13a(std::string_view text) {
  return split_whitespace(tokenize_13a(trim_right(text)));
}

// Keys are the n-gram tokens joined by single spaces; tokens never contain
// whitespace, so the order is recoverable from the key.
NgramCounts count_ngrams(const std::vector<std::string>& tokens) {
  NgramCounts counts;
  for (int n = 1; n <= kBleuMaxOrder; ++n) {
    for (std::size_t i = 0; i + n <= tokens.size(); ++i) {
      std::string key = tokens[i];
      for (int k = 1; k < n; ++k) {
        key.push_back(' ');
        key += tokens[i + k];
      }
      ++counts[key];
    }
  }
  return counts;
}

int ngram_order(const std::string& key) {
  return 1 + static_cast<int>(std::count(key.begin(), key.end(), ' '));
}

double log_floor(double x) { return x == 0.0 ? -9999999999.0 : std::log(x); }

}  // namespace

BleuStats& BleuStats::operator+=(const BleuStats& other) {
  hyp_len += other.hyp_len;
  ref_len += other.ref_len;
  for (int n = 0; n < kBleuMaxOrder; ++n) {
    correct[n] += other.correct[n];
    total[n] += other.total[n];
  }
  return *this;
}

BleuStats bleu_segment_stats(std::string_view hypothesis,
                             std::span<const std::string> references) {
  BleuStats stats;
  const auto hyp_tokens = tokens_13a(hypothesis);
  stats.hyp_len = static_cast<std::int64_t>(hyp_tokens.size());

  NgramCounts max_ref_counts;
  std::int64_t closest_len = -1;
  std::int64_t closest_diff = -1;
  for (const std::string& ref : references) {
    const auto ref_tokens = tokens_13a(ref);
    const auto len = static_cast<std::int64_t>(ref_tokens.size());
    const std::int64_t diff = std::llabs(stats.hyp_len - len);
    if (closest_diff == -1 || diff < closest_diff) {
      closest_diff = diff;
      closest_len = len;
    } else if (diff == closest_diff && len < closest_len) {
      closest_len = len;
    }
    for (const auto& [ngram, count] : count_ngrams(ref_tokens)) {
      auto& slot = max_ref_counts[ngram];
      slot = std::max(slot, count);
    }
  }
  stats.ref_len = std::max<std::int64_t>(closest_len, 0);

  for (const auto& [ngram, count] : count_ngrams(hyp_tokens)) {
    const int n = ngram_order(ngram) - 1;
    stats.total[n] += count;
    if (auto it = max_ref_counts.find(ngram); it != max_ref_counts.end()) {
      stats.correct[n] += std::min(count, it->second);
    }
  }
  return stats;
}

double bleu_from_stats(const BleuStats& stats) {
  if (stats.hyp_len == 0) return 0.0;
  if (std::all_of(stats.correct.begin(), stats.correct.end(), [](auto c) { return c == 0; })) {
    return 0.0;
  }
  double brevity = 1.0;
  if (stats.hyp_len < stats.ref_len) {
    brevity = std::exp(1.0 - static_cast<double>(stats.ref_len) / static_cast<double>(stats.hyp_len));
  }

  std::array<double, kBleuMaxOrder> precisions{};
  double smooth = 1.0;
  for (int n = 0; n < kBleuMaxOrder; ++n) {
    if (stats.total[n] == 0) break;
    if (stats.correct[n] == 0) {
      smooth *= 2.0;
      precisions[n] = 100.0 / (smooth * static_cast<double>(stats.total[n]));
    } else {
      precisions[n] = 100.0 * static_cast<double>(stats.correct[n]) /
                      static_cast<double>(stats.total[n]);
    }
  }
  double log_sum = 0.0;
  for (double p : precisions) log_sum += log_floor(p);
  return brevity * std::exp(log_sum / kBleuMaxOrder);
}

double bleu_document(std::span<const std::string> hypothesis_segments,
                     std::span<const std::vector<std::string>> references) {
  if (references.empty()) throw Error("BLEU needs at least one reference");
  for (const auto& ref : references) {
    if (ref.size() != hypothesis_segments.size()) {
      throw Error(fmt::format("BLEU: {} hypothesis segments but a reference has {}",
                              hypothesis_segments.size(), ref.size()));
    }
  }
  BleuStats pooled;
  std::vector<std::string> seg_refs(references.size());
  for (std::size_t i = 0; i < hypothesis_segments.size(); ++i) {
    for (std::size_t r = 0; r < references.size(); ++r) seg_refs[r] = references[r][i];
    pooled += bleu_segment_stats(hypothesis_segments[i], seg_refs);
  }
  return bleu_from_stats(pooled);
}

}  // namespace sstmeta
