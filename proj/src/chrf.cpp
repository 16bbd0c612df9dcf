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

#include "sstmeta/chrf.hpp"

#include <algorithm>
#include <unordered_map>

#include <fmt/format.h>

#include "sstmeta/error.hpp"
#include "sstmeta/text.hpp"

namespace sstmeta {

namespace {

using CharNgrams = std::array<std::unordered_map<std::u32string, std::int64_t>, kChrfCharOrder>;

CharNgrams extract_char_ngrams(std::string_view text) {
  std::u32string chars;
  for (char32_t cp : decode_utf8(text)) {
    if (!is_unicode_space(cp)) chars.push_back(cp);
  }
  CharNgrams grams;
  for (int n = 1; n <= kChrfCharOrder; ++n) {
    for (std::size_t i = 0; i + n <= chars.size(); ++i) ++grams[n - 1][chars.substr(i, n)];
  }
  return grams;
}

ChrfStats match_stats(const CharNgrams& hyp, const CharNgrams& ref) {
  ChrfStats stats;
  for (int n = 0; n < kChrfCharOrder; ++n) {
    std::int64_t hyp_count = 0;
    std::int64_t ref_count = 0;
    std::int64_t match = 0;
    for (const auto& [gram, count] : hyp[n]) {
      hyp_count += count;
      if (auto it = ref[n].find(gram); it != ref[n].end()) match += std::min(count, it->second);
    }
    for (const auto& [gram, count] : ref[n]) ref_count += count;
    // Hypothesis n-grams only count when the reference has n-grams of this order.
    stats.orders[n] = {ref[n].empty() ? 0 : hyp_count, ref_count, match};
  }
  return stats;
}

}  // namespace

ChrfStats& ChrfStats::operator+=(const ChrfStats& other) {
  for (int n = 0; n < kChrfCharOrder; ++n) {
    orders[n].hyp += other.orders[n].hyp;
    orders[n].ref += other.orders[n].ref;
    orders[n].match += other.orders[n].match;
  }
  return *this;
}

double chrf_from_stats(const ChrfStats& stats) {
  constexpr double factor = kChrfBeta * kChrfBeta;
  double avg_prec = 0.0;
  double avg_rec = 0.0;
  int effective_order = 0;
  for (const auto& o : stats.orders) {
    if (o.hyp > 0 && o.ref > 0) {
      avg_prec += static_cast<double>(o.match) / static_cast<double>(o.hyp);
      avg_rec += static_cast<double>(o.match) / static_cast<double>(o.ref);
      ++effective_order;
    }
  }
  if (effective_order == 0) return 0.0;
  avg_prec /= effective_order;
  avg_rec /= effective_order;
  if (avg_prec + avg_rec == 0.0) return 0.0;
  return 100.0 * (1.0 + factor) * avg_prec * avg_rec / (factor * avg_prec + avg_rec);
}

ChrfStats chrf_segment_stats(std::string_view hypothesis,
                             std::span<const std::string> references) {
  const CharNgrams hyp = extract_char_ngrams(hypothesis);
  ChrfStats best;
  double best_f = -1.0;
  for (const std::string& ref : references) {
    ChrfStats stats = match_stats(hyp, extract_char_ngrams(ref));
    const double f = chrf_from_stats(stats);
    if (f > best_f) {
      best_f = f;
      best = stats;
    }
  }
  return best;
}

double chrf_document(std::span<const std::string> hypothesis_segments,
                     std::span<const std::vector<std::string>> references) {
  if (references.empty()) throw Error("chrF needs at least one reference");
  for (const auto& ref : references) {
    if (ref.size() != hypothesis_segments.size()) {
      throw Error(fmt::format("chrF: {} hypothesis segments but a reference has {}",
                              hypothesis_segments.size(), ref.size()));
    }
  }
  ChrfStats pooled;
  std::vector<std::string> seg_refs(references.size());
  for (std::size_t i = 0; i < hypothesis_segments.size(); ++i) {
    for (std::size_t r = 0; r < references.size(); ++r) seg_refs[r] = references[r][i];
    pooled += chrf_segment_stats(hypothesis_segments[i], seg_refs);
  }
  return chrf_from_stats(pooled);
}

}  // namespace sstmeta
