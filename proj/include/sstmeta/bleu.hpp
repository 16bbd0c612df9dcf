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

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace sstmeta {

inline constexpr int kBleuMaxOrder = 4;

// Sufficient statistics of corpus BLEU; additive over segments.
struct BleuStats {
  std::int64_t hyp_len = 0;
  std::int64_t ref_len = 0;
  std::array<std::int64_t, kBleuMaxOrder> correct{};
  std::array<std::int64_t, kBleuMaxOrder> total{};

  BleuStats& operator+=(const BleuStats& other);
};

// Statistics for one hypothesis segment against any number of references.
// Text is tokenized with 13a, case-sensitively. Matches are clipped by the
// maximum count of each n-gram over the references; the reference length is
// the closest one (the shorter on ties).
BleuStats bleu_segment_stats(std::string_view hypothesis, std::span<const std::string> references);

// BLEU in [0, 100] from pooled statistics with exponential smoothing: the
// k-th order whose match count is zero gets precision 1 / (2^k * total).
double bleu_from_stats(const BleuStats& stats);

// Corpus BLEU over the segments of one document, equivalent to sacreBLEU
// with signature case:mixed|eff:no|tok:13a|smooth:exp. `references[r]` is the
// r-th reference stream and must have one entry per hypothesis segment.
// Throws Error on mismatched segment counts.
double bleu_document(std::span<const std::string> hypothesis_segments,
                     std::span<const std::vector<std::string>> references);

}  // namespace sstmeta
