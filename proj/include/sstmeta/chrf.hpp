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

inline constexpr int kChrfCharOrder = 6;
inline constexpr double kChrfBeta = 2.0;

// Per character n-gram order: hypothesis n-grams, reference n-grams and
// clipped matches. Additive over segments.
struct ChrfStats {
  struct Order {
    std::int64_t hyp = 0;
    std::int64_t ref = 0;
    std::int64_t match = 0;
  };
  std::array<Order, kChrfCharOrder> orders{};

  ChrfStats& operator+=(const ChrfStats& other);
};

// Character n-gram statistics (orders 1..6, whitespace removed, code points)
// of one segment against each reference; the reference giving the highest
// segment F-score wins, the first one on ties.
ChrfStats chrf_segment_stats(std::string_view hypothesis, std::span<const std::string> references);

// chrF with beta = 2 in [0, 100]: precision and recall are averaged over the
// orders for which both sides have n-grams, then combined into F_beta.
double chrf_from_stats(const ChrfStats& stats);

// Document-level chrF (sacreBLEU defaults: nc=6, nw=0, beta=2) pooling the
// statistics of all segments. Throws Error on mismatched segment counts.
double chrf_document(std::span<const std::string> hypothesis_segments,
                     std::span<const std::vector<std::string>> references);

}  // namespace sstmeta
