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

#include "sstmeta/alignment.hpp"

#include <algorithm>
#include <unordered_map>
#include <limits>
#include <numeric>

#include <fmt/format.h>

#include "sstmeta/error.hpp"
#include "sstmeta/text.hpp"

namespace sstmeta {

Segmentation::Segmentation(std::vector<Tokens> segments) : segments_(std::move(segments)) {
  offsets_.reserve(segments_.size());
  std::size_t end = 0;
  for (const auto& seg : segments_) {
    end += seg.size();
    offsets_.push_back(end);
  }
}

Tokens Segmentation::tokens() const {
  Tokens out;
  for (const auto& seg : segments_) out.insert(out.end(), seg.begin(), seg.end());
  return out;
}

std::vector<std::string> Segmentation::texts() const {
  std::vector<std::string> out;
  out.reserve(segments_.size());
  for (const auto& seg : segments_) out.push_back(join(seg, " "));
  return out;
}

Tokens wer_tokens(std::string_view text) { return split_whitespace(text); }

std::vector<Tokens> wer_tokens(std::span<const std::string> texts) {
  std::vector<Tokens> out;
  out.reserve(texts.size());
  for (const auto& t : texts) out.push_back(wer_tokens(t));
  return out;
}

std::size_t edit_distance(std::span<const std::string> a, std::span<const std::string> b) {
  std::vector<std::size_t> row(b.size() + 1);
  std::iota(row.begin(), row.end(), std::size_t{0});
  for (std::size_t i = 1; i <= a.size(); ++i) {
    std::size_t diag = row[0];
    row[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const std::size_t up = row[j];
      row[j] = std::min({row[j] + 1, row[j - 1] + 1, diag + (a[i - 1] == b[j - 1] ? 0 : 1)});
      diag = up;
    }
  }
  return row[b.size()];
}

std::string single_sequence(std::span<const std::string> segments) {
  return normalize_whitespace(join(segments, " "));
}

namespace {

constexpr std::size_t kUnreachable = std::numeric_limits<std::size_t>::max() / 4;

// Tokens are compared through small integer ids.
struct Vocabulary {
  explicit Vocabulary(bool fold) : fold_case(fold) {}

  std::vector<int> encode(std::span<const std::string> tokens) {
    std::vector<int> ids;
    ids.reserve(tokens.size());
    for (const auto& t : tokens) {
      auto [it, fresh] = index.try_emplace(fold_case ? to_lower(t) : t, static_cast<int>(index.size()));
      ids.push_back(it->second);
    }
    return ids;
  }

  bool fold_case;
  std::unordered_map<std::string, int> index;
};

}  // namespace

Resegmentation mwer_resegment(std::span<const std::string> hypothesis,
                              std::span<const Tokens> reference_segments,
                              const MwerOptions& options) {
  if (reference_segments.empty()) throw Error("mWER resegmentation needs reference segments");

  Vocabulary vocab(options.ignore_case);
  const std::vector<int> hyp = vocab.encode(hypothesis);
  std::vector<std::vector<int>> refs;
  refs.reserve(reference_segments.size());
  for (const auto& seg : reference_segments) refs.push_back(vocab.encode(seg));

  const std::size_t n = hyp.size();
  const std::size_t m = refs.size();

  // remaining[k][i]: cheapest way for segments k..m-1 to consume hyp[i..n).
  std::vector<std::vector<std::size_t>> remaining(m + 1, std::vector<std::size_t>(n + 1, kUnreachable));
  remaining[m][n] = 0;
  for (std::size_t k = m; k-- > 0;) {
    const auto& ref = refs[k];
    const std::size_t len = ref.size();
    // next[j] / cur[j]: best cost from hyp position i+1 / i with ref[j..len) left.
    std::vector<std::size_t> next(len + 1, kUnreachable);
    std::vector<std::size_t> cur(len + 1, kUnreachable);
    for (std::size_t i = n + 1; i-- > 0;) {
      cur[len] = remaining[k + 1][i];
      if (i < n) cur[len] = std::min(cur[len], next[len] + 1);
      for (std::size_t j = len; j-- > 0;) {
        std::size_t best = cur[j + 1] + 1;
        if (i < n) {
          best = std::min(best, next[j] + 1);
          best = std::min(best, next[j + 1] + (hyp[i] == ref[j] ? 0 : 1));
        }
        cur[j] = best;
      }
      remaining[k][i] = cur[0];
      std::swap(cur, next);
    }
  }

  Resegmentation result;
  result.cost = remaining[0][0];

  // Walk forward, fixing each boundary at the leftmost position that still
  // admits an optimal completion.
  std::vector<Tokens> spans;
  spans.reserve(m);
  std::size_t start = 0;
  std::size_t budget = result.cost;
  for (std::size_t k = 0; k < m; ++k) {
    const auto& ref = refs[k];
    const std::size_t len = ref.size();
    // row[j] after processing hyp[start..i): edit distance to ref[0..j).
    std::vector<std::size_t> row(len + 1);
    std::iota(row.begin(), row.end(), std::size_t{0});
    std::size_t chosen = kUnreachable;
    std::size_t chosen_cost = 0;
    for (std::size_t i = start;; ++i) {
      if (row[len] + remaining[k + 1][i] == budget) {
        chosen = i;
        chosen_cost = row[len];
        break;
      }
      if (i == n) break;
      std::size_t diag = row[0];
      row[0] += 1;
      for (std::size_t j = 1; j <= len; ++j) {
        const std::size_t up = row[j];
        row[j] = std::min({row[j] + 1, row[j - 1] + 1, diag + (hyp[i] == ref[j - 1] ? 0 : 1)});
        diag = up;
      }
    }
    if (chosen == kUnreachable) throw Error("mWER resegmentation: inconsistent dynamic program");
    spans.emplace_back(hypothesis.begin() + static_cast<std::ptrdiff_t>(start),
                       hypothesis.begin() + static_cast<std::ptrdiff_t>(chosen));
    budget -= chosen_cost;
    start = chosen;
  }
  result.segmentation = Segmentation(std::move(spans));
  return result;
}

AlignedPairing orient_for_variant(const MetricVariant& variant, const Document& document,
                                  const CandidateOutput& candidate,
                                  const DocumentReferences& references,
                                  const MwerOptions& options) {
  if (!uses_mwer(variant.alignment)) {
    throw Error(fmt::format("{} does not use mWER alignment", variant.label()));
  }
  validate(variant);

  AlignedPairing pairing;
  const bool cut_interpreting =
      variant.metric == Metric::COMET ||
      (variant.alignment == AlignmentMode::SentMwer && !is_neural(variant.metric));
  if (cut_interpreting) {
    const Tokens intp = wer_tokens(single_sequence(references.interpreting));
    const auto sentences = wer_tokens(references.translation);
    Resegmentation cut = mwer_resegment(intp, sentences, options);
    pairing.sources = document.source_texts();
    pairing.hypotheses = candidate.texts();
    pairing.references = cut.segmentation.texts();
    pairing.cost = cut.cost;
  } else {
    const Tokens hyp = wer_tokens(single_sequence(candidate.texts()));
    const auto chunks = wer_tokens(references.interpreting);
    Resegmentation cut = mwer_resegment(hyp, chunks, options);
    pairing.hypotheses = cut.segmentation.texts();
    pairing.references = references.interpreting;
    pairing.cost = cut.cost;
  }
  return pairing;
}

}  // namespace sstmeta
