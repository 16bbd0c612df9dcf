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

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "sstmeta/corpus.hpp"
#include "sstmeta/variant.hpp"

namespace sstmeta {

using Tokens = std::vector<std::string>;

// A token stream cut into consecutive (possibly empty) segments.
class Segmentation {
 public:
  Segmentation() = default;
  explicit Segmentation(std::vector<Tokens> segments);

  const std::vector<Tokens>& segments() const { return segments_; }
  // End offset of every segment in the concatenated stream; nondecreasing,
  // the last entry equals the total token count.
  const std::vector<std::size_t>& boundary_offsets() const { return offsets_; }
  std::size_t size() const { return segments_.size(); }

  Tokens tokens() const;
  // Each segment as text, tokens joined by single spaces.
  std::vector<std::string> texts() const;

 private:
  std::vector<Tokens> segments_;
  std::vector<std::size_t> offsets_;
};

// Word tokens for WER: split on Unicode whitespace, punctuation stays
// attached.
Tokens wer_tokens(std::string_view text);
std::vector<Tokens> wer_tokens(std::span<const std::string> texts);

// Word-level Levenshtein distance with unit costs.
std::size_t edit_distance(std::span<const std::string> a, std::span<const std::string> b);

// Joins the segments into one sequence separated by single spaces, with
// whitespace normalized.
std::string single_sequence(std::span<const std::string> segments);

struct MwerOptions {
  bool ignore_case = false;
};

struct Resegmentation {
  Segmentation segmentation;
  std::size_t cost = 0;  // total word edit operations
};

// Cuts `hypothesis` into one contiguous span per reference segment so that
// the summed edit distance between spans and reference segments is minimal.
// Among optimal cuts the lexicographically smallest boundary vector (every
// boundary as far left as possible) is returned. Spans may be empty.
Resegmentation mwer_resegment(std::span<const std::string> hypothesis,
                              std::span<const Tokens> reference_segments,
                              const MwerOptions& options = {});

// Segment-aligned texts ready for a metric. `sources` is filled only when the
// pairing is aligned with the source segmentation.
struct AlignedPairing {
  std::vector<std::string> sources;
  std::vector<std::string> hypotheses;
  std::vector<std::string> references;
  std::size_t cost = 0;
};

// Resolves which side is resegmented for variants that use minimum-WER
// alignment with the interpreting reference:
//  - COMET needs source-aligned triples, so the interpreting is cut to the
//    translation's sentence boundaries and paired with candidate sentences.
//  - BLEU and chrF in Sent+mWER need one hypothesis segmentation shared with
//    the translation reference, so the interpreting is cut the same way.
//  - Otherwise the candidate is cut to the interpreting chunks.
// Throws Error for variants that do not use minimum-WER alignment.
AlignedPairing orient_for_variant(const MetricVariant& variant, const Document& document,
                                  const CandidateOutput& candidate,
                                  const DocumentReferences& references,
                                  const MwerOptions& options = {});

}  // namespace sstmeta
