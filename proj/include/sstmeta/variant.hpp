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

#include <compare>
#include <string>
#include <string_view>
#include <vector>

namespace sstmeta {

enum class Metric { BLEU, chrF, BertScore, COMET };
enum class ReferenceMode { Transl, Intp, TranslIntp };
enum class AlignmentMode { Sent, SingleSeq, mWER, SentMwer };

std::string_view to_string(Metric m);
std::string_view to_string(ReferenceMode r);
std::string_view to_string(AlignmentMode a);
Metric parse_metric(std::string_view text);
ReferenceMode parse_reference_mode(std::string_view text);
AlignmentMode parse_alignment_mode(std::string_view text);

bool is_neural(Metric m);
bool uses_mwer(AlignmentMode a);

// One scoring configuration: which metric, against which reference(s), with
// which segment alignment.
struct MetricVariant {
  Metric metric = Metric::BLEU;
  ReferenceMode reference = ReferenceMode::Transl;
  AlignmentMode alignment = AlignmentMode::Sent;

  auto operator<=>(const MetricVariant&) const = default;
  bool operator==(const MetricVariant&) const = default;

  // "COMET/transl/Sent"
  std::string label() const;
};

// Checks the combination rules: the interpreting reference has no sentence
// alignment, translation alone is never resegmented, and Sent+mWER pairs the
// sentence-aligned translation with the resegmented interpreting.
bool is_legal(const MetricVariant& v);
void validate(const MetricVariant& v);  // throws Error when illegal

// Parses "metric/reference/alignment" and validates it.
MetricVariant parse_variant(std::string_view label);

// The 23 variants compared in the study, most correlating first as
// originally reported.
std::vector<MetricVariant> default_variants();

// BLEU, chrF, BertScore and COMET against the translation with sentence
// alignment.
std::vector<MetricVariant> headline_variants();

}  // namespace sstmeta
