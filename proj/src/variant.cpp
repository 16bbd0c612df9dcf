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

#include "sstmeta/variant.hpp"

#include <fmt/format.h>

#include "sstmeta/error.hpp"
#include "sstmeta/text.hpp"

namespace sstmeta {

std::string_view to_string(Metric m) {
  switch (m) {
    case Metric::BLEU: return "BLEU";
    case Metric::chrF: return "chrF";
    case Metric::BertScore: return "BertScore";
    case Metric::COMET: return "COMET";
  }
  return "BLEU";
}

std::string_view to_string(ReferenceMode r) {
  switch (r) {
    case ReferenceMode::Transl: return "transl";
    case ReferenceMode::Intp: return "intp";
    case ReferenceMode::TranslIntp: return "transl+intp";
  }
  return "transl";
}

std::string_view to_string(AlignmentMode a) {
  switch (a) {
    case AlignmentMode::Sent: return "Sent";
    case AlignmentMode::SingleSeq: return "SingleSeq";
    case AlignmentMode::mWER: return "mWER";
    case AlignmentMode::SentMwer: return "Sent+mWER";
  }
  return "Sent";
}

Metric parse_metric(std::string_view text) {
  for (Metric m : {Metric::BLEU, Metric::chrF, Metric::BertScore, Metric::COMET}) {
    if (text == to_string(m)) return m;
  }
  throw ParseError(fmt::format("unknown metric '{}'", text));
}

ReferenceMode parse_reference_mode(std::string_view text) {
  for (ReferenceMode r : {ReferenceMode::Transl, ReferenceMode::Intp, ReferenceMode::TranslIntp}) {
    if (text == to_string(r)) return r;
  }
  throw ParseError(fmt::format("unknown reference mode '{}'", text));
}

AlignmentMode parse_alignment_mode(std::string_view text) {
  for (AlignmentMode a : {AlignmentMode::Sent, AlignmentMode::SingleSeq, AlignmentMode::mWER,
                          AlignmentMode::SentMwer}) {
    if (text == to_string(a)) return a;
  }
  throw ParseError(fmt::format("unknown alignment mode '{}'", text));
}

bool is_neural(Metric m) { return m == Metric::BertScore || m == Metric::COMET; }

bool uses_mwer(AlignmentMode a) { return a == AlignmentMode::mWER || a == AlignmentMode::SentMwer; }

std::string MetricVariant::label() const {
  return fmt::format("{}/{}/{}", to_string(metric), to_string(reference), to_string(alignment));
}

bool is_legal(const MetricVariant& v) {
  switch (v.reference) {
    case ReferenceMode::Transl:
      return v.alignment == AlignmentMode::Sent || v.alignment == AlignmentMode::SingleSeq;
    case ReferenceMode::Intp:
      return v.alignment == AlignmentMode::SingleSeq || v.alignment == AlignmentMode::mWER;
    case ReferenceMode::TranslIntp:
      return v.alignment == AlignmentMode::SingleSeq || v.alignment == AlignmentMode::SentMwer;
  }
  return false;
}

void validate(const MetricVariant& v) {
  if (!is_legal(v)) throw Error(fmt::format("illegal metric variant {}", v.label()));
}

MetricVariant parse_variant(std::string_view label) {
  const std::size_t a = label.find('/');
  const std::size_t b = a == std::string_view::npos ? a : label.find('/', a + 1);
  if (b == std::string_view::npos) {
    throw ParseError(fmt::format("variant '{}' is not of the form metric/reference/alignment", label));
  }
  MetricVariant v{parse_metric(trim(label.substr(0, a))),
                  parse_reference_mode(trim(label.substr(a + 1, b - a - 1))),
                  parse_alignment_mode(trim(label.substr(b + 1)))};
  validate(v);
  return v;
}

std::vector<MetricVariant> default_variants() {
  using M = Metric;
  using R = ReferenceMode;
  using A = AlignmentMode;
  return {
      {M::COMET, R::Transl, A::Sent},
      {M::COMET, R::Transl, A::SingleSeq},
      {M::COMET, R::TranslIntp, A::SingleSeq},
      {M::BertScore, R::Transl, A::Sent},
      {M::BertScore, R::TranslIntp, A::SentMwer},
      {M::COMET, R::Intp, A::SingleSeq},
      {M::BertScore, R::TranslIntp, A::SingleSeq},
      {M::BertScore, R::Transl, A::SingleSeq},
      {M::chrF, R::TranslIntp, A::SentMwer},
      {M::BLEU, R::TranslIntp, A::SingleSeq},
      {M::chrF, R::Transl, A::Sent},
      {M::chrF, R::TranslIntp, A::SingleSeq},
      {M::chrF, R::Transl, A::SingleSeq},
      {M::BLEU, R::Transl, A::SingleSeq},
      {M::COMET, R::Intp, A::mWER},
      {M::BertScore, R::Intp, A::SingleSeq},
      {M::BLEU, R::TranslIntp, A::SentMwer},
      {M::chrF, R::Intp, A::SingleSeq},
      {M::BLEU, R::Transl, A::Sent},
      {M::chrF, R::Intp, A::mWER},
      {M::BLEU, R::Intp, A::SingleSeq},
      {M::BertScore, R::Intp, A::mWER},
      {M::BLEU, R::Intp, A::mWER},
  };
}

std::vector<MetricVariant> headline_variants() {
  return {{Metric::BLEU, ReferenceMode::Transl, AlignmentMode::Sent},
          {Metric::chrF, ReferenceMode::Transl, AlignmentMode::Sent},
          {Metric::BertScore, ReferenceMode::Transl, AlignmentMode::Sent},
          {Metric::COMET, ReferenceMode::Transl, AlignmentMode::Sent}};
}

}  // namespace sstmeta
