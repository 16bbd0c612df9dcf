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

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sstmeta/jsonl.hpp"
#include "sstmeta/types.hpp"

namespace sstmeta {

// One button press: time since playback start and the rated value (1 worst,
// 4 best).
struct Click {
  std::int64_t t_ms = 0;
  int value = 0;

  bool operator==(const Click&) const = default;
};

// The clicks of one evaluator over one candidate document of length
// `duration_ms`. Click times are strictly increasing and within
// [0, duration_ms].
struct RatingSession {
  std::string evaluator_id;
  std::string doc_id;
  std::string system_id;
  Latency latency = Latency::Low;
  std::int64_t duration_ms = 0;
  std::vector<Click> clicks;

  CandidateKey candidate() const { return {doc_id, system_id, latency}; }
};

enum class CrDefinition { CR, CRi };

std::string_view to_string(CrDefinition def);
CrDefinition parse_cr_definition(std::string_view text);

// Plain average of the click values. Throws Error("unrated session") when
// there are no clicks.
double cr(const RatingSession& session);

// Average of click values weighted by how long each value stays in effect:
// until the next click, and for the last click until the end of the
// document. Degenerate sessions whose first click is at the very end return
// the last click value.
double cri(const RatingSession& session);

double score_session(const RatingSession& session, CrDefinition def);

// Parses and validates one rating-log record
// {evaluator, doc_id, system, latency, duration_ms, clicks:[{t_ms, value}]}.
// Negative times, times past the duration, out-of-order times and values
// outside 1..4 are rejected with ParseError. Runs of equal timestamps keep
// only the last click; the number dropped is reported via `dropped_clicks`.
RatingSession parse_rating_session(const Json& rec, const RecordLocation& where,
                                   std::size_t* dropped_clicks = nullptr);

Json to_json(const RatingSession& session);

std::vector<RatingSession> load_rating_sessions(const std::filesystem::path& path);

// Mean CR and CRi of all scored sessions of one candidate document.
struct RatingScore {
  CandidateKey candidate;
  double cr = 0.0;
  double cri = 0.0;
  std::size_t n_sessions = 0;

  double value(CrDefinition def) const { return def == CrDefinition::CR ? cr : cri; }
};

// Groups sessions by candidate and averages them with equal weight per
// session. Sessions without clicks are skipped (and logged); candidates left
// without any scored session do not appear in the result. The result is
// sorted by candidate key.
std::vector<RatingScore> aggregate_ratings(std::span<const RatingSession> sessions);

}  // namespace sstmeta
