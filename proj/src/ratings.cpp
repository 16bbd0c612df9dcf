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

#include "sstmeta/ratings.hpp"

#include <map>

#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include "sstmeta/error.hpp"

namespace sstmeta {

std::string_view to_string(CrDefinition def) { return def == CrDefinition::CR ? "CR" : "CRi"; }

CrDefinition parse_cr_definition(std::string_view text) {
  if (text == "CR") return CrDefinition::CR;
  if (text == "CRi") return CrDefinition::CRi;
  throw ParseError(fmt::format("unknown CR definition '{}' (expected CR or CRi)", text));
}

double cr(const RatingSession& session) {
  if (session.clicks.empty()) throw Error("unrated session");
  std::int64_t sum = 0;
  for (const Click& c : session.clicks) sum += c.value;
  return static_cast<double>(sum) / static_cast<double>(session.clicks.size());
}

double cri(const RatingSession& session) {
  const auto& clicks = session.clicks;
  if (clicks.empty()) throw Error("unrated session");
  const std::int64_t span = session.duration_ms - clicks.front().t_ms;
  if (span <= 0) return clicks.back().value;
  // Integer milliseconds keep the weighted sum exact.
  std::int64_t weighted = 0;
  for (std::size_t i = 0; i + 1 < clicks.size(); ++i) {
    weighted += (clicks[i + 1].t_ms - clicks[i].t_ms) * clicks[i].value;
  }
  weighted += (session.duration_ms - clicks.back().t_ms) * clicks.back().value;
  return static_cast<double>(weighted) / static_cast<double>(span);
}

double score_session(const RatingSession& session, CrDefinition def) {
  return def == CrDefinition::CR ? cr(session) : cri(session);
}

RatingSession parse_rating_session(const Json& rec, const RecordLocation& where,
                                   std::size_t* dropped_clicks) {
  RatingSession s;
  s.evaluator_id = get_string(rec, "evaluator", where);
  s.doc_id = get_string(rec, "doc_id", where);
  s.system_id = get_string(rec, "system", where);
  try {
    s.latency = parse_latency(get_string(rec, "latency", where));
  } catch (const ParseError& e) {
    throw ParseError(fmt::format("{}: {}", where.str(), e.what()));
  }
  s.duration_ms = get_int(rec, "duration_ms", where);
  if (s.duration_ms < 0) throw ParseError(fmt::format("{}: negative duration_ms", where.str()));

  std::size_t dropped = 0;
  for (const Json& c : get_array(rec, "clicks", where)) {
    if (!c.is_object()) throw ParseError(fmt::format("{}: click must be an object", where.str()));
    Click click{get_int(c, "t_ms", where), static_cast<int>(get_int(c, "value", where))};
    if (click.t_ms < 0) {
      throw ParseError(fmt::format("{}: click at {} ms precedes playback start", where.str(),
                                   click.t_ms));
    }
    if (click.t_ms > s.duration_ms) {
      throw ParseError(fmt::format("{}: click at {} ms is past the document end ({} ms)",
                                   where.str(), click.t_ms, s.duration_ms));
    }
    if (click.value < 1 || click.value > 4) {
      throw ParseError(fmt::format("{}: click value {} outside 1..4", where.str(), click.value));
    }
    if (!s.clicks.empty() && click.t_ms < s.clicks.back().t_ms) {
      throw ParseError(fmt::format("{}: click times must be increasing", where.str()));
    }
    if (!s.clicks.empty() && click.t_ms == s.clicks.back().t_ms) {
      s.clicks.back() = click;
      ++dropped;
      continue;
    }
    s.clicks.push_back(click);
  }
  if (dropped > 0 && dropped_clicks == nullptr) {
    spdlog::warn("{}: dropped {} clicks sharing a timestamp with a later click", where.str(),
                 dropped);
  }
  if (dropped_clicks) *dropped_clicks = dropped;
  return s;
}

Json to_json(const RatingSession& session) {
  Json clicks = Json::array();
  for (const Click& c : session.clicks) clicks.push_back({{"t_ms", c.t_ms}, {"value", c.value}});
  return Json{{"evaluator", session.evaluator_id},
              {"doc_id", session.doc_id},
              {"system", session.system_id},
              {"latency", std::string(to_string(session.latency))},
              {"duration_ms", session.duration_ms},
              {"clicks", std::move(clicks)}};
}

std::vector<RatingSession> load_rating_sessions(const std::filesystem::path& path) {
  std::vector<RatingSession> sessions;
  std::size_t dropped_total = 0;
  read_jsonl(path, [&](const Json& rec, const RecordLocation& where) {
    std::size_t dropped = 0;
    sessions.push_back(parse_rating_session(rec, where, &dropped));
    dropped_total += dropped;
  });
  if (dropped_total > 0) {
    spdlog::warn("{}: dropped {} clicks sharing a timestamp with a later click", path.string(),
                 dropped_total);
  }
  return sessions;
}

std::vector<RatingScore> aggregate_ratings(std::span<const RatingSession> sessions) {
  struct Sums {
    double cr = 0.0;
    double cri = 0.0;
    std::size_t n = 0;
  };
  std::map<CandidateKey, Sums> groups;
  std::size_t unrated = 0;
  for (const RatingSession& s : sessions) {
    if (s.clicks.empty()) {
      ++unrated;
      continue;
    }
    Sums& g = groups[s.candidate()];
    g.cr += cr(s);
    g.cri += cri(s);
    ++g.n;
  }
  if (unrated > 0) spdlog::warn("skipped {} rating sessions without clicks", unrated);

  std::vector<RatingScore> out;
  out.reserve(groups.size());
  for (const auto& [key, g] : groups) {
    const auto n = static_cast<double>(g.n);
    out.push_back({key, g.cr / n, g.cri / n, g.n});
  }
  return out;
}

}  // namespace sstmeta
