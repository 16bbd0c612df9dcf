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

#include "sstmeta/service.hpp"

#include <algorithm>
#include <sstream>

#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include "httplib.h"
#include "sstmeta/error.hpp"

namespace sstmeta {

Json to_json(const SessionPackage& package) {
  Json captions = Json::array();
  for (const auto& c : package.captions) captions.push_back(Json{{"t_ms", c.t_ms}, {"text", c.text}});
  return Json{{"evaluator", package.evaluator_id},
              {"doc_id", package.candidate.doc_id},
              {"system", package.candidate.system_id},
              {"latency", std::string(to_string(package.candidate.latency))},
              {"candidate_id", package.candidate.str()},
              {"duration_ms", package.duration_ms},
              {"offset_ms", package.offset_ms},
              {"captions", captions}};
}

SessionPackage make_session_package(const Document& document, const CandidateOutput& candidate,
                                    std::string evaluator_id) {
  SessionPackage package;
  package.evaluator_id = std::move(evaluator_id);
  package.candidate = candidate.key();
  for (std::size_t i = 0; i < candidate.segments.size(); ++i) {
    const auto& seg = candidate.segments[i];
    if (!seg.events.empty()) {
      package.captions.insert(package.captions.end(), seg.events.begin(), seg.events.end());
    } else if (i < document.segments.size()) {
      package.captions.push_back({document.segments[i].end_ms, seg.text});
    }
  }
  std::stable_sort(package.captions.begin(), package.captions.end(),
                   [](const CaptionEvent& a, const CaptionEvent& b) { return a.t_ms < b.t_ms; });
  std::int64_t end = document.duration_ms();
  if (!package.captions.empty()) {
    package.offset_ms = package.captions.front().t_ms;
    end = std::max(end, package.captions.back().t_ms);
  }
  for (auto& c : package.captions) c.t_ms -= package.offset_ms;
  package.duration_ms = end - package.offset_ms;
  return package;
}

namespace {

std::uint64_t fnv1a(std::uint64_t seed, std::string_view text) {
  std::uint64_t h = 1469598103934665603ULL ^ seed;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

ServiceResponse error_response(int status, const std::string& reason) {
  return {status, "application/json", Json{{"error", reason}}.dump() + "\n"};
}

void for_each_record(const std::filesystem::path& path,
                     const std::function<void(const Json&, const RecordLocation&)>& fn) {
  const auto lines = read_complete_lines(path);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (lines[i].find_first_not_of(" \t\r") == std::string::npos) continue;
    const RecordLocation where{path.string(), i + 1};
    try {
      Json rec = Json::parse(lines[i]);
      if (!rec.is_object()) throw ParseError("not an object");
      fn(rec, where);
    } catch (const std::exception& e) {
      spdlog::warn("{}: skipping unreadable state record ({})", where.str(), e.what());
    }
  }
}

}  // namespace

RatingService::RatingService(const Corpus& corpus, std::filesystem::path state_dir, std::uint64_t seed)
    : corpus_(corpus), state_dir_(std::move(state_dir)), seed_(seed) {
  std::filesystem::create_directories(state_dir_);
  for (const auto& [key, cand] : corpus_.candidates()) doc_candidates_[key.doc_id].push_back(key);
  load_state();
}

void RatingService::load_state() {
  const auto meta = state_dir_ / "service.json";
  if (std::filesystem::exists(meta)) {
    const Json stored = Json::parse(read_text_file(meta));
    const auto stored_seed = stored.at("seed").get<std::uint64_t>();
    if (stored_seed != seed_) {
      spdlog::warn("state directory uses seed {}; ignoring requested seed {}", stored_seed, seed_);
      seed_ = stored_seed;
    }
  } else {
    write_text_file(meta, Json{{"seed", seed_}}.dump() + "\n");
  }
  for_each_record(state_dir_ / "evaluators.jsonl", [&](const Json& rec, const RecordLocation& where) {
    evaluators_.emplace(get_string(rec, "evaluator", where),
                        static_cast<std::size_t>(get_int(rec, "index", where)));
  });
  for_each_record(state_dir_ / "fetches.jsonl", [&](const Json& rec, const RecordLocation& where) {
    fetched_.emplace(get_string(rec, "evaluator", where), get_string(rec, "doc_id", where));
  });
  for_each_record(ratings_path(), [&](const Json& rec, const RecordLocation& where) {
    const auto session = parse_rating_session(rec, where);
    rated_.emplace(session.evaluator_id, session.doc_id);
  });
}

std::size_t RatingService::register_evaluator(const std::string& evaluator) {
  auto it = evaluators_.find(evaluator);
  if (it != evaluators_.end()) return it->second;
  const std::size_t index = evaluators_.size();
  append_durable(state_dir_ / "evaluators.jsonl",
                 Json{{"evaluator", evaluator}, {"index", index}}.dump() + "\n");
  evaluators_.emplace(evaluator, index);
  return index;
}

CandidateKey RatingService::assignment_locked(std::size_t evaluator_index, const std::string& doc_id) const {
  const auto& options = doc_candidates_.at(doc_id);
  const std::uint64_t start = fnv1a(seed_, doc_id) % options.size();
  return options[(start + evaluator_index) % options.size()];
}

CandidateKey RatingService::assignment(const std::string& evaluator, const std::string& doc_id) {
  std::lock_guard lock(mutex_);
  if (!doc_candidates_.contains(doc_id)) throw Error(fmt::format("unknown document '{}'", doc_id));
  return assignment_locked(register_evaluator(evaluator), doc_id);
}

ServiceResponse RatingService::assignments(const std::string& evaluator) {
  if (evaluator.empty()) return error_response(400, "missing evaluator");
  std::lock_guard lock(mutex_);
  std::size_t index = 0;
  try {
    index = register_evaluator(evaluator);
  } catch (const Error& e) {
    return error_response(500, e.what());
  }
  std::ostringstream out;
  for (const auto& [doc_id, options] : doc_candidates_) {
    if (fetched_.contains({evaluator, doc_id})) continue;
    const CandidateKey key = assignment_locked(index, doc_id);
    write_jsonl_record(out, Json{{"evaluator", evaluator},
                                 {"doc_id", key.doc_id},
                                 {"system", key.system_id},
                                 {"latency", std::string(to_string(key.latency))}});
  }
  return {200, "application/x-ndjson", out.str()};
}

ServiceResponse RatingService::session(const std::string& evaluator, const std::string& doc_id) {
  if (evaluator.empty()) return error_response(400, "missing evaluator");
  std::lock_guard lock(mutex_);
  if (!doc_candidates_.contains(doc_id)) return error_response(404, fmt::format("unknown document '{}'", doc_id));
  if (fetched_.contains({evaluator, doc_id})) {
    return error_response(409, fmt::format("evaluator '{}' has already seen document '{}'", evaluator, doc_id));
  }
  try {
    const CandidateKey key = assignment_locked(register_evaluator(evaluator), doc_id);
    const SessionPackage package =
        make_session_package(corpus_.document(doc_id), *corpus_.find_candidate(key), evaluator);
    append_durable(state_dir_ / "fetches.jsonl",
                   Json{{"evaluator", evaluator},
                        {"doc_id", doc_id},
                        {"system", key.system_id},
                        {"latency", std::string(to_string(key.latency))}}
                           .dump() + "\n");
    fetched_.emplace(evaluator, doc_id);
    return {200, "application/json", to_json(package).dump() + "\n"};
  } catch (const Error& e) {
    return error_response(500, e.what());
  }
}

ServiceResponse RatingService::submit(std::string_view body) {
  Json rec;
  try {
    rec = Json::parse(body);
  } catch (const Json::exception&) {
    return error_response(400, "request body is not valid JSON");
  }
  if (!rec.is_object()) return error_response(400, "expected a JSON object");
  RatingSession session;
  try {
    session = parse_rating_session(rec, RecordLocation{"request", 1});
  } catch (const Error& e) {
    return error_response(400, e.what());
  }

  std::lock_guard lock(mutex_);
  const std::pair<std::string, std::string> id{session.evaluator_id, session.doc_id};
  if (!doc_candidates_.contains(session.doc_id)) {
    return error_response(404, fmt::format("unknown document '{}'", session.doc_id));
  }
  if (!fetched_.contains(id)) return error_response(409, "session was never fetched");
  if (rated_.contains(id)) return error_response(409, "session was already rated");
  const CandidateKey expected = assignment_locked(evaluators_.at(session.evaluator_id), session.doc_id);
  if (session.candidate() != expected) {
    return error_response(400, fmt::format("candidate {} is not the one assigned ({})",
                                           session.candidate().str(), expected.str()));
  }
  const SessionPackage package = make_session_package(
      corpus_.document(session.doc_id), *corpus_.find_candidate(expected), session.evaluator_id);
  if (session.duration_ms != package.duration_ms) {
    return error_response(400, fmt::format("duration_ms {} does not match the session ({})",
                                           session.duration_ms, package.duration_ms));
  }
  try {
    append_durable(ratings_path(), to_json(session).dump() + "\n");
  } catch (const Error& e) {
    return error_response(500, e.what());
  }
  rated_.insert(id);
  return {201, "application/json", Json{{"status", "stored"}}.dump() + "\n"};
}

std::vector<RatingSession> RatingService::stored_sessions() const {
  std::lock_guard lock(mutex_);
  std::vector<RatingSession> out;
  for_each_record(ratings_path(), [&](const Json& rec, const RecordLocation& where) {
    out.push_back(parse_rating_session(rec, where));
  });
  return out;
}

struct HttpServer::Impl {
  httplib::Server server;
};

namespace {

void reply(httplib::Response& res, const ServiceResponse& r) {
  res.status = r.status;
  res.set_content(r.body, r.content_type);
}

}  // namespace

HttpServer::HttpServer(RatingService& service) : impl_(std::make_unique<Impl>()) {
  auto& svr = impl_->server;
  svr.Get("/api/assignments", [&service](const httplib::Request& req, httplib::Response& res) {
    reply(res, service.assignments(req.get_param_value("evaluator")));
  });
  svr.Get("/api/session", [&service](const httplib::Request& req, httplib::Response& res) {
    reply(res, service.session(req.get_param_value("evaluator"), req.get_param_value("doc_id")));
  });
  svr.Post("/api/ratings", [&service](const httplib::Request& req, httplib::Response& res) {
    reply(res, service.submit(req.body));
  });
}

HttpServer::~HttpServer() { stop(); }

int HttpServer::bind_to_any_port(const std::string& host) { return impl_->server.bind_to_any_port(host); }

bool HttpServer::bind(const std::string& host, int port) { return impl_->server.bind_to_port(host, port); }

void HttpServer::listen() { impl_->server.listen_after_bind(); }

void HttpServer::stop() {
  if (impl_->server.is_running()) impl_->server.stop();
}

void HttpServer::wait_until_ready() const { impl_->server.wait_until_ready(); }

}  // namespace sstmeta
