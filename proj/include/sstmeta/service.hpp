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
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <set>
#include <string>
#include <vector>

#include "sstmeta/corpus.hpp"
#include "sstmeta/jsonl.hpp"

namespace sstmeta {

// What an evaluator's player needs to replay one candidate: caption events
// timed from the first target output and the length of the replay.
struct SessionPackage {
  std::string evaluator_id;
  CandidateKey candidate;
  std::int64_t duration_ms = 0;
  std::int64_t offset_ms = 0;  // wait dropped before the first caption
  std::vector<CaptionEvent> captions;
};

Json to_json(const SessionPackage& package);

// Caption events come from the candidate's timing; segments without events
// appear at the end of their source segment. All times are shifted so the
// first caption is at 0.
SessionPackage make_session_package(const Document& document, const CandidateOutput& candidate,
                                    std::string evaluator_id);

struct ServiceResponse {
  int status = 200;
  std::string content_type = "application/json";
  std::string body;
};

// Rating-collection state: evaluator assignments, fetched sessions and
// submitted click logs, each persisted as an append-only log under
// `state_dir`. Every evaluator is assigned one candidate of every document,
// round-robin over the candidates with a seed-dependent start per document.
// A document can be fetched once per evaluator, also across restarts.
class RatingService {
 public:
  // The seed is stored on first use; a later different seed is ignored with a
  // warning so assignments stay stable.
  RatingService(const Corpus& corpus, std::filesystem::path state_dir, std::uint64_t seed);

  std::uint64_t seed() const { return seed_; }

  ServiceResponse assignments(const std::string& evaluator);
  ServiceResponse session(const std::string& evaluator, const std::string& doc_id);
  ServiceResponse submit(std::string_view body);

  // Candidate assigned to an evaluator for a document (registers the
  // evaluator if needed).
  CandidateKey assignment(const std::string& evaluator, const std::string& doc_id);

  // Stored click logs in submission order.
  std::vector<RatingSession> stored_sessions() const;

  std::filesystem::path ratings_path() const { return state_dir_ / "ratings.jsonl"; }

 private:
  std::size_t register_evaluator(const std::string& evaluator);
  CandidateKey assignment_locked(std::size_t evaluator_index, const std::string& doc_id) const;
  void load_state();

  const Corpus& corpus_;
  std::filesystem::path state_dir_;
  std::uint64_t seed_ = 0;
  std::map<std::string, std::vector<CandidateKey>> doc_candidates_;
  std::map<std::string, std::size_t> evaluators_;
  std::set<std::pair<std::string, std::string>> fetched_;
  std::set<std::pair<std::string, std::string>> rated_;
  mutable std::mutex mutex_;
};

// HTTP front end:
//   GET  /api/assignments?evaluator=E        pending assignments, one JSON per line
//   GET  /api/session?evaluator=E&doc_id=D   session package; 409 on a second fetch
//   POST /api/ratings                        click log record; 201 when stored
class HttpServer {
 public:
  explicit HttpServer(RatingService& service);
  ~HttpServer();

  int bind_to_any_port(const std::string& host);
  bool bind(const std::string& host, int port);
  void listen();  // blocks until stop()
  void stop();
  void wait_until_ready() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace sstmeta
