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

#include <atomic>
#include <cstddef>
#include <filesystem>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace sstmeta {

// One segment to be scored by an out-of-process metric. `source` is sent
// only when present (COMET needs it, BertScore does not).
struct ScoreRequest {
  std::string id;
  std::optional<std::string> source;
  std::string hypothesis;
  std::string reference;
};

struct ScoreResult {
  std::string id;
  double score = 0.0;

  bool operator==(const ScoreResult&) const = default;
};

// A named scorer command, e.g. "COMET=python3 score_comet.py".
struct ScorerSpec {
  std::string name;
  std::string command;
};

ScorerSpec parse_scorer_spec(std::string_view text);  // "name=command"

// Bridge to a neural metric running as a separate process.
//
// Protocol: the command is run through /bin/sh with one JSON record
// {"id", "src"?, "hyp", "ref"} per line on standard input, and must print one
// {"id", "score"} record per line on standard output. Diagnostics belong on
// standard error. Scores are cached by a SHA-256 of the scorer identity and
// the record content (not the id), in memory and, when a cache directory is
// given, in an append-only file shared by all processes using it.
//
// score() may be called concurrently; cache lookups take a shared lock and
// scorer runs plus cache appends are serialized.
class ExternalScorer {
 public:
  ExternalScorer(ScorerSpec spec, std::filesystem::path cache_dir = {});

  ExternalScorer(const ExternalScorer&) = delete;
  ExternalScorer& operator=(const ExternalScorer&) = delete;

  // One result per request, in request order. Ids must be unique within the
  // batch. Throws Error when the command fails or omits ids.
  std::vector<ScoreResult> score(std::span<const ScoreRequest> batch);

  const ScorerSpec& spec() const { return spec_; }
  const std::filesystem::path& cache_file() const { return cache_file_; }

  // Number of times the external command has been started.
  std::size_t invocations() const { return invocations_.load(); }

 private:
  std::string cache_key(const ScoreRequest& req) const;
  void load_cache();
  std::vector<double> run(std::span<const ScoreRequest* const> requests);
  void append_to_cache(std::span<const std::pair<std::string, double>> entries);

  ScorerSpec spec_;
  std::string identity_;
  std::filesystem::path cache_file_;

  mutable std::shared_mutex cache_mutex_;
  std::unordered_map<std::string, double> cache_;
  std::mutex run_mutex_;
  std::atomic<std::size_t> invocations_{0};
};

// Hex SHA-256 of `data`.
std::string sha256_hex(std::string_view data);

}  // namespace sstmeta
