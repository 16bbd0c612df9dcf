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

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "sstmeta/analysis.hpp"
#include "sstmeta/corpus.hpp"
#include "sstmeta/error.hpp"
#include "sstmeta/external_scorer.hpp"
#include "sstmeta/scoring.hpp"

namespace sstmeta {

// An error raised by one pipeline stage; what() starts with "<stage>: ".
class StageError : public Error {
 public:
  StageError(std::string stage, const std::string& message);
  const std::string& stage() const { return stage_; }

 private:
  std::string stage_;
};

struct ServiceConfig {
  std::filesystem::path state_dir = "state";
  std::uint64_t seed = 0;
  std::string host = "127.0.0.1";
  int port = 8080;
};

struct PipelineConfig {
  CorpusPaths corpus;
  std::map<Metric, ScorerSpec> scorers;
  std::filesystem::path cache_dir = "cache";
  std::filesystem::path out_dir = "out";
  AnalysisConfig analysis;
  ScoringOptions scoring;
  ServiceConfig service;
};

// Reads a JSON config file. Relative paths are resolved against the
// directory of the config file.
PipelineConfig load_pipeline_config(const std::filesystem::path& path);
PipelineConfig pipeline_config_from_json(const Json& data, const std::filesystem::path& base_dir);

struct CliOverrides {
  std::optional<std::vector<std::string>> subsets;
  std::optional<std::vector<std::string>> variants;
  std::optional<std::string> cr_definition;
  std::optional<std::vector<double>> thresholds;
  std::optional<std::filesystem::path> out_dir;
  std::vector<std::string> scorers;  // "name=command"
};

void apply_overrides(PipelineConfig& config, const CliOverrides& overrides);

struct IngestSummary {
  std::size_t documents = 0;
  std::size_t candidates = 0;
  std::size_t sessions = 0;
  std::size_t rated_candidates = 0;
  std::map<std::string, std::size_t> documents_by_subset;
};

Json to_json(const IngestSummary& summary);

Corpus run_ingest(const PipelineConfig& config, IngestSummary* summary = nullptr);

// Scores every configured variant and writes <out_dir>/scores.jsonl.
// `invocations` receives the number of external scorer runs.
std::vector<ScoreRecord> run_score(const PipelineConfig& config, const Corpus& corpus,
                                   std::size_t* invocations = nullptr);

// Aggregates the sessions and writes <out_dir>/ratings.jsonl.
std::vector<RatingScore> run_rate(const PipelineConfig& config, const Corpus& corpus);

// Correlates stored scores with ratings and writes the report tree.
AnalysisResult run_analyze(const PipelineConfig& config, const Corpus& corpus,
                           std::span<const ScoreRecord> scores);

// Re-renders every figure under `out_dir` from its data record.
std::size_t render_figures(const std::filesystem::path& out_dir);

struct EndToEndResult {
  std::size_t scorer_invocations = 0;
};

// ingest, score, rate, analyze and report; throws StageError.
EndToEndResult end_to_end(const PipelineConfig& config);

}  // namespace sstmeta
