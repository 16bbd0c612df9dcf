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
#include <span>
#include <vector>

#include "sstmeta/alignment.hpp"
#include "sstmeta/corpus.hpp"
#include "sstmeta/external_scorer.hpp"
#include "sstmeta/jsonl.hpp"
#include "sstmeta/variant.hpp"

namespace sstmeta {

// Document-level value of one metric variant for one candidate.
struct ScoreRecord {
  MetricVariant variant;
  CandidateKey candidate;
  double value = 0.0;
};

Json to_json(const ScoreRecord& record);
ScoreRecord score_record_from_json(const Json& rec, const RecordLocation& where);
void write_scores(const std::filesystem::path& path, std::span<const ScoreRecord> records);
std::vector<ScoreRecord> read_scores(const std::filesystem::path& path);

// Scores indexed by variant, then candidate.
using ScoreTable = std::map<MetricVariant, std::map<CandidateKey, double>>;
ScoreTable make_score_table(std::span<const ScoreRecord> records);

// Combines per-reference document scores of a neural metric by their
// arithmetic mean. Lexical metrics combine references inside the metric.
double multi_reference_combine(Metric metric, std::span<const double> per_reference);

struct ScoringOptions {
  MwerOptions mwer;
  unsigned threads = 0;  // 0: hardware concurrency
};

// Evaluates metric variants on candidate documents. Lexical metrics run
// in-process; BertScore and COMET go through the configured external
// scorers, one batched call per metric. Neural document scores are the mean
// of their segment scores.
class VariantScorer {
 public:
  explicit VariantScorer(std::map<Metric, ExternalScorer*> neural = {}, ScoringOptions options = {});

  ScoreRecord score_variant(const MetricVariant& variant, const Document& document,
                            const CandidateOutput& candidate,
                            const DocumentReferences& references);

  // Every variant on every candidate of the corpus, ordered by variant (as
  // given) and then by candidate key.
  std::vector<ScoreRecord> score_corpus(const Corpus& corpus, std::span<const MetricVariant> variants);

 private:
  struct Job {
    MetricVariant variant;
    const Document* document;
    const CandidateOutput* candidate;
    const DocumentReferences* references;
  };
  std::vector<ScoreRecord> score_jobs(std::span<const Job> jobs);
  ExternalScorer& scorer_for(Metric metric) const;

  std::map<Metric, ExternalScorer*> neural_;
  ScoringOptions options_;
};

}  // namespace sstmeta
