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

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "sstmeta/corpus.hpp"
#include "sstmeta/ratings.hpp"
#include "sstmeta/scoring.hpp"
#include "sstmeta/stats.hpp"
#include "sstmeta/variant.hpp"

namespace sstmeta {

enum class SubsetFilter { Both, Common, NonNative };
enum class Aggregation { Averaged, AllRatings };

std::string_view to_string(SubsetFilter filter);
std::string_view to_string(Aggregation aggregation);
SubsetFilter parse_subset_filter(std::string_view text);
Aggregation parse_aggregation(std::string_view text);
bool matches(SubsetFilter filter, Subset subset);

struct AnalysisConfig {
  std::vector<SubsetFilter> subsets{SubsetFilter::Both, SubsetFilter::Common, SubsetFilter::NonNative};
  std::vector<Aggregation> aggregations{Aggregation::Averaged, Aggregation::AllRatings};
  std::vector<MetricVariant> variants = default_variants();
  CrDefinition cr_definition = CrDefinition::CR;
  std::vector<double> thresholds{0.05, 0.1};
  SteigerMethod method = SteigerMethod::WilliamsT;
  double strong_correlation = 0.6;
};

void validate(const AnalysisConfig& config);  // throws Error

// One human judgement of a candidate: a single session (all_ratings) or the
// mean over its sessions (averaged).
struct RatingRow {
  CandidateKey candidate;
  Subset subset = Subset::Common;
  std::string evaluator_id;  // empty for averaged rows
  double cr = 0.0;
  double cri = 0.0;

  double value(CrDefinition def) const { return def == CrDefinition::CR ? cr : cri; }
};

// Rows are ordered by candidate key, then by session order.
std::vector<RatingRow> build_rating_rows(const Corpus& corpus, SubsetFilter filter,
                                         Aggregation aggregation);

struct RatedPair {
  CandidateKey candidate;
  Subset subset = Subset::Common;
  double rating = 0.0;
  double score = 0.0;
};

// Joins rating rows with the scores of one variant. Rows whose candidate has
// no score are dropped; an empty join throws.
std::vector<RatedPair> build_pairs(const std::vector<RatingRow>& rows, const ScoreTable& scores,
                                   const MetricVariant& variant, CrDefinition def);

struct Table1Cell {
  Metric metric = Metric::BLEU;
  std::size_t n = 0;
  double r = 0.0;
  double p = 1.0;
  bool weak = false;  // r below the strong-correlation threshold
};

struct Table1Row {
  SubsetFilter subset = SubsetFilter::Both;
  std::vector<Table1Cell> cells;
};

struct Table1Panel {
  Aggregation aggregation = Aggregation::Averaged;
  std::vector<Table1Row> rows;
};

struct Table1 {
  std::vector<Table1Panel> panels;
};

// Headline metrics (translation reference, sentence alignment) against the
// rating for each configured aggregation and subset.
Table1 run_table1(const Corpus& corpus, const ScoreTable& scores, const AnalysisConfig& config);

struct Table2Row {
  MetricVariant variant;
  std::size_t n = 0;
  double r = 0.0;
  double p = 1.0;
};

struct Table2 {
  SubsetFilter subset = SubsetFilter::Both;
  Aggregation aggregation = Aggregation::Averaged;
  std::vector<Table2Row> rows;  // r descending, ties by label
  // pairwise[a][b] compares rows[a] with rows[b]; the diagonal is unused.
  std::vector<std::vector<PairwiseComparison>> pairwise;
  std::map<double, std::vector<std::size_t>> boundaries;  // by threshold

  std::vector<std::vector<double>> p_matrix() const;
  const Table2Row* find(const MetricVariant& variant) const;
  std::size_t index_of(const MetricVariant& variant) const;
};

// Correlates every configured variant with the rating on the candidates that
// all variants scored, orders them and tests every pair for a difference.
Table2 run_table2(const Corpus& corpus, const ScoreTable& scores, const AnalysisConfig& config,
                  SubsetFilter subset, Aggregation aggregation);

struct CrAgreement {
  SubsetFilter subset = SubsetFilter::Both;
  Aggregation aggregation = Aggregation::Averaged;
  CorrelationResult correlation;
  std::vector<RatingRow> rows;
};

std::optional<CrAgreement> compare_cr_definitions(const Corpus& corpus, SubsetFilter subset,
                                                  Aggregation aggregation);

struct Recommendation {
  std::string question;  // "metric", "reference", "alignment:<metric>"
  MetricVariant chosen;
  MetricVariant runner_up;
  double r_chosen = 0.0;
  double r_runner_up = 0.0;
  double p = 1.0;
  bool significant = false;  // at the smallest configured threshold
};

// Best metric among the headline variants, best reference mode, and for
// each metric the better alignment against the interpreting reference.
std::vector<Recommendation> recommend(const Table2& table, double threshold);

struct AnalysisSlice {
  SubsetFilter subset = SubsetFilter::Both;
  Aggregation aggregation = Aggregation::Averaged;
  Table2 table2;
  std::map<MetricVariant, std::vector<RatedPair>> pairs;  // headline variants
  std::optional<CrAgreement> cr_agreement;
  std::vector<Recommendation> recommendations;
};

struct AnalysisResult {
  AnalysisConfig config;
  Table1 table1;
  std::vector<AnalysisSlice> slices;
};

AnalysisResult run_analysis(const Corpus& corpus, const ScoreTable& scores,
                            const AnalysisConfig& config);

}  // namespace sstmeta
