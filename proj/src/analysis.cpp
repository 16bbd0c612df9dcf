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

#include "sstmeta/analysis.hpp"

#include <algorithm>
#include <set>

#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include "sstmeta/error.hpp"

namespace sstmeta {

std::string_view to_string(SubsetFilter filter) {
  switch (filter) {
    case SubsetFilter::Both: return "both";
    case SubsetFilter::Common: return "Common";
    case SubsetFilter::NonNative: return "NonNative";
  }
  return "both";
}

std::string_view to_string(Aggregation aggregation) {
  return aggregation == Aggregation::Averaged ? "averaged" : "all_ratings";
}

SubsetFilter parse_subset_filter(std::string_view text) {
  if (text == "both") return SubsetFilter::Both;
  if (text == "Common") return SubsetFilter::Common;
  if (text == "NonNative" || text == "Non-Native") return SubsetFilter::NonNative;
  throw Error(fmt::format("unknown subset '{}' (both, Common, NonNative)", text));
}

Aggregation parse_aggregation(std::string_view text) {
  if (text == "averaged") return Aggregation::Averaged;
  if (text == "all_ratings") return Aggregation::AllRatings;
  throw Error(fmt::format("unknown aggregation '{}' (averaged, all_ratings)", text));
}

bool matches(SubsetFilter filter, Subset subset) {
  switch (filter) {
    case SubsetFilter::Both: return true;
    case SubsetFilter::Common: return subset == Subset::Common;
    case SubsetFilter::NonNative: return subset == Subset::NonNative;
  }
  return false;
}

void validate(const AnalysisConfig& config) {
  if (config.variants.empty()) throw Error("analysis needs at least one metric variant");
  if (config.subsets.empty()) throw Error("analysis needs at least one subset");
  if (config.aggregations.empty()) throw Error("analysis needs at least one aggregation");
  for (const auto& v : config.variants) validate(v);
  std::set<MetricVariant> seen;
  for (const auto& v : config.variants) {
    if (!seen.insert(v).second) throw Error(fmt::format("variant {} listed twice", v.label()));
  }
  for (double t : config.thresholds) {
    if (!(t > 0.0 && t < 1.0)) throw Error(fmt::format("threshold {} outside (0, 1)", t));
  }
}

std::vector<RatingRow> build_rating_rows(const Corpus& corpus, SubsetFilter filter,
                                         Aggregation aggregation) {
  std::vector<const RatingSession*> selected;
  for (const auto& s : corpus.sessions()) {
    if (s.clicks.empty()) continue;
    if (matches(filter, corpus.document(s.doc_id).subset)) selected.push_back(&s);
  }
  std::stable_sort(selected.begin(), selected.end(), [](const auto* a, const auto* b) {
    return a->candidate() < b->candidate();
  });

  std::vector<RatingRow> rows;
  if (aggregation == Aggregation::AllRatings) {
    for (const auto* s : selected) {
      rows.push_back({s->candidate(), corpus.document(s->doc_id).subset, s->evaluator_id, cr(*s),
                      cri(*s)});
    }
    return rows;
  }
  std::vector<RatingSession> copies;
  copies.reserve(selected.size());
  for (const auto* s : selected) copies.push_back(*s);
  for (const auto& score : aggregate_ratings(copies)) {
    rows.push_back({score.candidate, corpus.document(score.candidate.doc_id).subset, "", score.cr,
                    score.cri});
  }
  return rows;
}

std::vector<RatedPair> build_pairs(const std::vector<RatingRow>& rows, const ScoreTable& scores,
                                   const MetricVariant& variant, CrDefinition def) {
  auto it = scores.find(variant);
  if (it == scores.end()) throw Error(fmt::format("no scores for variant {}", variant.label()));
  std::vector<RatedPair> pairs;
  std::size_t dropped = 0;
  for (const auto& row : rows) {
    auto s = it->second.find(row.candidate);
    if (s == it->second.end()) {
      ++dropped;
      continue;
    }
    pairs.push_back({row.candidate, row.subset, row.value(def), s->second});
  }
  if (dropped > 0) {
    spdlog::warn("{}: {} rated rows have no score and were dropped", variant.label(), dropped);
  }
  if (pairs.empty()) {
    throw Error(fmt::format("{}: no candidate is both rated and scored", variant.label()));
  }
  return pairs;
}

namespace {

CorrelationResult correlate(const std::vector<RatedPair>& pairs, const std::string& label) {
  std::vector<double> rating, score;
  for (const auto& p : pairs) {
    rating.push_back(p.rating);
    score.push_back(p.score);
  }
  return pearson(rating, score, "rating", label);
}

std::string slice_name(SubsetFilter subset, Aggregation aggregation) {
  return fmt::format("{}/{}", to_string(subset), to_string(aggregation));
}

}  // namespace

Table1 run_table1(const Corpus& corpus, const ScoreTable& scores, const AnalysisConfig& config) {
  Table1 table;
  for (Aggregation aggregation : config.aggregations) {
    Table1Panel panel{aggregation, {}};
    for (SubsetFilter subset : config.subsets) {
      const auto rows = build_rating_rows(corpus, subset, aggregation);
      Table1Row row{subset, {}};
      for (const auto& v : headline_variants()) {
        if (!scores.contains(v)) continue;
        try {
          const auto c = correlate(build_pairs(rows, scores, v, config.cr_definition), v.label());
          row.cells.push_back({v.metric, c.n, c.r, c.p, c.r < config.strong_correlation});
        } catch (const Error& e) {
          throw Error(fmt::format("{}: {}", slice_name(subset, aggregation), e.what()));
        }
      }
      panel.rows.push_back(std::move(row));
    }
    table.panels.push_back(std::move(panel));
  }
  return table;
}

std::vector<std::vector<double>> Table2::p_matrix() const {
  std::vector<std::vector<double>> p(rows.size(), std::vector<double>(rows.size(), 1.0));
  for (std::size_t a = 0; a < rows.size(); ++a) {
    for (std::size_t b = 0; b < rows.size(); ++b) {
      if (a != b) p[a][b] = pairwise[a][b].p;
    }
  }
  return p;
}

const Table2Row* Table2::find(const MetricVariant& variant) const {
  for (const auto& r : rows) {
    if (r.variant == variant) return &r;
  }
  return nullptr;
}

std::size_t Table2::index_of(const MetricVariant& variant) const {
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].variant == variant) return i;
  }
  throw Error(fmt::format("variant {} not in table", variant.label()));
}

Table2 run_table2(const Corpus& corpus, const ScoreTable& scores, const AnalysisConfig& config,
                  SubsetFilter subset, Aggregation aggregation) {
  const std::string where = slice_name(subset, aggregation);
  Table2 table;
  table.subset = subset;
  table.aggregation = aggregation;

  std::vector<RatingRow> rows;
  for (const auto& row : build_rating_rows(corpus, subset, aggregation)) {
    bool scored = true;
    for (const auto& v : config.variants) {
      auto it = scores.find(v);
      if (it == scores.end()) throw Error(fmt::format("{}: no scores for variant {}", where, v.label()));
      if (!it->second.contains(row.candidate)) scored = false;
    }
    if (scored) rows.push_back(row);
  }
  if (rows.size() < 4) {
    throw Error(fmt::format("{}: {} rated and scored rows, need at least 4", where, rows.size()));
  }

  std::vector<double> rating;
  for (const auto& row : rows) rating.push_back(row.value(config.cr_definition));
  std::map<MetricVariant, std::vector<double>> values;
  for (const auto& v : config.variants) {
    auto& col = values[v];
    for (const auto& row : rows) col.push_back(scores.at(v).at(row.candidate));
    try {
      const auto c = pearson(rating, col, "rating", v.label());
      table.rows.push_back({v, c.n, c.r, c.p});
    } catch (const Error& e) {
      throw Error(fmt::format("{}: {}", where, e.what()));
    }
  }
  std::sort(table.rows.begin(), table.rows.end(), [](const Table2Row& a, const Table2Row& b) {
    if (a.r != b.r) return a.r > b.r;
    return a.variant.label() < b.variant.label();
  });

  const std::size_t v = table.rows.size();
  table.pairwise.assign(v, std::vector<PairwiseComparison>(v));
  for (std::size_t a = 0; a < v; ++a) {
    for (std::size_t b = a + 1; b < v; ++b) {
      const auto& ra = table.rows[a];
      const auto& rb = table.rows[b];
      const auto& xa = values.at(ra.variant);
      const auto& xb = values.at(rb.variant);
      double r_ab = 1.0;
      if (xa != xb) r_ab = pearson(xa, xb, ra.variant.label(), rb.variant.label()).r;
      const auto s = steiger_dependent(ra.r, rb.r, r_ab, rows.size(), config.method);
      table.pairwise[a][b] = {ra.variant.label(), rb.variant.label(), ra.r, rb.r, r_ab, rows.size(),
                              s.statistic, s.p};
      table.pairwise[b][a] = {rb.variant.label(), ra.variant.label(), rb.r, ra.r, r_ab, rows.size(),
                              -s.statistic, s.p};
    }
  }
  const auto p = table.p_matrix();
  for (double t : config.thresholds) table.boundaries[t] = significance_clusters(p, t);
  return table;
}

std::optional<CrAgreement> compare_cr_definitions(const Corpus& corpus, SubsetFilter subset,
                                                  Aggregation aggregation) {
  CrAgreement out;
  out.subset = subset;
  out.aggregation = aggregation;
  out.rows = build_rating_rows(corpus, subset, aggregation);
  std::vector<double> a, b;
  for (const auto& row : out.rows) {
    a.push_back(row.cr);
    b.push_back(row.cri);
  }
  try {
    out.correlation = pearson(a, b, "CR", "CRi");
  } catch (const Error& e) {
    spdlog::warn("{}: CR vs CRi not computed: {}", slice_name(subset, aggregation), e.what());
    return std::nullopt;
  }
  return out;
}

namespace {

Recommendation compare(const Table2& table, const std::string& question, const MetricVariant& a,
                       const MetricVariant& b, double threshold) {
  const std::size_t ia = table.index_of(a);
  const std::size_t ib = table.index_of(b);
  // Rows are sorted, so the lower index is the better variant.
  const std::size_t first = std::min(ia, ib);
  const std::size_t second = std::max(ia, ib);
  Recommendation rec;
  rec.question = question;
  rec.chosen = table.rows[first].variant;
  rec.runner_up = table.rows[second].variant;
  rec.r_chosen = table.rows[first].r;
  rec.r_runner_up = table.rows[second].r;
  rec.p = table.pairwise[first][second].p;
  rec.significant = rec.p < threshold;
  return rec;
}

}  // namespace

std::vector<Recommendation> recommend(const Table2& table, double threshold) {
  std::vector<Recommendation> out;

  std::vector<MetricVariant> headline;
  for (const auto& row : table.rows) {
    for (const auto& h : headline_variants()) {
      if (row.variant == h) headline.push_back(h);
    }
  }
  if (headline.size() >= 2) out.push_back(compare(table, "metric", headline[0], headline[1], threshold));

  // Best-ranked variant per reference mode; rows are already in rank order.
  std::vector<MetricVariant> best_by_reference;
  std::set<ReferenceMode> seen;
  for (const auto& row : table.rows) {
    if (seen.insert(row.variant.reference).second) best_by_reference.push_back(row.variant);
  }
  if (best_by_reference.size() >= 2) {
    out.push_back(compare(table, "reference", best_by_reference[0], best_by_reference[1], threshold));
  }

  for (Metric m : {Metric::BLEU, Metric::chrF, Metric::BertScore, Metric::COMET}) {
    const MetricVariant single{m, ReferenceMode::Intp, AlignmentMode::SingleSeq};
    const MetricVariant mwer{m, ReferenceMode::Intp, AlignmentMode::mWER};
    if (table.find(single) && table.find(mwer)) {
      out.push_back(compare(table, fmt::format("alignment:{}", to_string(m)), single, mwer, threshold));
    }
  }
  return out;
}

AnalysisResult run_analysis(const Corpus& corpus, const ScoreTable& scores,
                            const AnalysisConfig& config) {
  validate(config);
  AnalysisResult result;
  result.config = config;
  result.table1 = run_table1(corpus, scores, config);
  const double threshold =
      config.thresholds.empty() ? 0.05 : *std::min_element(config.thresholds.begin(), config.thresholds.end());
  for (SubsetFilter subset : config.subsets) {
    for (Aggregation aggregation : config.aggregations) {
      AnalysisSlice slice;
      slice.subset = subset;
      slice.aggregation = aggregation;
      slice.table2 = run_table2(corpus, scores, config, subset, aggregation);
      const auto rows = build_rating_rows(corpus, subset, aggregation);
      for (const auto& v : headline_variants()) {
        if (scores.contains(v)) slice.pairs[v] = build_pairs(rows, scores, v, config.cr_definition);
      }
      slice.cr_agreement = compare_cr_definitions(corpus, subset, aggregation);
      slice.recommendations = recommend(slice.table2, threshold);
      result.slices.push_back(std::move(slice));
    }
  }
  return result;
}

}  // namespace sstmeta
