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

#include "doctest.h"

#include <algorithm>
#include <random>
#include <set>

#include <fmt/format.h>

#include "sstmeta/analysis.hpp"
#include "sstmeta/error.hpp"

using namespace sstmeta;

namespace {

const std::vector<std::string> kSystems{"s1", "s2", "s3", "s4", "s5"};
const std::vector<Latency> kLatencies{Latency::Low, Latency::Medium, Latency::High};

void add_doc(CorpusBuilder& b, const std::string& id, Subset subset) {
  b.add_document({id, subset, {{0, "Hello there.", 0, 60000}}});
  b.add_references(id, {{"Hallo."}, {"Hallo da."}});
  for (const auto& s : kSystems) {
    for (auto l : kLatencies) b.add_candidate({s, l, id, {{0, "Hallo.", {}}}});
  }
}

RatingSession make_session(const std::string& evaluator, const CandidateKey& key, int value) {
  return {evaluator, key.doc_id, key.system_id, key.latency, 60000, {{1000, value}, {30000, value}}};
}

// 60 documents (17 Common, 43 NonNative), 15 candidates each; per subset a
// given number of candidates rated twice and once.
struct Shaped {
  Corpus corpus;
  std::vector<CandidateKey> keys;
};

Shaped iwslt_shaped() {
  CorpusBuilder b;
  std::vector<CandidateKey> common, nonnative;
  for (int d = 0; d < 60; ++d) {
    const std::string id = fmt::format("doc{:02d}", d);
    const Subset subset = d < 17 ? Subset::Common : Subset::NonNative;
    add_doc(b, id, subset);
    for (const auto& s : kSystems) {
      for (auto l : kLatencies) (subset == Subset::Common ? common : nonnative).push_back({id, s, l});
    }
  }
  std::mt19937 rng(17);
  auto rate = [&](std::vector<CandidateKey>& keys, std::size_t twice, std::size_t once) {
    std::shuffle(keys.begin(), keys.end(), rng);
    for (std::size_t i = 0; i < twice + once; ++i) {
      const int value = std::uniform_int_distribution<int>(1, 4)(rng);
      b.add_session(make_session("a", keys[i], value));
      if (i < twice) b.add_session(make_session("b", keys[i], std::uniform_int_distribution<int>(1, 4)(rng)));
    }
  };
  rate(common, 213, 15);
  rate(nonnative, 548, 47);
  Shaped out{std::move(b).build(), {}};
  for (const auto& [key, cand] : out.corpus.candidates()) out.keys.push_back(key);
  return out;
}

}  // namespace

TEST_CASE("IWSLT-shaped counts") {
  const Shaped data = iwslt_shaped();
  CHECK(data.corpus.candidates().size() == 900);
  CHECK(data.corpus.sessions().size() == 1584);
  CHECK(aggregate_ratings(data.corpus.sessions()).size() == 823);
  CHECK(build_rating_rows(data.corpus, SubsetFilter::Both, Aggregation::Averaged).size() == 823);
  CHECK(build_rating_rows(data.corpus, SubsetFilter::Both, Aggregation::AllRatings).size() == 1584);
  CHECK(build_rating_rows(data.corpus, SubsetFilter::Common, Aggregation::Averaged).size() == 228);
  CHECK(build_rating_rows(data.corpus, SubsetFilter::Common, Aggregation::AllRatings).size() == 441);
  CHECK(build_rating_rows(data.corpus, SubsetFilter::NonNative, Aggregation::Averaged).size() == 595);
  CHECK(build_rating_rows(data.corpus, SubsetFilter::NonNative, Aggregation::AllRatings).size() == 1143);

  // A metric equal to the averaged rating correlates perfectly everywhere it
  // is averaged.
  ScoreTable scores;
  for (const auto& r : aggregate_ratings(data.corpus.sessions())) {
    for (const auto& v : headline_variants()) scores[v][r.candidate] = r.cr;
  }
  AnalysisConfig cfg;
  cfg.aggregations = {Aggregation::Averaged};
  cfg.variants = headline_variants();
  const Table1 t1 = run_table1(data.corpus, scores, cfg);
  REQUIRE(t1.panels.size() == 1);
  REQUIRE(t1.panels[0].rows.size() == 3);
  CHECK(t1.panels[0].rows[0].cells.size() == 4);
  CHECK(t1.panels[0].rows[0].cells[0].n == 823);
  CHECK(t1.panels[0].rows[1].cells[0].n == 228);
  CHECK(t1.panels[0].rows[2].cells[0].n == 595);
  for (const auto& row : t1.panels[0].rows) {
    for (const auto& c : row.cells) {
      CHECK(c.r == doctest::Approx(1.0));
      CHECK_FALSE(c.weak);
    }
  }
}

TEST_CASE("build_pairs modes") {
  CorpusBuilder b;
  add_doc(b, "d", Subset::Common);
  const CandidateKey rated{"d", "s1", Latency::Low};
  b.add_session(make_session("a", rated, 2));
  b.add_session(make_session("b", rated, 4));
  b.add_session(make_session("a", {"d", "s2", Latency::Low}, 3));
  const Corpus corpus = std::move(b).build();
  ScoreTable scores;
  const auto v = parse_variant("BLEU/transl/Sent");
  for (const auto& [key, cand] : corpus.candidates()) scores[v][key] = 10.0;
  scores[v][rated] = 42.0;

  const auto avg = build_pairs(build_rating_rows(corpus, SubsetFilter::Both, Aggregation::Averaged), scores, v,
                               CrDefinition::CR);
  REQUIRE(avg.size() == 2);
  CHECK(avg[0].rating == 3.0);
  CHECK(avg[0].score == 42.0);
  const auto all = build_pairs(build_rating_rows(corpus, SubsetFilter::Both, Aggregation::AllRatings), scores, v,
                               CrDefinition::CR);
  REQUIRE(all.size() == 3);
  CHECK(all[0].score == 42.0);
  CHECK(all[1].score == 42.0);
  CHECK(all[0].rating + all[1].rating == 6.0);

  CHECK(build_rating_rows(corpus, SubsetFilter::NonNative, Aggregation::Averaged).empty());
  CHECK_THROWS_AS(build_pairs({}, scores, v, CrDefinition::CR), Error);
  CHECK_THROWS_AS(build_pairs(build_rating_rows(corpus, SubsetFilter::Both, Aggregation::Averaged), scores,
                              parse_variant("chrF/transl/Sent"), CrDefinition::CR),
                  Error);
}

TEST_CASE("averaged rows never outnumber all-ratings rows") {
  std::mt19937 rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    CorpusBuilder b;
    add_doc(b, "d", Subset::Common);
    bool all_single = true;
    for (const auto& s : kSystems) {
      for (auto l : kLatencies) {
        const int n = std::uniform_int_distribution<int>(0, trial % 2 ? 1 : 3)(rng);
        if (n > 1) all_single = false;
        for (int k = 0; k < n; ++k) b.add_session(make_session(fmt::format("e{}", k), {"d", s, l}, 2));
      }
    }
    const Corpus c = std::move(b).build();
    const auto avg = build_rating_rows(c, SubsetFilter::Both, Aggregation::Averaged).size();
    const auto all = build_rating_rows(c, SubsetFilter::Both, Aggregation::AllRatings).size();
    CHECK(avg <= all);
    CHECK((avg == all) == all_single);
  }
}

TEST_CASE("table 2 ordering, determinism and clusters") {
  const Shaped data = iwslt_shaped();
  const auto ratings = aggregate_ratings(data.corpus.sessions());
  std::mt19937 rng(5);
  std::normal_distribution<double> noise(0.0, 1.0);
  ScoreTable scores;
  const auto variants = default_variants();
  for (std::size_t i = 0; i < variants.size(); ++i) {
    for (const auto& r : ratings) scores[variants[i]][r.candidate] = r.cr + noise(rng) * (0.1 + 0.15 * static_cast<double>(i));
  }
  // A duplicate of the first variant's scores under another label.
  const auto twin = parse_variant("BertScore/transl+intp/SingleSeq");
  const auto source = parse_variant("BertScore/transl/SingleSeq");
  scores[twin] = scores[source];

  AnalysisConfig cfg;
  cfg.variants = variants;
  const Table2 t = run_table2(data.corpus, scores, cfg, SubsetFilter::Both, Aggregation::Averaged);
  REQUIRE(t.rows.size() == variants.size());
  for (std::size_t i = 1; i < t.rows.size(); ++i) CHECK(t.rows[i - 1].r >= t.rows[i].r);
  std::set<MetricVariant> seen;
  for (const auto& r : t.rows) seen.insert(r.variant);
  CHECK(seen.size() == variants.size());

  // r equals Pearson over the same pairs.
  const auto pairs = build_pairs(build_rating_rows(data.corpus, SubsetFilter::Both, Aggregation::Averaged), scores,
                                 t.rows[3].variant, CrDefinition::CR);
  std::vector<double> x, y;
  for (const auto& p : pairs) {
    x.push_back(p.rating);
    y.push_back(p.score);
  }
  CHECK(t.rows[3].r == doctest::Approx(pearson(x, y).r).epsilon(1e-12));

  // Input order does not matter.
  AnalysisConfig shuffled = cfg;
  std::shuffle(shuffled.variants.begin(), shuffled.variants.end(), rng);
  const Table2 t2 = run_table2(data.corpus, scores, shuffled, SubsetFilter::Both, Aggregation::Averaged);
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    CHECK(t.rows[i].variant == t2.rows[i].variant);
    CHECK(t.rows[i].r == t2.rows[i].r);
  }
  CHECK(t.boundaries == t2.boundaries);

  // Pairwise matrix: p symmetric, t antisymmetric.
  for (std::size_t a = 0; a < t.rows.size(); ++a) {
    for (std::size_t b = 0; b < t.rows.size(); ++b) {
      if (a == b) continue;
      CHECK(t.pairwise[a][b].p == t.pairwise[b][a].p);
      CHECK(t.pairwise[a][b].t_stat == -t.pairwise[b][a].t_stat);
    }
  }
  for (double th : cfg.thresholds) CHECK(t.boundaries.at(th) == significance_clusters(t.p_matrix(), th));

  // Identical variants are never separated.
  AnalysisConfig with_twin = cfg;
  with_twin.variants.erase(std::find(with_twin.variants.begin(), with_twin.variants.end(), twin));
  with_twin.variants.push_back(twin);
  const Table2 t3 = run_table2(data.corpus, scores, with_twin, SubsetFilter::Both, Aggregation::Averaged);
  const std::size_t ia = t3.index_of(source), ib = t3.index_of(twin);
  CHECK(std::max(ia, ib) - std::min(ia, ib) == 1);
  CHECK(t3.pairwise[ia][ib].p == 1.0);
  for (const auto& [th, bounds] : t3.boundaries) {
    CHECK(std::find(bounds.begin(), bounds.end(), std::max(ia, ib)) == bounds.end());
  }
}

TEST_CASE("recommendations and full analysis") {
  const Shaped data = iwslt_shaped();
  const auto ratings = aggregate_ratings(data.corpus.sessions());
  std::mt19937 rng(6);
  std::normal_distribution<double> noise(0.0, 1.0);
  ScoreTable scores;
  const auto variants = default_variants();
  for (std::size_t i = 0; i < variants.size(); ++i) {
    for (const auto& r : ratings) scores[variants[i]][r.candidate] = r.cr + noise(rng) * (0.2 + 0.1 * static_cast<double>(i));
  }
  AnalysisConfig cfg;
  cfg.variants = variants;
  const auto result = run_analysis(data.corpus, scores, cfg);
  CHECK(result.slices.size() == 6);
  const auto& both = result.slices.front();
  CHECK(both.subset == SubsetFilter::Both);
  CHECK(both.aggregation == Aggregation::Averaged);
  REQUIRE(both.cr_agreement.has_value());
  CHECK(both.cr_agreement->correlation.r == doctest::Approx(1.0));  // constant clicks per session
  REQUIRE(both.recommendations.size() == 6);
  CHECK(both.recommendations[0].question == "metric");
  CHECK(both.recommendations[0].chosen.label() == "COMET/transl/Sent");
  CHECK(both.recommendations[1].question == "reference");
  CHECK(both.recommendations[1].chosen.reference == ReferenceMode::Transl);
  for (const auto& r : both.recommendations) CHECK(r.r_chosen >= r.r_runner_up);
  CHECK(both.pairs.at(parse_variant("COMET/transl/Sent")).size() == 823);
}

TEST_CASE("analysis config validation") {
  AnalysisConfig cfg;
  CHECK_NOTHROW(validate(cfg));
  cfg.thresholds = {1.5};
  CHECK_THROWS_AS(validate(cfg), Error);
  cfg = {};
  cfg.variants.clear();
  CHECK_THROWS_AS(validate(cfg), Error);
  cfg = {};
  cfg.variants.push_back(cfg.variants.front());
  CHECK_THROWS_AS(validate(cfg), Error);
  CHECK(parse_subset_filter("Non-Native") == SubsetFilter::NonNative);
  CHECK_THROWS_AS(parse_aggregation("median"), Error);
}
