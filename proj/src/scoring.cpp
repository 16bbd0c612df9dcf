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

#include "sstmeta/scoring.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <sstream>
#include <thread>

#include <fmt/format.h>

#include "sstmeta/bleu.hpp"
#include "sstmeta/chrf.hpp"
#include "sstmeta/error.hpp"

namespace sstmeta {

Json to_json(const ScoreRecord& record) {
  return Json{{"metric", std::string(to_string(record.variant.metric))},
              {"reference_mode", std::string(to_string(record.variant.reference))},
              {"alignment_mode", std::string(to_string(record.variant.alignment))},
              {"doc_id", record.candidate.doc_id},
              {"system", record.candidate.system_id},
              {"latency", std::string(to_string(record.candidate.latency))},
              {"value", record.value}};
}

ScoreRecord score_record_from_json(const Json& rec, const RecordLocation& where) {
  try {
    ScoreRecord out;
    out.variant = {parse_metric(get_string(rec, "metric", where)),
                   parse_reference_mode(get_string(rec, "reference_mode", where)),
                   parse_alignment_mode(get_string(rec, "alignment_mode", where))};
    validate(out.variant);
    out.candidate = {get_string(rec, "doc_id", where), get_string(rec, "system", where),
                     parse_latency(get_string(rec, "latency", where))};
    out.value = get_number(rec, "value", where);
    return out;
  } catch (const ParseError&) {
    throw;
  } catch (const Error& e) {
    throw ParseError(fmt::format("{}: {}", where.str(), e.what()));
  }
}

void write_scores(const std::filesystem::path& path, std::span<const ScoreRecord> records) {
  std::ostringstream out;
  for (const auto& r : records) write_jsonl_record(out, to_json(r));
  write_text_file(path, out.str());
}

std::vector<ScoreRecord> read_scores(const std::filesystem::path& path) {
  std::vector<ScoreRecord> out;
  read_jsonl(path, [&](const Json& rec, const RecordLocation& where) {
    out.push_back(score_record_from_json(rec, where));
  });
  return out;
}

ScoreTable make_score_table(std::span<const ScoreRecord> records) {
  ScoreTable table;
  for (const auto& r : records) {
    if (!table[r.variant].emplace(r.candidate, r.value).second) {
      throw Error(fmt::format("duplicate score for {} on {}", r.variant.label(), r.candidate.str()));
    }
  }
  return table;
}

double multi_reference_combine(Metric metric, std::span<const double> per_reference) {
  if (!is_neural(metric)) {
    throw Error(fmt::format("{} combines references internally", to_string(metric)));
  }
  if (per_reference.empty()) throw Error("no per-reference scores to combine");
  // Summing in sorted order keeps the result independent of reference order.
  std::vector<double> sorted(per_reference.begin(), per_reference.end());
  std::sort(sorted.begin(), sorted.end());
  return std::accumulate(sorted.begin(), sorted.end(), 0.0) / static_cast<double>(sorted.size());
}

namespace {

// Segment-aligned texts against one reference.
struct ReferencePairing {
  std::vector<std::string> sources;  // empty when not source-aligned
  std::vector<std::string> hypotheses;
  std::vector<std::string> references;
};

std::vector<ReferencePairing> build_pairings(const MetricVariant& v, const Document& doc,
                                             const CandidateOutput& cand,
                                             const DocumentReferences& refs,
                                             const MwerOptions& mwer) {
  validate(v);
  const auto source = doc.source_texts();
  const auto hyp = cand.texts();
  auto sentence_aligned = [&] { return ReferencePairing{source, hyp, refs.translation}; };
  auto joined = [&](const std::vector<std::string>& ref) {
    return ReferencePairing{{single_sequence(source)}, {single_sequence(hyp)}, {single_sequence(ref)}};
  };
  auto resegmented = [&] {
    AlignedPairing p = orient_for_variant(v, doc, cand, refs, mwer);
    return ReferencePairing{std::move(p.sources), std::move(p.hypotheses), std::move(p.references)};
  };

  switch (v.alignment) {
    case AlignmentMode::Sent:
      return {sentence_aligned()};
    case AlignmentMode::SingleSeq:
      switch (v.reference) {
        case ReferenceMode::Transl: return {joined(refs.translation)};
        case ReferenceMode::Intp: return {joined(refs.interpreting)};
        case ReferenceMode::TranslIntp: return {joined(refs.translation), joined(refs.interpreting)};
      }
      break;
    case AlignmentMode::mWER:
      return {resegmented()};
    case AlignmentMode::SentMwer:
      return {sentence_aligned(), resegmented()};
  }
  throw Error(fmt::format("unsupported variant {}", v.label()));
}

double score_lexical(Metric metric, const std::vector<ReferencePairing>& pairings) {
  const auto& hyps = pairings.front().hypotheses;
  std::vector<std::vector<std::string>> refs;
  refs.reserve(pairings.size());
  for (const auto& p : pairings) {
    if (p.hypotheses != hyps) throw Error("multi-reference pairings disagree on the hypothesis");
    refs.push_back(p.references);
  }
  return metric == Metric::BLEU ? bleu_document(hyps, refs) : chrf_document(hyps, refs);
}

template <typename Fn>
void parallel_for(std::size_t count, unsigned threads, Fn fn) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, count));
  if (threads <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::vector<std::exception_ptr> errors(threads);
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (unsigned t = 0; t < threads; ++t) {
    pool.emplace_back([&, t] {
      try {
        for (std::size_t i = t; i < count; i += threads) fn(i);
      } catch (...) {
        errors[t] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace

VariantScorer::VariantScorer(std::map<Metric, ExternalScorer*> neural, ScoringOptions options)
    : neural_(std::move(neural)), options_(options) {}

ExternalScorer& VariantScorer::scorer_for(Metric metric) const {
  auto it = neural_.find(metric);
  if (it == neural_.end() || it->second == nullptr) {
    throw Error(fmt::format("no external scorer configured for {} (use --scorer {}=<command>)",
                            to_string(metric), to_string(metric)));
  }
  return *it->second;
}

ScoreRecord VariantScorer::score_variant(const MetricVariant& variant, const Document& document,
                                         const CandidateOutput& candidate,
                                         const DocumentReferences& references) {
  const Job job{variant, &document, &candidate, &references};
  return score_jobs(std::span<const Job>(&job, 1)).front();
}

std::vector<ScoreRecord> VariantScorer::score_corpus(const Corpus& corpus,
                                                     std::span<const MetricVariant> variants) {
  std::vector<Job> jobs;
  jobs.reserve(variants.size() * corpus.candidates().size());
  for (const auto& v : variants) {
    validate(v);
    for (const auto& [key, cand] : corpus.candidates()) {
      jobs.push_back({v, &corpus.document(key.doc_id), &cand, &corpus.references(key.doc_id)});
    }
  }
  return score_jobs(jobs);
}

std::vector<ScoreRecord> VariantScorer::score_jobs(std::span<const Job> jobs) {
  std::vector<ScoreRecord> records(jobs.size());
  std::vector<std::vector<ReferencePairing>> pairings(jobs.size());

  parallel_for(jobs.size(), options_.threads, [&](std::size_t i) {
    const Job& job = jobs[i];
    records[i].variant = job.variant;
    records[i].candidate = job.candidate->key();
    pairings[i] = build_pairings(job.variant, *job.document, *job.candidate, *job.references,
                                 options_.mwer);
    if (!is_neural(job.variant.metric)) {
      records[i].value = score_lexical(job.variant.metric, pairings[i]);
    }
  });

  for (Metric metric : {Metric::BertScore, Metric::COMET}) {
    std::vector<std::size_t> owners;
    for (std::size_t i = 0; i < jobs.size(); ++i) {
      if (jobs[i].variant.metric == metric) owners.push_back(i);
    }
    if (owners.empty()) continue;
    ExternalScorer& scorer = scorer_for(metric);

    std::vector<ScoreRequest> batch;
    for (std::size_t i : owners) {
      for (std::size_t r = 0; r < pairings[i].size(); ++r) {
        const auto& p = pairings[i][r];
        if (metric == Metric::COMET && p.sources.size() != p.hypotheses.size()) {
          throw Error(fmt::format("COMET needs source-aligned segments ({})",
                                  jobs[i].variant.label()));
        }
        for (std::size_t s = 0; s < p.hypotheses.size(); ++s) {
          ScoreRequest req;
          req.id = fmt::format("{}:{}:{}", i, r, s);
          if (metric == Metric::COMET) req.source = p.sources[s];
          req.hypothesis = p.hypotheses[s];
          req.reference = p.references[s];
          batch.push_back(std::move(req));
        }
      }
    }
    const std::vector<ScoreResult> results = scorer.score(batch);

    std::size_t next = 0;
    for (std::size_t i : owners) {
      std::vector<double> per_reference;
      for (const auto& p : pairings[i]) {
        if (p.hypotheses.empty()) throw Error("cannot score a document without segments");
        double sum = 0.0;
        for (std::size_t s = 0; s < p.hypotheses.size(); ++s) sum += results[next++].score;
        per_reference.push_back(sum / static_cast<double>(p.hypotheses.size()));
      }
      records[i].value = multi_reference_combine(metric, per_reference);
    }
  }
  return records;
}

}  // namespace sstmeta
