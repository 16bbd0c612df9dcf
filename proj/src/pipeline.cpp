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

#include "sstmeta/pipeline.hpp"

#include <algorithm>
#include <sstream>

#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include "sstmeta/report.hpp"

namespace sstmeta {

StageError::StageError(std::string stage, const std::string& message)
    : Error(fmt::format("{}: {}", stage, message)), stage_(std::move(stage)) {}

namespace {

std::filesystem::path resolve(const std::filesystem::path& base, const std::filesystem::path& p) {
  return p.is_absolute() ? p : (base / p).lexically_normal();
}

template <typename Fn>
auto in_stage(const std::string& stage, Fn fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const StageError&) {
    throw;
  } catch (const std::exception& e) {
    throw StageError(stage, e.what());
  }
}

std::string path_field(const Json& obj, const char* key) {
  if (!obj.contains(key) || !obj.at(key).is_string()) {
    throw Error(fmt::format("config: '{}' must be a path string", key));
  }
  return obj.at(key).get<std::string>();
}

}  // namespace

PipelineConfig pipeline_config_from_json(const Json& data, const std::filesystem::path& base_dir) {
  if (!data.is_object()) throw Error("config: expected a JSON object");
  PipelineConfig cfg;
  try {
    const Json& corpus = data.at("corpus");
    cfg.corpus.documents = resolve(base_dir, path_field(corpus, "documents"));
    cfg.corpus.candidates = resolve(base_dir, path_field(corpus, "candidates"));
    cfg.corpus.ref_translation = resolve(base_dir, path_field(corpus, "ref_translation"));
    cfg.corpus.ref_interpreting = resolve(base_dir, path_field(corpus, "ref_interpreting"));
    if (corpus.contains("ratings")) cfg.corpus.ratings = resolve(base_dir, path_field(corpus, "ratings"));
    if (corpus.contains("systems")) {
      for (const auto& [name, opts] : corpus.at("systems").items()) {
        SystemOptions so;
        so.detokenize = opts.value("detokenize", false);
        so.language = opts.value("language", std::string("de"));
        cfg.corpus.systems[name] = so;
      }
    }
    if (data.contains("scorers")) {
      for (const auto& [name, command] : data.at("scorers").items()) {
        const Metric m = parse_metric(name);
        if (!is_neural(m)) throw Error(fmt::format("config: {} is computed natively", name));
        cfg.scorers[m] = ScorerSpec{name, command.get<std::string>()};
      }
    }
    cfg.cache_dir = resolve(base_dir, data.value("cache_dir", std::string("cache")));
    cfg.out_dir = resolve(base_dir, data.value("out_dir", std::string("out")));
    if (data.contains("analysis")) {
      const Json& a = data.at("analysis");
      auto& ac = cfg.analysis;
      if (a.contains("subsets")) {
        ac.subsets.clear();
        for (const auto& s : a.at("subsets")) ac.subsets.push_back(parse_subset_filter(s.get<std::string>()));
      }
      if (a.contains("aggregations")) {
        ac.aggregations.clear();
        for (const auto& s : a.at("aggregations")) ac.aggregations.push_back(parse_aggregation(s.get<std::string>()));
      }
      if (a.contains("variants")) {
        ac.variants.clear();
        for (const auto& s : a.at("variants")) ac.variants.push_back(parse_variant(s.get<std::string>()));
      }
      if (a.contains("cr_definition")) ac.cr_definition = parse_cr_definition(a.at("cr_definition").get<std::string>());
      if (a.contains("thresholds")) ac.thresholds = a.at("thresholds").get<std::vector<double>>();
      if (a.contains("method")) ac.method = parse_steiger_method(a.at("method").get<std::string>());
      if (a.contains("strong_correlation")) ac.strong_correlation = a.at("strong_correlation").get<double>();
    }
    if (data.contains("mwer")) cfg.scoring.mwer.ignore_case = data.at("mwer").value("ignore_case", false);
    cfg.scoring.threads = data.value("threads", 0u);
    if (data.contains("service")) {
      const Json& s = data.at("service");
      cfg.service.state_dir = resolve(base_dir, s.value("state_dir", std::string("state")));
      cfg.service.seed = s.value("seed", std::uint64_t{0});
      cfg.service.host = s.value("host", cfg.service.host);
      cfg.service.port = s.value("port", cfg.service.port);
    } else {
      cfg.service.state_dir = resolve(base_dir, cfg.service.state_dir);
    }
  } catch (const Json::exception& e) {
    throw Error(fmt::format("config: {}", e.what()));
  }
  validate(cfg.analysis);
  return cfg;
}

PipelineConfig load_pipeline_config(const std::filesystem::path& path) {
  Json data;
  try {
    data = Json::parse(read_text_file(path));
  } catch (const Json::exception& e) {
    throw ParseError(fmt::format("{}: invalid JSON ({})", path.string(), e.what()));
  }
  const auto base = std::filesystem::absolute(path).parent_path();
  try {
    return pipeline_config_from_json(data, base);
  } catch (const Error& e) {
    throw Error(fmt::format("{}: {}", path.string(), e.what()));
  }
}

void apply_overrides(PipelineConfig& config, const CliOverrides& o) {
  auto& a = config.analysis;
  if (o.subsets) {
    a.subsets.clear();
    for (const auto& s : *o.subsets) a.subsets.push_back(parse_subset_filter(s));
  }
  if (o.variants) {
    a.variants.clear();
    for (const auto& s : *o.variants) a.variants.push_back(parse_variant(s));
  }
  if (o.cr_definition) a.cr_definition = parse_cr_definition(*o.cr_definition);
  if (o.thresholds) a.thresholds = *o.thresholds;
  if (o.out_dir) config.out_dir = *o.out_dir;
  for (const auto& text : o.scorers) {
    ScorerSpec spec = parse_scorer_spec(text);
    const Metric m = parse_metric(spec.name);
    if (!is_neural(m)) throw Error(fmt::format("--scorer: {} is computed natively", spec.name));
    config.scorers[m] = std::move(spec);
  }
  validate(a);
}

Json to_json(const IngestSummary& s) {
  return Json{{"documents", s.documents},
              {"candidates", s.candidates},
              {"sessions", s.sessions},
              {"rated_candidates", s.rated_candidates},
              {"documents_by_subset", s.documents_by_subset}};
}

Corpus run_ingest(const PipelineConfig& config, IngestSummary* summary) {
  return in_stage("ingest", [&] {
    Corpus corpus = load_corpus(config.corpus);
    if (summary) {
      *summary = {};
      summary->documents = corpus.documents().size();
      summary->candidates = corpus.candidates().size();
      summary->sessions = corpus.sessions().size();
      for (const auto& [id, doc] : corpus.documents()) {
        ++summary->documents_by_subset[std::string(to_string(doc.subset))];
      }
      summary->rated_candidates = aggregate_ratings(corpus.sessions()).size();
    }
    return corpus;
  });
}

std::vector<ScoreRecord> run_score(const PipelineConfig& config, const Corpus& corpus,
                                   std::size_t* invocations) {
  return in_stage("score", [&] {
    std::vector<MetricVariant> variants = config.analysis.variants;
    for (const auto& h : headline_variants()) {
      if (std::find(variants.begin(), variants.end(), h) == variants.end()) variants.push_back(h);
    }
    std::map<Metric, std::unique_ptr<ExternalScorer>> owned;
    std::map<Metric, ExternalScorer*> neural;
    for (const auto& [metric, spec] : config.scorers) {
      owned[metric] = std::make_unique<ExternalScorer>(spec, config.cache_dir);
      neural[metric] = owned[metric].get();
    }
    VariantScorer scorer(neural, config.scoring);
    auto records = scorer.score_corpus(corpus, variants);
    std::filesystem::create_directories(config.out_dir);
    write_scores(config.out_dir / "scores.jsonl", records);
    if (invocations) {
      *invocations = 0;
      for (const auto& [m, s] : owned) *invocations += s->invocations();
    }
    return records;
  });
}

std::vector<RatingScore> run_rate(const PipelineConfig& config, const Corpus& corpus) {
  return in_stage("rate", [&] {
    auto scores = aggregate_ratings(corpus.sessions());
    std::ostringstream out;
    for (const auto& s : scores) {
      write_jsonl_record(out, Json{{"doc_id", s.candidate.doc_id},
                                   {"system", s.candidate.system_id},
                                   {"latency", std::string(to_string(s.candidate.latency))},
                                   {"cr", s.cr},
                                   {"cri", s.cri},
                                   {"n_sessions", s.n_sessions}});
    }
    std::filesystem::create_directories(config.out_dir);
    write_text_file(config.out_dir / "ratings.jsonl", out.str());
    return scores;
  });
}

AnalysisResult run_analyze(const PipelineConfig& config, const Corpus& corpus,
                           std::span<const ScoreRecord> scores) {
  auto result = in_stage("analyze", [&] {
    return run_analysis(corpus, make_score_table(scores), config.analysis);
  });
  in_stage("report", [&] { write_report(result, config.out_dir); });
  return result;
}

std::size_t render_figures(const std::filesystem::path& out_dir) {
  return in_stage("report", [&] {
    if (!std::filesystem::is_directory(out_dir)) {
      throw Error(fmt::format("'{}' is not a report directory", out_dir.string()));
    }
    std::vector<std::filesystem::path> data_files;
    for (const auto& entry : std::filesystem::recursive_directory_iterator(out_dir)) {
      if (entry.is_regular_file() && entry.path().extension() == ".json") data_files.push_back(entry.path());
    }
    std::sort(data_files.begin(), data_files.end());
    std::size_t rendered = 0;
    for (const auto& path : data_files) {
      const Json data = Json::parse(read_text_file(path));
      auto svg = path;
      svg.replace_extension(".svg");
      if (data.contains("diagonal")) {
        write_text_file(svg, render_heatmap_svg(heatmap_from_json(data)));
      } else if (data.contains("points")) {
        write_text_file(svg, render_scatter_svg(scatter_from_json(data)));
      } else {
        continue;
      }
      ++rendered;
    }
    return rendered;
  });
}

EndToEndResult end_to_end(const PipelineConfig& config) {
  EndToEndResult result;
  const Corpus corpus = run_ingest(config);
  const auto scores = run_score(config, corpus, &result.scorer_invocations);
  run_rate(config, corpus);
  run_analyze(config, corpus, scores);
  spdlog::info("report written to {}", config.out_dir.string());
  return result;
}

}  // namespace sstmeta
