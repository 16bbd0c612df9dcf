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

#include <csignal>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "sstmeta/alignment.hpp"
#include "sstmeta/error.hpp"
#include "sstmeta/pipeline.hpp"
#include "sstmeta/service.hpp"
#include "sstmeta/text.hpp"

using namespace sstmeta;

namespace {

struct Options {
  std::string config;
  std::vector<std::string> subsets;
  std::vector<std::string> variants;
  std::string cr_definition;
  std::vector<double> thresholds;
  std::string out_dir;
  std::vector<std::string> scorers;
  bool verbose = false;
};

void add_config(CLI::App* cmd, Options& o) {
  cmd->add_option("--config", o.config, "Pipeline config (JSON)")->required()->check(CLI::ExistingFile);
}

void add_analysis_flags(CLI::App* cmd, Options& o) {
  cmd->add_option("--subset", o.subsets, "both, Common, NonNative")->delimiter(',');
  cmd->add_option("--variants", o.variants, "metric/reference/alignment labels")->delimiter(',');
  cmd->add_option("--cr-definition", o.cr_definition, "CR or CRi");
  cmd->add_option("--threshold", o.thresholds, "Significance thresholds")->delimiter(',');
}

void add_output_flags(CLI::App* cmd, Options& o) {
  cmd->add_option("--out-dir", o.out_dir, "Output directory");
  cmd->add_option("--scorer", o.scorers, "External scorer as name=command");
}

PipelineConfig configure(const Options& o) {
  PipelineConfig cfg = load_pipeline_config(o.config);
  CliOverrides ov;
  if (!o.subsets.empty()) ov.subsets = o.subsets;
  if (!o.variants.empty()) ov.variants = o.variants;
  if (!o.cr_definition.empty()) ov.cr_definition = o.cr_definition;
  if (!o.thresholds.empty()) ov.thresholds = o.thresholds;
  if (!o.out_dir.empty()) ov.out_dir = o.out_dir;
  ov.scorers = o.scorers;
  apply_overrides(cfg, ov);
  return cfg;
}

std::vector<std::string> read_lines(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(fmt::format("cannot read '{}'", path));
  std::vector<std::string> lines;
  for (std::string line; std::getline(in, line);) lines.push_back(line);
  return lines;
}

HttpServer* g_server = nullptr;

void on_signal(int) {
  if (g_server) g_server->stop();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Meta-evaluation of speech translation metrics against continuous ratings"};
  app.require_subcommand(1);
  Options o;
  app.add_flag("-v,--verbose", o.verbose, "Debug logging");

  auto* ingest = app.add_subcommand("ingest", "Validate the corpus and print a summary");
  add_config(ingest, o);

  auto* score = app.add_subcommand("score", "Score all metric variants");
  add_config(score, o);
  score->add_option("--variants", o.variants, "metric/reference/alignment labels")->delimiter(',');
  add_output_flags(score, o);

  std::string hyp_path, ref_path, align_out;
  bool ignore_case = false;
  auto* align = app.add_subcommand("align", "Resegment a hypothesis to reference segments by minimum WER");
  align->add_option("--hyp", hyp_path, "Hypothesis text")->required()->check(CLI::ExistingFile);
  align->add_option("--ref", ref_path, "Reference segments, one per line")->required()->check(CLI::ExistingFile);
  align->add_option("--out", align_out, "Resegmented hypothesis, one segment per line")->required();
  align->add_flag("--ignore-case", ignore_case, "Compare tokens case-insensitively");

  auto* rate = app.add_subcommand("rate", "Aggregate continuous ratings per candidate");
  add_config(rate, o);
  rate->add_option("--out-dir", o.out_dir, "Output directory");

  std::string scores_path;
  auto* analyze = app.add_subcommand("analyze", "Correlate scores with ratings and write the report tree");
  add_config(analyze, o);
  add_analysis_flags(analyze, o);
  analyze->add_option("--out-dir", o.out_dir, "Output directory");
  analyze->add_option("--scores", scores_path, "Scores file (default: <out-dir>/scores.jsonl)");

  std::string report_dir;
  auto* report = app.add_subcommand("report", "Re-render figures from their data records");
  report->add_option("--out-dir", report_dir, "Report directory")->required();

  auto* run = app.add_subcommand("run", "ingest, score, rate, analyze and report");
  add_config(run, o);
  add_analysis_flags(run, o);
  add_output_flags(run, o);

  std::string state_dir, host;
  int port = -1;
  std::int64_t seed = -1;
  auto* serve = app.add_subcommand("serve", "Serve rating sessions and collect click logs");
  add_config(serve, o);
  serve->add_option("--state-dir", state_dir, "Service state directory");
  serve->add_option("--host", host, "Listen address");
  serve->add_option("--port", port, "Listen port (0: any)");
  serve->add_option("--seed", seed, "Assignment seed");

  CLI11_PARSE(app, argc, argv);
  spdlog::set_default_logger(spdlog::stderr_color_mt("sstmeta"));
  spdlog::set_level(o.verbose ? spdlog::level::debug : spdlog::level::warn);

  try {
    if (*ingest) {
      IngestSummary summary;
      run_ingest(configure(o), &summary);
      std::cout << to_json(summary).dump() << '\n';
    } else if (*score) {
      const auto cfg = configure(o);
      const Corpus corpus = run_ingest(cfg);
      std::size_t invocations = 0;
      const auto records = run_score(cfg, corpus, &invocations);
      std::cout << Json{{"records", records.size()},
                        {"scorer_invocations", invocations},
                        {"path", (cfg.out_dir / "scores.jsonl").string()}}
                       .dump()
                << '\n';
    } else if (*align) {
      const Tokens hyp = wer_tokens(join(read_lines(hyp_path), " "));
      const auto refs = wer_tokens(read_lines(ref_path));
      if (refs.empty()) throw Error(fmt::format("'{}' has no reference segments", ref_path));
      const auto result = mwer_resegment(hyp, refs, MwerOptions{ignore_case});
      std::string text;
      for (const auto& seg : result.segmentation.texts()) text += seg + "\n";
      write_text_file(align_out, text);
      std::size_t ref_tokens = 0;
      for (const auto& r : refs) ref_tokens += r.size();
      std::cout << Json{{"segments", refs.size()},
                        {"hyp_tokens", hyp.size()},
                        {"ref_tokens", ref_tokens},
                        {"cost", result.cost},
                        {"wer", ref_tokens ? static_cast<double>(result.cost) / ref_tokens : 0.0}}
                       .dump()
                << '\n';
    } else if (*rate) {
      const auto cfg = configure(o);
      const auto scores = run_rate(cfg, run_ingest(cfg));
      std::cout << Json{{"rated_candidates", scores.size()},
                        {"path", (cfg.out_dir / "ratings.jsonl").string()}}
                       .dump()
                << '\n';
    } else if (*analyze) {
      const auto cfg = configure(o);
      const Corpus corpus = run_ingest(cfg);
      const auto path = scores_path.empty() ? cfg.out_dir / "scores.jsonl" : std::filesystem::path(scores_path);
      std::vector<ScoreRecord> records;
      try {
        records = read_scores(path);
      } catch (const Error& e) {
        throw StageError("analyze", e.what());
      }
      run_analyze(cfg, corpus, records);
      std::cout << Json{{"out_dir", cfg.out_dir.string()}}.dump() << '\n';
    } else if (*report) {
      const auto n = render_figures(report_dir);
      std::cout << Json{{"figures", n}}.dump() << '\n';
    } else if (*run) {
      const auto cfg = configure(o);
      const auto result = end_to_end(cfg);
      std::cout << Json{{"out_dir", cfg.out_dir.string()},
                        {"scorer_invocations", result.scorer_invocations}}
                       .dump()
                << '\n';
    } else if (*serve) {
      auto cfg = configure(o);
      if (!state_dir.empty()) cfg.service.state_dir = state_dir;
      if (!host.empty()) cfg.service.host = host;
      if (port >= 0) cfg.service.port = port;
      if (seed >= 0) cfg.service.seed = static_cast<std::uint64_t>(seed);
      const Corpus corpus = run_ingest(cfg);
      RatingService service(corpus, cfg.service.state_dir, cfg.service.seed);
      HttpServer server(service);
      int bound = cfg.service.port;
      if (bound == 0) {
        bound = server.bind_to_any_port(cfg.service.host);
        if (bound < 0) throw Error("cannot bind a port");
      } else if (!server.bind(cfg.service.host, bound)) {
        throw Error(fmt::format("cannot bind {}:{}", cfg.service.host, bound));
      }
      g_server = &server;
      std::signal(SIGINT, on_signal);
      std::signal(SIGTERM, on_signal);
      std::cout << Json{{"host", cfg.service.host}, {"port", bound}, {"seed", service.seed()}}.dump()
                << std::endl;
      server.listen();
      g_server = nullptr;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
