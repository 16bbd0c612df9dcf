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
#include <string>
#include <vector>

#include "sstmeta/analysis.hpp"
#include "sstmeta/jsonl.hpp"

namespace sstmeta {

// Square matrix of pairwise p-values with the rating correlations on the
// diagonal.
struct HeatmapSpec {
  std::string title;
  std::vector<std::string> labels;
  std::vector<std::vector<double>> p;
  std::vector<double> diagonal;
};

void validate(const HeatmapSpec& spec);  // throws Error
Json to_json(const HeatmapSpec& spec);
HeatmapSpec heatmap_from_json(const Json& data);
HeatmapSpec make_heatmap(const Table2& table, std::string title);
std::string render_heatmap_svg(const HeatmapSpec& spec);

struct ScatterPoint {
  std::string id;
  std::string group;
  double x = 0.0;
  double y = 0.0;
};

struct ScatterSpec {
  std::string title;
  std::string x_label;
  std::string y_label;
  std::vector<ScatterPoint> points;
};

Json to_json(const ScatterSpec& spec);
ScatterSpec scatter_from_json(const Json& data);
std::string render_scatter_svg(const ScatterSpec& spec);

// Two-decimal display form; never prints "-0.00".
std::string format_display(double value);

std::string table1_markdown(const Table1& table);
std::string table2_markdown(const Table2& table);
std::string recommendations_markdown(const std::vector<Recommendation>& recs);

// Writes every table, data record and figure below `out_dir`, one directory
// per subset and aggregation. The output depends only on `result`.
void write_report(const AnalysisResult& result, const std::filesystem::path& out_dir);

}  // namespace sstmeta
