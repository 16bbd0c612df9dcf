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

#include "sstmeta/report.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <fmt/format.h>

#include "sstmeta/error.hpp"

namespace sstmeta {

namespace {

std::string xml_escape(std::string_view text) {
  std::string out;
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string num(double v) {
  std::string s = fmt::format("{:.2f}", v);
  return s == "-0.00" ? "0.00" : s;
}

// Light for high p (no difference), dark for low p.
std::string heat_color(double p) {
  const double t = std::clamp(p, 0.0, 1.0);
  const int r = static_cast<int>(std::lround(33 + t * (247 - 33)));
  const int g = static_cast<int>(std::lround(102 + t * (251 - 102)));
  const int b = static_cast<int>(std::lround(172 + t * (255 - 172)));
  return fmt::format("#{:02x}{:02x}{:02x}", r, g, b);
}

const char* kFont = "font-family=\"sans-serif\"";

}  // namespace

std::string format_display(double value) { return num(value); }

void validate(const HeatmapSpec& spec) {
  const std::size_t v = spec.labels.size();
  if (spec.p.size() != v || spec.diagonal.size() != v) throw Error("heatmap: inconsistent sizes");
  for (std::size_t i = 0; i < v; ++i) {
    if (spec.p[i].size() != v) throw Error("heatmap: matrix is not square");
    if (!(spec.diagonal[i] >= -1.0 && spec.diagonal[i] <= 1.0)) {
      throw Error("heatmap: diagonal value outside [-1, 1]");
    }
    for (std::size_t j = 0; j < v; ++j) {
      if (i != j && !(spec.p[i][j] >= 0.0 && spec.p[i][j] <= 1.0)) {
        throw Error("heatmap: p-value outside [0, 1]");
      }
    }
  }
}

Json to_json(const HeatmapSpec& spec) {
  return Json{{"title", spec.title}, {"labels", spec.labels}, {"p", spec.p}, {"diagonal", spec.diagonal}};
}

HeatmapSpec heatmap_from_json(const Json& data) {
  HeatmapSpec spec;
  try {
    spec.title = data.at("title").get<std::string>();
    spec.labels = data.at("labels").get<std::vector<std::string>>();
    spec.p = data.at("p").get<std::vector<std::vector<double>>>();
    spec.diagonal = data.at("diagonal").get<std::vector<double>>();
  } catch (const Json::exception& e) {
    throw ParseError(fmt::format("heatmap data: {}", e.what()));
  }
  validate(spec);
  return spec;
}

HeatmapSpec make_heatmap(const Table2& table, std::string title) {
  HeatmapSpec spec;
  spec.title = std::move(title);
  for (const auto& row : table.rows) {
    spec.labels.push_back(row.variant.label());
    spec.diagonal.push_back(row.r);
  }
  spec.p = table.p_matrix();
  for (std::size_t i = 0; i < spec.p.size(); ++i) spec.p[i][i] = 1.0;
  return spec;
}

std::string render_heatmap_svg(const HeatmapSpec& spec) {
  validate(spec);
  const int cell = 44;
  const int left = 230;
  const int top = 240;
  const int v = static_cast<int>(spec.labels.size());
  const int width = left + v * cell + 20;
  const int height = top + v * cell + 20;
  std::ostringstream out;
  out << fmt::format(
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{}\" height=\"{}\" viewBox=\"0 0 {} {}\">\n",
      width, height, width, height);
  out << fmt::format("<rect width=\"{}\" height=\"{}\" fill=\"white\"/>\n", width, height);
  out << fmt::format("<text x=\"10\" y=\"20\" {} font-size=\"14\">{}</text>\n", kFont,
                     xml_escape(spec.title));
  for (int i = 0; i < v; ++i) {
    const std::string label = xml_escape(spec.labels[i]);
    out << fmt::format(
        "<text x=\"{}\" y=\"{}\" {} font-size=\"11\" text-anchor=\"end\">{}</text>\n", left - 6,
        top + i * cell + cell / 2 + 4, kFont, label);
    const int cx = left + i * cell + cell / 2 + 4;
    out << fmt::format(
        "<text x=\"{}\" y=\"{}\" {} font-size=\"11\" transform=\"rotate(-60 {} {})\">{}</text>\n", cx,
        top - 6, kFont, cx, top - 6, label);
  }
  for (int i = 0; i < v; ++i) {
    for (int j = 0; j < v; ++j) {
      const int x = left + j * cell;
      const int y = top + i * cell;
      const bool diag = i == j;
      const double value = diag ? spec.diagonal[i] : spec.p[i][j];
      const std::string fill = diag ? "#ffffff" : heat_color(value);
      const std::string ink = (!diag && value < 0.5) ? "white" : "black";
      out << fmt::format(
          "<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"{}\" stroke=\"#999999\"/>\n", x, y,
          cell, cell, fill);
      out << fmt::format(
          "<text x=\"{}\" y=\"{}\" {} font-size=\"11\" text-anchor=\"middle\" fill=\"{}\"{}>{}</text>\n",
          x + cell / 2, y + cell / 2 + 4, kFont, ink, diag ? " font-weight=\"bold\"" : "", num(value));
    }
  }
  out << "</svg>\n";
  return out.str();
}

Json to_json(const ScatterSpec& spec) {
  Json points = Json::array();
  for (const auto& p : spec.points) {
    points.push_back(Json{{"id", p.id}, {"group", p.group}, {"x", p.x}, {"y", p.y}});
  }
  return Json{{"title", spec.title}, {"x_label", spec.x_label}, {"y_label", spec.y_label}, {"points", points}};
}

ScatterSpec scatter_from_json(const Json& data) {
  ScatterSpec spec;
  try {
    spec.title = data.at("title").get<std::string>();
    spec.x_label = data.at("x_label").get<std::string>();
    spec.y_label = data.at("y_label").get<std::string>();
    for (const auto& p : data.at("points")) {
      spec.points.push_back({p.at("id").get<std::string>(), p.at("group").get<std::string>(),
                             p.at("x").get<double>(), p.at("y").get<double>()});
    }
  } catch (const Json::exception& e) {
    throw ParseError(fmt::format("scatter data: {}", e.what()));
  }
  return spec;
}

std::string render_scatter_svg(const ScatterSpec& spec) {
  if (spec.points.empty()) throw Error("scatter: no points");
  const double w = 480, h = 360, left = 60, top = 40, right = 20, bottom = 50;
  const double pw = w - left - right;
  const double ph = h - top - bottom;
  auto [xmin_it, xmax_it] = std::minmax_element(
      spec.points.begin(), spec.points.end(), [](const auto& a, const auto& b) { return a.x < b.x; });
  auto [ymin_it, ymax_it] = std::minmax_element(
      spec.points.begin(), spec.points.end(), [](const auto& a, const auto& b) { return a.y < b.y; });
  auto padded = [](double lo, double hi) {
    if (hi - lo <= 0.0) return std::pair{lo - 0.5, hi + 0.5};
    const double pad = (hi - lo) * 0.05;
    return std::pair{lo - pad, hi + pad};
  };
  const auto [x0, x1] = padded(xmin_it->x, xmax_it->x);
  const auto [y0, y1] = padded(ymin_it->y, ymax_it->y);
  auto px = [&](double x) { return left + (x - x0) / (x1 - x0) * pw; };
  auto py = [&](double y) { return top + ph - (y - y0) / (y1 - y0) * ph; };

  std::vector<std::string> groups;
  for (const auto& p : spec.points) {
    if (std::find(groups.begin(), groups.end(), p.group) == groups.end()) groups.push_back(p.group);
  }
  std::sort(groups.begin(), groups.end());
  const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd"};
  auto color = [&](const std::string& g) {
    const auto i = static_cast<std::size_t>(std::find(groups.begin(), groups.end(), g) - groups.begin());
    return palette[i % std::size(palette)];
  };

  std::ostringstream out;
  out << fmt::format(
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{}\" height=\"{}\" viewBox=\"0 0 {} {}\">\n", w,
      h, w, h);
  out << fmt::format("<rect width=\"{}\" height=\"{}\" fill=\"white\"/>\n", w, h);
  out << fmt::format("<text x=\"{}\" y=\"20\" {} font-size=\"14\">{}</text>\n", left, kFont,
                     xml_escape(spec.title));
  out << fmt::format(
      "<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"none\" stroke=\"black\"/>\n", left, top,
      pw, ph);
  for (int i = 0; i <= 4; ++i) {
    const double xv = x0 + (x1 - x0) * i / 4.0;
    const double yv = y0 + (y1 - y0) * i / 4.0;
    out << fmt::format("<text x=\"{:.1f}\" y=\"{:.1f}\" {} font-size=\"10\" text-anchor=\"middle\">{}</text>\n",
                       px(xv), top + ph + 14, kFont, num(xv));
    out << fmt::format("<text x=\"{:.1f}\" y=\"{:.1f}\" {} font-size=\"10\" text-anchor=\"end\">{}</text>\n",
                       left - 4, py(yv) + 3, kFont, num(yv));
  }
  out << fmt::format("<text x=\"{:.1f}\" y=\"{:.1f}\" {} font-size=\"12\" text-anchor=\"middle\">{}</text>\n",
                     left + pw / 2, h - 12, kFont, xml_escape(spec.x_label));
  out << fmt::format(
      "<text x=\"14\" y=\"{:.1f}\" {} font-size=\"12\" text-anchor=\"middle\" "
      "transform=\"rotate(-90 14 {:.1f})\">{}</text>\n",
      top + ph / 2, kFont, top + ph / 2, xml_escape(spec.y_label));
  for (std::size_t i = 0; i < groups.size(); ++i) {
    const double ly = top + 12 + 14 * static_cast<double>(i);
    out << fmt::format("<circle cx=\"{:.1f}\" cy=\"{:.1f}\" r=\"4\" fill=\"{}\"/>\n", left + pw - 90, ly - 4,
                       color(groups[i]));
    out << fmt::format("<text x=\"{:.1f}\" y=\"{:.1f}\" {} font-size=\"10\">{}</text>\n", left + pw - 82, ly,
                       kFont, xml_escape(groups[i]));
  }
  for (const auto& p : spec.points) {
    out << fmt::format(
        "<circle cx=\"{:.2f}\" cy=\"{:.2f}\" r=\"3\" fill=\"{}\" fill-opacity=\"0.6\"><title>{}</title></circle>\n",
        px(p.x), py(p.y), color(p.group), xml_escape(p.id));
  }
  out << "</svg>\n";
  return out.str();
}

std::string table1_markdown(const Table1& table) {
  std::ostringstream out;
  for (const auto& panel : table.panels) {
    out << fmt::format("### {}\n\n", to_string(panel.aggregation));
    out << "| subset | n |";
    const auto& header = panel.rows.empty() ? std::vector<Table1Cell>{} : panel.rows.front().cells;
    for (const auto& c : header) out << ' ' << to_string(c.metric) << " |";
    out << "\n|---|---|";
    for (std::size_t i = 0; i < header.size(); ++i) out << "---|";
    out << '\n';
    for (const auto& row : panel.rows) {
      out << "| " << to_string(row.subset) << " | " << (row.cells.empty() ? 0 : row.cells.front().n) << " |";
      for (const auto& c : row.cells) {
        out << ' ' << (c.weak ? "*" + num(c.r) + "*" : num(c.r)) << " |";
      }
      out << '\n';
    }
    out << '\n';
  }
  return out.str();
}

std::string table2_markdown(const Table2& table) {
  std::ostringstream out;
  out << "| rank | metric | reference | alignment | r | boundary |\n";
  out << "|---|---|---|---|---|---|\n";
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    const auto& v = table.rows[i].variant;
    std::string marks;
    for (const auto& [threshold, positions] : table.boundaries) {
      if (std::find(positions.begin(), positions.end(), i + 1) != positions.end()) {
        if (!marks.empty()) marks += ", ";
        marks += fmt::format("p<{}", threshold);
      }
    }
    out << fmt::format("| {} | {} | {} | {} | {} | {} |\n", i + 1, to_string(v.metric),
                       to_string(v.reference), to_string(v.alignment), num(table.rows[i].r), marks);
  }
  return out.str();
}

std::string recommendations_markdown(const std::vector<Recommendation>& recs) {
  std::ostringstream out;
  for (const auto& r : recs) {
    out << fmt::format("- {}: {} (r={}) over {} (r={}), p={:.4f}{}\n", r.question, r.chosen.label(),
                       num(r.r_chosen), r.runner_up.label(), num(r.r_runner_up), r.p,
                       r.significant ? "" : " (not significant)");
  }
  return out.str();
}

namespace {

std::string jsonl(const std::vector<Json>& records) {
  std::ostringstream out;
  for (const auto& r : records) write_jsonl_record(out, r);
  return out.str();
}

std::string pretty(const Json& data) { return data.dump(1) + "\n"; }

std::string point_id(const CandidateKey& key) { return key.str(); }

}  // namespace

void write_report(const AnalysisResult& result, const std::filesystem::path& out_dir) {
  namespace fs = std::filesystem;
  fs::create_directories(out_dir);

  std::vector<Json> table1_records;
  for (const auto& panel : result.table1.panels) {
    for (const auto& row : panel.rows) {
      for (const auto& c : row.cells) {
        table1_records.push_back(Json{{"subset", std::string(to_string(row.subset))},
                                      {"aggregation", std::string(to_string(panel.aggregation))},
                                      {"metric", std::string(to_string(c.metric))},
                                      {"n", c.n},
                                      {"r", c.r},
                                      {"p", c.p},
                                      {"weak", c.weak}});
      }
    }
  }
  write_text_file(out_dir / "table1.jsonl", jsonl(table1_records));
  write_text_file(out_dir / "table1.md", table1_markdown(result.table1));

  std::ostringstream summary;
  summary << "# Metric correlation report\n\n";
  summary << fmt::format("Rating definition: {}. Dependent-correlation test: {}.\n\n",
                         to_string(result.config.cr_definition), to_string(result.config.method));
  summary << "## Headline metrics\n\n" << table1_markdown(result.table1);

  for (const auto& slice : result.slices) {
    const std::string subset(to_string(slice.subset));
    const std::string aggregation(to_string(slice.aggregation));
    const fs::path dir = out_dir / subset / aggregation;
    fs::create_directories(dir);
    const auto& t2 = slice.table2;

    std::vector<Json> correlations;
    for (const auto& row : t2.rows) {
      correlations.push_back(Json{{"subset", subset},
                                  {"aggregation", aggregation},
                                  {"metric_variant", row.variant.label()},
                                  {"n", row.n},
                                  {"r", row.r},
                                  {"p", row.p}});
    }
    write_text_file(dir / "correlations.jsonl", jsonl(correlations));

    std::vector<Json> pairwise;
    for (std::size_t a = 0; a < t2.rows.size(); ++a) {
      for (std::size_t b = 0; b < t2.rows.size(); ++b) {
        if (a == b) continue;
        const auto& c = t2.pairwise[a][b];
        pairwise.push_back(Json{{"variant_a", c.variant_a},
                                {"variant_b", c.variant_b},
                                {"r_a", c.r_a},
                                {"r_b", c.r_b},
                                {"r_ab", c.r_ab},
                                {"n", c.n},
                                {"t", c.t_stat},
                                {"p", c.p}});
      }
    }
    write_text_file(dir / "pairwise.jsonl", jsonl(pairwise));

    std::vector<Json> clusters;
    for (const auto& [threshold, positions] : t2.boundaries) {
      clusters.push_back(Json{{"threshold", threshold}, {"boundaries_after", positions}});
    }
    write_text_file(dir / "clusters.jsonl", jsonl(clusters));
    write_text_file(dir / "table2.md", table2_markdown(t2));

    const HeatmapSpec heatmap =
        make_heatmap(t2, fmt::format("Pairwise p-values, {} / {}", subset, aggregation));
    write_text_file(dir / "heatmap.json", pretty(to_json(heatmap)));
    write_text_file(dir / "heatmap.svg", render_heatmap_svg(heatmap));

    const std::string rating_name(to_string(result.config.cr_definition));
    for (const auto& [variant, pairs] : slice.pairs) {
      ScatterSpec scatter;
      scatter.title = fmt::format("{} vs {}, {} / {}", rating_name, variant.label(), subset, aggregation);
      scatter.x_label = rating_name;
      scatter.y_label = variant.label();
      for (const auto& p : pairs) {
        scatter.points.push_back({point_id(p.candidate), std::string(to_string(p.subset)), p.rating, p.score});
      }
      const std::string stem = fmt::format("scatter_{}", to_string(variant.metric));
      write_text_file(dir / (stem + ".json"), pretty(to_json(scatter)));
      write_text_file(dir / (stem + ".svg"), render_scatter_svg(scatter));
    }

    if (slice.cr_agreement) {
      ScatterSpec scatter;
      scatter.title = fmt::format("CR vs CRi, {} / {} (r={})", subset, aggregation,
                                  num(slice.cr_agreement->correlation.r));
      scatter.x_label = "CR";
      scatter.y_label = "CRi";
      for (const auto& row : slice.cr_agreement->rows) {
        std::string id = point_id(row.candidate);
        if (!row.evaluator_id.empty()) id += "@" + row.evaluator_id;
        scatter.points.push_back({id, std::string(to_string(row.subset)), row.cr, row.cri});
      }
      write_text_file(dir / "cr_vs_cri.json", pretty(to_json(scatter)));
      write_text_file(dir / "cr_vs_cri.svg", render_scatter_svg(scatter));
    }

    std::vector<Json> recs;
    for (const auto& r : slice.recommendations) {
      recs.push_back(Json{{"question", r.question},
                          {"chosen", r.chosen.label()},
                          {"runner_up", r.runner_up.label()},
                          {"r_chosen", r.r_chosen},
                          {"r_runner_up", r.r_runner_up},
                          {"p", r.p},
                          {"significant", r.significant}});
    }
    write_text_file(dir / "recommendations.jsonl", jsonl(recs));

    summary << fmt::format("## {} / {}\n\n", subset, aggregation);
    summary << table2_markdown(t2) << '\n';
    if (slice.cr_agreement) {
      const auto& c = slice.cr_agreement->correlation;
      summary << fmt::format("CR vs CRi: r={} over n={} (p={:.3g})\n\n", num(c.r), c.n, c.p);
    }
    summary << "Recommendations:\n\n" << recommendations_markdown(slice.recommendations) << '\n';
  }
  write_text_file(out_dir / "report.md", summary.str());
}

}  // namespace sstmeta
