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

#include "sstmeta/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <boost/math/special_functions/beta.hpp>
#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include "sstmeta/error.hpp"

namespace sstmeta {

namespace {

bool is_constant(std::span<const double> v) {
  return std::all_of(v.begin(), v.end(), [&](double x) { return x == v.front(); });
}

double mean(std::span<const double> v) {
  double sum = 0.0;
  for (double x : v) sum += x;
  return sum / static_cast<double>(v.size());
}

}  // namespace

CorrelationResult pearson(std::span<const double> x, std::span<const double> y,
                          std::string x_label, std::string y_label) {
  if (x.size() != y.size()) {
    throw Error(fmt::format("pearson: length mismatch ({} vs {})", x.size(), y.size()));
  }
  if (x.size() < 3) throw Error(fmt::format("pearson: need at least 3 pairs, got {}", x.size()));
  if (is_constant(x) || is_constant(y)) {
    throw Error(fmt::format("pearson({}, {}): zero variance", x_label, y_label));
  }
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!std::isfinite(x[i]) || !std::isfinite(y[i])) throw Error("pearson: non-finite input");
  }
  const double mx = mean(x);
  const double my = mean(y);
  double sxx = 0.0, syy = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mx;
    const double dy = y[i] - my;
    sxx += dx * dx;
    syy += dy * dy;
    sxy += dx * dy;
  }
  if (sxx <= 0.0 || syy <= 0.0) {
    throw Error(fmt::format("pearson({}, {}): zero variance", x_label, y_label));
  }
  CorrelationResult out;
  out.x_label = std::move(x_label);
  out.y_label = std::move(y_label);
  out.n = x.size();
  out.r = std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
  const double df = static_cast<double>(out.n - 2);
  if (std::abs(out.r) >= 1.0) {
    out.p = 0.0;
  } else {
    out.p = student_t_two_tailed_p(out.r * std::sqrt(df / (1.0 - out.r * out.r)), df);
  }
  return out;
}

double student_t_two_tailed_p(double t, double df) {
  if (!(df > 0.0)) throw Error("student t: degrees of freedom must be positive");
  if (std::isnan(t)) throw Error("student t: NaN statistic");
  if (std::isinf(t)) return 0.0;
  const double x = df / (df + t * t);
  return std::clamp(boost::math::ibeta(df / 2.0, 0.5, x), 0.0, 1.0);
}

double normal_two_tailed_p(double z) {
  if (std::isnan(z)) throw Error("normal: NaN statistic");
  return std::erfc(std::abs(z) / std::sqrt(2.0));
}

std::string_view to_string(SteigerMethod method) {
  return method == SteigerMethod::WilliamsT ? "williams" : "steiger-z";
}

SteigerMethod parse_steiger_method(std::string_view text) {
  if (text == "williams") return SteigerMethod::WilliamsT;
  if (text == "steiger-z") return SteigerMethod::SteigerZ;
  throw Error(fmt::format("unknown dependent-correlation method '{}' (williams, steiger-z)", text));
}

SteigerResult steiger_dependent(double r_jk, double r_jh, double r_kh, std::size_t n,
                                SteigerMethod method) {
  if (n < 4) throw Error(fmt::format("steiger: need n >= 4, got {}", n));
  for (double r : {r_jk, r_jh, r_kh}) {
    if (!(r >= -1.0 && r <= 1.0)) throw Error(fmt::format("steiger: correlation {} out of range", r));
  }
  constexpr double kTolerance = 1e-12;
  const double nn = static_cast<double>(n);
  const double det = 1.0 - r_jk * r_jk - r_jh * r_jh - r_kh * r_kh + 2.0 * r_jk * r_jh * r_kh;
  const double rbar = (r_jk + r_jh) / 2.0;
  SteigerResult out;
  if (det <= kTolerance) {
    spdlog::warn("steiger: degenerate correlation matrix (|R| = {:.3g}); reporting p = 1", det);
    out.degenerate = true;
    return out;
  }
  if (method == SteigerMethod::WilliamsT) {
    const double one_minus = 1.0 - r_kh;
    const double denom =
        2.0 * det * (nn - 1.0) / (nn - 3.0) + rbar * rbar * one_minus * one_minus * one_minus;
    out.statistic = (r_jk - r_jh) * std::sqrt((nn - 1.0) * (1.0 + r_kh) / denom);
    out.p = student_t_two_tailed_p(out.statistic, nn - 3.0);
  } else {
    if (std::abs(r_jk) >= 1.0 || std::abs(r_jh) >= 1.0) {
      out.degenerate = true;
      return out;
    }
    const double r2 = rbar * rbar;
    const double psi = r_kh * (1.0 - 2.0 * r2) - 0.5 * r2 * (1.0 - 2.0 * r2 - r_kh * r_kh);
    const double c = psi / ((1.0 - r2) * (1.0 - r2));
    out.statistic = (std::atanh(r_jk) - std::atanh(r_jh)) * std::sqrt(nn - 3.0) / std::sqrt(2.0 - 2.0 * c);
    out.p = normal_two_tailed_p(out.statistic);
  }
  return out;
}

std::vector<std::size_t> significance_clusters(const std::vector<std::vector<double>>& p,
                                               double threshold) {
  const std::size_t v = p.size();
  for (const auto& row : p) {
    if (row.size() != v) throw Error("significance_clusters: p matrix is not square");
  }
  std::vector<std::size_t> boundaries;
  for (std::size_t k = 1; k < v; ++k) {
    bool separated = true;
    for (std::size_t a = 0; a < k && separated; ++a) {
      for (std::size_t b = k; b < v; ++b) {
        if (!(p[a][b] < threshold)) {
          separated = false;
          break;
        }
      }
    }
    if (separated) boundaries.push_back(k);
  }
  return boundaries;
}

}  // namespace sstmeta
