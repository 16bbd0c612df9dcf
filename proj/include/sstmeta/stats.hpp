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

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace sstmeta {

struct CorrelationResult {
  std::string x_label;
  std::string y_label;
  double r = 0.0;
  std::size_t n = 0;
  double p = 1.0;
};

// Sample Pearson correlation with a two-tailed Student-t p-value on n-2
// degrees of freedom. Requires n >= 3 and nonconstant inputs.
CorrelationResult pearson(std::span<const double> x, std::span<const double> y,
                          std::string x_label = "x", std::string y_label = "y");

// Two-tailed tail probability of Student's t with df degrees of freedom.
double student_t_two_tailed_p(double t, double df);
double normal_two_tailed_p(double z);

enum class SteigerMethod { WilliamsT, SteigerZ };
std::string_view to_string(SteigerMethod method);
SteigerMethod parse_steiger_method(std::string_view text);

struct SteigerResult {
  double statistic = 0.0;  // t (WilliamsT) or z (SteigerZ)
  double p = 1.0;
  bool degenerate = false;
};

// Tests r_jk == r_jh for two correlations sharing variable j, given the
// correlation r_kh between k and h over the same n observations.
SteigerResult steiger_dependent(double r_jk, double r_jh, double r_kh, std::size_t n,
                                SteigerMethod method = SteigerMethod::WilliamsT);

struct PairwiseComparison {
  std::string variant_a;
  std::string variant_b;
  double r_a = 0.0;
  double r_b = 0.0;
  double r_ab = 0.0;
  std::size_t n = 0;
  double t_stat = 0.0;
  double p = 1.0;
};

// Boundaries (1-based count of items above the line) between groups of an
// ordered list where every item above differs from every item below, i.e.
// p[a][b] < threshold for all a < k <= b (0-based a, b).
std::vector<std::size_t> significance_clusters(const std::vector<std::vector<double>>& p,
                                               double threshold);

}  // namespace sstmeta
