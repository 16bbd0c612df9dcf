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

#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <regex>
#include <sstream>

namespace oracle {

namespace {

std::string replace_all(std::string s, const std::string& from, const std::string& to) {
  for (std::size_t pos = s.find(from); pos != std::string::npos; pos = s.find(from, pos + to.size())) {
    s.replace(pos, from.size(), to);
  }
  return s;
}

std::u32string utf32(const std::string& s) {
  std::u32string out;
  for (std::size_t i = 0; i < s.size();) {
    const unsigned char c = s[i];
    int len = c < 0x80 ? 1 : c < 0xE0 ? 2 : c < 0xF0 ? 3 : 4;
    char32_t cp = len == 1 ? c : len == 2 ? (c & 0x1F) : len == 3 ? (c & 0x0F) : (c & 0x07);
    for (int k = 1; k < len; ++k) cp = (cp << 6) | (static_cast<unsigned char>(s[i + k]) & 0x3F);
    out.push_back(cp);
    i += len;
  }
  return out;
}

using Ngrams = std::map<std::vector<std::string>, int>;

Ngrams ngrams(const std::vector<std::string>& w, std::size_t n) {
  Ngrams out;
  for (std::size_t i = 0; i + n <= w.size(); ++i) ++out[std::vector<std::string>(w.begin() + i, w.begin() + i + n)];
  return out;
}

}  // namespace

std::vector<std::string> split(const std::string& text) {
  std::istringstream in(text);
  std::vector<std::string> out;
  for (std::string w; in >> w;) out.push_back(w);
  return out;
}

std::string tokenize_13a(const std::string& input) {
  std::string line = replace_all(input, "<skipped>", "");
  line = replace_all(line, "-\n", "");
  line = replace_all(line, "\n", " ");
  if (line.find('&') != std::string::npos) {
    line = replace_all(line, "&quot;", "\"");
    line = replace_all(line, "&amp;", "&");
    line = replace_all(line, "&lt;", "<");
    line = replace_all(line, "&gt;", ">");
  }
  line = " " + line + " ";
  static const std::regex r1(R"(([\{-~\[-\` -&\(-\+:-@/]))");
  static const std::regex r2(R"(([^0-9])([\.,]))");
  static const std::regex r3(R"(([\.,])([^0-9]))");
  static const std::regex r4(R"(([0-9])(-))");
  line = std::regex_replace(line, r1, " $1 ");
  line = std::regex_replace(line, r2, "$1 $2 ");
  line = std::regex_replace(line, r3, " $1 $2");
  line = std::regex_replace(line, r4, "$1 $2 ");
  const auto words = split(line);
  std::string out;
  for (const auto& w : words) out += (out.empty() ? "" : " ") + w;
  return out;
}

double bleu(const std::vector<std::string>& hyps, const std::vector<std::vector<std::string>>& refs) {
  double sys_len = 0, ref_len = 0;
  double correct[4] = {0, 0, 0, 0}, total[4] = {0, 0, 0, 0};
  for (std::size_t s = 0; s < hyps.size(); ++s) {
    auto rstrip = [](std::string x) {
      while (!x.empty() && std::isspace(static_cast<unsigned char>(x.back()))) x.pop_back();
      return x;
    };
    const auto h = split(tokenize_13a(rstrip(hyps[s])));
    std::vector<std::vector<std::string>> rs;
    for (const auto& stream : refs) rs.push_back(split(tokenize_13a(rstrip(stream[s]))));
    // Closest reference length, shorter on ties.
    std::size_t best = rs[0].size();
    for (const auto& r : rs) {
      const long d = std::labs(static_cast<long>(r.size()) - static_cast<long>(h.size()));
      const long bd = std::labs(static_cast<long>(best) - static_cast<long>(h.size()));
      if (d < bd || (d == bd && r.size() < best)) best = r.size();
    }
    sys_len += h.size();
    ref_len += best;
    for (std::size_t n = 1; n <= 4; ++n) {
      const auto hn = ngrams(h, n);
      Ngrams maxref;
      for (const auto& r : rs) {
        for (const auto& [g, c] : ngrams(r, n)) maxref[g] = std::max(maxref[g], c);
      }
      for (const auto& [g, c] : hn) {
        total[n - 1] += c;
        auto it = maxref.find(g);
        if (it != maxref.end()) correct[n - 1] += std::min(c, it->second);
      }
    }
  }
  if (sys_len == 0) return 0.0;
  if (std::all_of(std::begin(correct), std::end(correct), [](double c) { return c == 0; })) return 0.0;
  double prec[4] = {0, 0, 0, 0};
  double smooth = 1.0;
  for (int n = 0; n < 4; ++n) {
    if (total[n] == 0) break;
    if (correct[n] == 0) {
      smooth *= 2;
      prec[n] = 100.0 / (smooth * total[n]);
    } else {
      prec[n] = 100.0 * correct[n] / total[n];
    }
  }
  double logsum = 0;
  for (double p : prec) logsum += p > 0 ? std::log(p) : -9999999999.0;
  const double bp = sys_len < ref_len ? std::exp(1.0 - ref_len / sys_len) : 1.0;
  return bp * std::exp(logsum / 4.0);
}

double chrf(const std::vector<std::string>& hyps, const std::vector<std::vector<std::string>>& refs) {
  constexpr int kOrders = 6;
  constexpr double kBeta = 2.0;
  double stats[kOrders][3] = {};
  auto strip = [](const std::string& s) {
    std::string out;
    for (const auto& w : split(s)) out += w;
    return utf32(out);
  };
  auto grams = [](const std::u32string& s, std::size_t n) {
    std::map<std::u32string, int> out;
    for (std::size_t i = 0; i + n <= s.size(); ++i) ++out[s.substr(i, n)];
    return out;
  };
  auto fscore = [&](const double st[kOrders][3]) {
    double p_sum = 0, r_sum = 0;
    int eff = 0;
    for (int n = 0; n < kOrders; ++n) {
      const double hyp = st[n][0], ref = st[n][1], match = st[n][2];
      if (hyp > 0 && ref > 0) {
        p_sum += match / hyp;
        r_sum += match / ref;
        ++eff;
      }
    }
    if (eff == 0) return 0.0;
    const double p = p_sum / eff, r = r_sum / eff;
    if (p + r == 0) return 0.0;
    return 100.0 * (1 + kBeta * kBeta) * p * r / (kBeta * kBeta * p + r);
  };
  for (std::size_t s = 0; s < hyps.size(); ++s) {
    const auto h = strip(hyps[s]);
    double best[kOrders][3] = {};
    double best_f = -1;
    for (const auto& stream : refs) {
      const auto r = strip(stream[s]);
      double cur[kOrders][3] = {};
      for (int n = 1; n <= kOrders; ++n) {
        const auto hg = grams(h, n), rg = grams(r, n);
        double hc = 0, rc = 0, m = 0;
        for (const auto& [g, c] : hg) hc += c;
        for (const auto& [g, c] : rg) rc += c;
        for (const auto& [g, c] : hg) {
          auto it = rg.find(g);
          if (it != rg.end()) m += std::min(c, it->second);
        }
        cur[n - 1][0] = rc > 0 ? hc : 0;
        cur[n - 1][1] = rc;
        cur[n - 1][2] = m;
      }
      const double f = fscore(cur);
      if (f > best_f) {
        best_f = f;
        std::copy(&cur[0][0], &cur[0][0] + kOrders * 3, &best[0][0]);
      }
    }
    for (int n = 0; n < kOrders; ++n) {
      for (int k = 0; k < 3; ++k) stats[n][k] += best[n][k];
    }
  }
  return fscore(stats);
}

std::size_t levenshtein(const std::vector<std::string>& a, const std::vector<std::string>& b) {
  std::vector<std::vector<std::size_t>> d(a.size() + 1, std::vector<std::size_t>(b.size() + 1));
  for (std::size_t i = 0; i <= a.size(); ++i) d[i][0] = i;
  for (std::size_t j = 0; j <= b.size(); ++j) d[0][j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    for (std::size_t j = 1; j <= b.size(); ++j) {
      d[i][j] = std::min({d[i - 1][j] + 1, d[i][j - 1] + 1, d[i - 1][j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1)});
    }
  }
  return d[a.size()][b.size()];
}

Partition best_partition(const std::vector<std::string>& hyp,
                         const std::vector<std::vector<std::string>>& refs) {
  Partition best;
  best.cost = static_cast<std::size_t>(-1);
  std::vector<std::size_t> ends;
  std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t k, std::size_t start) {
    if (k + 1 == refs.size()) {
      ends.push_back(hyp.size());
      std::size_t cost = 0;
      std::size_t begin = 0;
      for (std::size_t s = 0; s < refs.size(); ++s) {
        cost += levenshtein(std::vector<std::string>(hyp.begin() + begin, hyp.begin() + ends[s]), refs[s]);
        begin = ends[s];
      }
      // Enumeration is in lexicographic order, so strict < keeps the first.
      if (cost < best.cost) best = {ends, cost};
      ends.pop_back();
      return;
    }
    for (std::size_t e = start; e <= hyp.size(); ++e) {
      ends.push_back(e);
      rec(k + 1, e);
      ends.pop_back();
    }
  };
  rec(0, 0);
  return best;
}

double t_two_tailed_p(double t, double df) {
  const double c = std::exp(std::lgamma((df + 1) / 2) - std::lgamma(df / 2)) / std::sqrt(df * M_PI);
  auto f = [&](double x) { return c * std::pow(1 + x * x / df, -(df + 1) / 2); };
  const double a = 0, b = std::abs(t);
  const int n = 200000;
  const double h = (b - a) / n;
  double sum = f(a) + f(b);
  for (int i = 1; i < n; ++i) sum += f(a + i * h) * (i % 2 ? 4 : 2);
  const double central = sum * h / 3;
  return 1.0 - 2.0 * central;
}

}  // namespace oracle
