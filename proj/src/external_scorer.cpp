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

#include "sstmeta/external_scorer.hpp"

#include <sys/wait.h>
#include <unistd.h>

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <set>
#include <unordered_set>

#include <fmt/format.h>
#include <openssl/evp.h>
#include <spdlog/spdlog.h>

#include "sstmeta/error.hpp"
#include "sstmeta/jsonl.hpp"
#include "sstmeta/text.hpp"

namespace sstmeta {

std::string sha256_hex(std::string_view data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw Error("SHA-256 computation failed");
  }
  std::string hex;
  hex.reserve(2 * len);
  for (unsigned int i = 0; i < len; ++i) hex += fmt::format("{:02x}", digest[i]);
  return hex;
}

ScorerSpec parse_scorer_spec(std::string_view text) {
  const std::size_t eq = text.find('=');
  if (eq == std::string_view::npos || eq == 0 || trim(text.substr(eq + 1)).empty()) {
    throw ParseError(fmt::format("scorer spec '{}' is not of the form name=command", text));
  }
  return {std::string(trim(text.substr(0, eq))), std::string(trim(text.substr(eq + 1)))};
}

namespace {

std::string sanitize(std::string_view name) {
  std::string out;
  for (char c : name) {
    const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
                    c == '-' || c == '_';
    out.push_back(ok ? c : '_');
  }
  return out;
}

// Temporary file removed on scope exit.
class TempFile {
 public:
  TempFile() {
    auto pattern = (std::filesystem::temp_directory_path() / "sstmeta-XXXXXX").string();
    const int fd = ::mkstemp(pattern.data());
    if (fd < 0) throw Error("cannot create temporary file");
    ::close(fd);
    path_ = pattern;
  }
  ~TempFile() {
    std::error_code ec;
    std::filesystem::remove(path_, ec);
  }
  TempFile(const TempFile&) = delete;
  TempFile& operator=(const TempFile&) = delete;

  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

}  // namespace

ExternalScorer::ExternalScorer(ScorerSpec spec, std::filesystem::path cache_dir)
    : spec_(std::move(spec)), identity_(spec_.name + '\x1f' + spec_.command) {
  if (!cache_dir.empty()) {
    cache_file_ = cache_dir / fmt::format("{}-{}.jsonl", sanitize(spec_.name),
                                          sha256_hex(identity_).substr(0, 12));
    load_cache();
  }
}

std::string ExternalScorer::cache_key(const ScoreRequest& req) const {
  Json rec{{"hyp", req.hypothesis}, {"ref", req.reference}};
  if (req.source) rec["src"] = *req.source;
  return sha256_hex(identity_ + '\n' + rec.dump());
}

void ExternalScorer::load_cache() {
  std::error_code ec;
  if (!std::filesystem::exists(cache_file_, ec)) return;
  std::ifstream in(cache_file_, std::ios::binary);
  std::string line;
  std::size_t bad = 0;
  while (std::getline(in, line)) {
    try {
      const Json rec = Json::parse(line);
      const auto& key = rec.at("key").get_ref<const std::string&>();
      const double score = rec.at("score").get<double>();
      if (key.size() != 64 || !std::isfinite(score)) throw Error("bad entry");
      cache_[key] = score;
    } catch (const std::exception&) {
      ++bad;
    }
  }
  if (bad > 0) {
    spdlog::warn("{}: ignored {} corrupt cache entries; they will be recomputed",
                 cache_file_.string(), bad);
  }
}

std::vector<ScoreResult> ExternalScorer::score(std::span<const ScoreRequest> batch) {
  std::vector<std::string> keys;
  keys.reserve(batch.size());
  {
    std::unordered_set<std::string_view> ids;
    for (const auto& req : batch) {
      if (!ids.insert(req.id).second) {
        throw Error(fmt::format("scorer {}: duplicate id '{}' in batch", spec_.name, req.id));
      }
      keys.push_back(cache_key(req));
    }
  }

  auto lookup_missing = [&] {
    std::vector<std::size_t> missing;
    std::unordered_set<std::string_view> seen;
    std::shared_lock lock(cache_mutex_);
    for (std::size_t i = 0; i < batch.size(); ++i) {
      if (!cache_.contains(keys[i]) && seen.insert(keys[i]).second) missing.push_back(i);
    }
    return missing;
  };

  if (auto missing = lookup_missing(); !missing.empty()) {
    std::lock_guard run_lock(run_mutex_);
    // Another caller may have filled the gaps while we waited.
    missing = lookup_missing();
    if (!missing.empty()) {
      std::vector<const ScoreRequest*> requests;
      requests.reserve(missing.size());
      for (std::size_t i : missing) requests.push_back(&batch[i]);
      const std::vector<double> scores = run(requests);

      std::vector<std::pair<std::string, double>> fresh;
      fresh.reserve(missing.size());
      for (std::size_t k = 0; k < missing.size(); ++k) fresh.emplace_back(keys[missing[k]], scores[k]);
      {
        std::unique_lock lock(cache_mutex_);
        for (const auto& [key, score] : fresh) cache_[key] = score;
      }
      if (!cache_file_.empty()) append_to_cache(fresh);
    }
  }

  std::vector<ScoreResult> results;
  results.reserve(batch.size());
  std::shared_lock lock(cache_mutex_);
  for (std::size_t i = 0; i < batch.size(); ++i) results.push_back({batch[i].id, cache_.at(keys[i])});
  return results;
}

std::vector<double> ExternalScorer::run(std::span<const ScoreRequest* const> requests) {
  TempFile input;
  TempFile output;
  {
    std::ofstream in(input.path(), std::ios::binary);
    for (const ScoreRequest* req : requests) {
      Json rec{{"id", req->id}, {"hyp", req->hypothesis}, {"ref", req->reference}};
      if (req->source) rec["src"] = *req->source;
      write_jsonl_record(in, rec);
    }
    if (!in) throw Error(fmt::format("scorer {}: cannot write input batch", spec_.name));
  }

  ++invocations_;
  const std::string shell = fmt::format("({}) < '{}' > '{}'", spec_.command,
                                        input.path().string(), output.path().string());
  const int status = std::system(shell.c_str());
  if (status == -1 || !WIFEXITED(status) || WEXITSTATUS(status) != 0) {
    throw Error(fmt::format("scorer {} failed (command '{}', status {})", spec_.name,
                            spec_.command, WIFEXITED(status) ? WEXITSTATUS(status) : status));
  }

  std::unordered_map<std::string, double> by_id;
  parse_jsonl(read_text_file(output.path()), fmt::format("scorer {} output", spec_.name),
              [&](const Json& rec, const RecordLocation& where) {
                const double score = get_number(rec, "score", where);
                if (!std::isfinite(score)) {
                  throw Error(fmt::format("{}: non-finite score", where.str()));
                }
                by_id[get_string(rec, "id", where)] = score;
              });

  std::vector<double> scores;
  std::vector<std::string> missing;
  scores.reserve(requests.size());
  for (const ScoreRequest* req : requests) {
    auto it = by_id.find(req->id);
    if (it == by_id.end()) {
      missing.push_back(req->id);
      scores.push_back(0.0);
    } else {
      scores.push_back(it->second);
    }
  }
  if (!missing.empty()) {
    throw Error(fmt::format("scorer {} returned no score for {} id(s): {}", spec_.name,
                            missing.size(), join(missing, ", ")));
  }
  return scores;
}

void ExternalScorer::append_to_cache(std::span<const std::pair<std::string, double>> entries) {
  std::filesystem::create_directories(cache_file_.parent_path());
  std::string buffer;
  for (const auto& [key, score] : entries) {
    buffer += Json{{"key", key}, {"score", score}}.dump();
    buffer.push_back('\n');
  }
  try {
    append_durable(cache_file_, buffer);
  } catch (const Error& e) {
    spdlog::warn("{}; affected entries will be recomputed", e.what());
  }
}

}  // namespace sstmeta
