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

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "sstmeta/ratings.hpp"
#include "sstmeta/types.hpp"

namespace sstmeta {

struct SourceSegment {
  int index = 0;
  std::string text;
  std::int64_t start_ms = 0;
  std::int64_t end_ms = 0;
};

struct Document {
  std::string doc_id;
  Subset subset = Subset::Common;
  std::vector<SourceSegment> segments;  // indices 0..n-1 in order

  std::vector<std::string> source_texts() const;
  std::int64_t duration_ms() const;
};

// A caption update at `t_ms` appending `text` to the displayed subtitle.
struct CaptionEvent {
  std::int64_t t_ms = 0;
  std::string text;
};

struct CandidateSegment {
  int index = 0;
  std::string text;
  std::vector<CaptionEvent> events;
};

struct CandidateOutput {
  std::string system_id;
  Latency latency = Latency::Low;
  std::string doc_id;
  std::vector<CandidateSegment> segments;  // aligned 1:1 with the document

  CandidateKey key() const { return {doc_id, system_id, latency}; }
  std::vector<std::string> texts() const;
};

// Translation sentences are aligned with the source segments; interpreting
// chunks follow the interpreter's own segmentation.
struct DocumentReferences {
  std::vector<std::string> translation;
  std::vector<std::string> interpreting;
};

// Per-system preprocessing. Tokenized output is flagged manually.
struct SystemOptions {
  bool detokenize = false;
  std::string language = "de";
};

struct CorpusPaths {
  std::filesystem::path documents;
  std::filesystem::path candidates;
  std::filesystem::path ref_translation;
  std::filesystem::path ref_interpreting;
  std::optional<std::filesystem::path> ratings;
  std::map<std::string, SystemOptions> systems;
};

// Immutable, cross-referenced view of all inputs. Every candidate and rating
// session refers to a known document. Containers are ordered by key.
class Corpus {
 public:
  const std::map<std::string, Document>& documents() const { return documents_; }
  const std::map<CandidateKey, CandidateOutput>& candidates() const { return candidates_; }
  const std::map<std::string, DocumentReferences>& references() const { return references_; }
  const std::vector<RatingSession>& sessions() const { return sessions_; }

  const Document& document(const std::string& doc_id) const;
  const DocumentReferences& references(const std::string& doc_id) const;
  const CandidateOutput* find_candidate(const CandidateKey& key) const;

  std::vector<std::string> systems() const;

 private:
  friend Corpus load_corpus(const CorpusPaths& paths);
  friend class CorpusBuilder;

  std::map<std::string, Document> documents_;
  std::map<CandidateKey, CandidateOutput> candidates_;
  std::map<std::string, DocumentReferences> references_;
  std::vector<RatingSession> sessions_;
};

// Reads and validates all corpus files. Candidate text is preprocessed: the
// detokenizer runs first for flagged systems, then terminal "</s>" markers
// are removed from every segment. Throws ParseError on malformed records,
// references to unknown documents, duplicates and incomplete coverage.
Corpus load_corpus(const CorpusPaths& paths);

// Assembles a corpus from in-memory parts with the same validation as
// load_corpus. Candidate text is used as given.
class CorpusBuilder {
 public:
  CorpusBuilder& add_document(Document doc);
  CorpusBuilder& add_candidate(CandidateOutput candidate);
  CorpusBuilder& add_references(const std::string& doc_id, DocumentReferences refs);
  CorpusBuilder& add_session(RatingSession session);
  Corpus build() &&;

 private:
  Corpus corpus_;
};

}  // namespace sstmeta
