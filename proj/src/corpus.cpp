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

#include "sstmeta/corpus.hpp"

#include <algorithm>
#include <set>

#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include "sstmeta/detokenizer.hpp"
#include "sstmeta/error.hpp"
#include "sstmeta/text.hpp"

namespace sstmeta {

std::string_view to_string(Subset subset) {
  return subset == Subset::Common ? "Common" : "NonNative";
}

std::string_view to_string(Latency latency) {
  switch (latency) {
    case Latency::Low: return "low";
    case Latency::Medium: return "medium";
    case Latency::High: return "high";
  }
  return "low";
}

Subset parse_subset(std::string_view text) {
  if (text == "Common") return Subset::Common;
  if (text == "NonNative" || text == "Non-Native") return Subset::NonNative;
  throw ParseError(fmt::format("unknown subset '{}' (expected Common or NonNative)", text));
}

Latency parse_latency(std::string_view text) {
  if (text == "low") return Latency::Low;
  if (text == "medium") return Latency::Medium;
  if (text == "high") return Latency::High;
  throw ParseError(fmt::format("unknown latency '{}' (expected low, medium or high)", text));
}

std::string CandidateKey::str() const {
  return fmt::format("{}/{}/{}", doc_id, system_id, to_string(latency));
}

std::vector<std::string> Document::source_texts() const {
  std::vector<std::string> out;
  out.reserve(segments.size());
  for (const auto& s : segments) out.push_back(s.text);
  return out;
}

std::int64_t Document::duration_ms() const {
  std::int64_t end = 0;
  for (const auto& s : segments) end = std::max(end, s.end_ms);
  return end;
}

std::vector<std::string> CandidateOutput::texts() const {
  std::vector<std::string> out;
  out.reserve(segments.size());
  for (const auto& s : segments) out.push_back(s.text);
  return out;
}

const Document& Corpus::document(const std::string& doc_id) const {
  auto it = documents_.find(doc_id);
  if (it == documents_.end()) throw Error(fmt::format("unknown document '{}'", doc_id));
  return it->second;
}

const DocumentReferences& Corpus::references(const std::string& doc_id) const {
  auto it = references_.find(doc_id);
  if (it == references_.end()) throw Error(fmt::format("no references for document '{}'", doc_id));
  return it->second;
}

const CandidateOutput* Corpus::find_candidate(const CandidateKey& key) const {
  auto it = candidates_.find(key);
  return it == candidates_.end() ? nullptr : &it->second;
}

std::vector<std::string> Corpus::systems() const {
  std::set<std::string> ids;
  for (const auto& [key, cand] : candidates_) ids.insert(key.system_id);
  return {ids.begin(), ids.end()};
}

// ---------------------------------------------------------------------------

CorpusBuilder& CorpusBuilder::add_document(Document doc) {
  const std::string id = doc.doc_id;
  if (!corpus_.documents_.emplace(id, std::move(doc)).second) {
    throw ParseError(fmt::format("duplicate document '{}'", id));
  }
  return *this;
}

CorpusBuilder& CorpusBuilder::add_candidate(CandidateOutput candidate) {
  const CandidateKey key = candidate.key();
  if (!corpus_.candidates_.emplace(key, std::move(candidate)).second) {
    throw ParseError(fmt::format("duplicate candidate {}", key.str()));
  }
  return *this;
}

CorpusBuilder& CorpusBuilder::add_references(const std::string& doc_id, DocumentReferences refs) {
  if (!corpus_.references_.emplace(doc_id, std::move(refs)).second) {
    throw ParseError(fmt::format("duplicate references for document '{}'", doc_id));
  }
  return *this;
}

CorpusBuilder& CorpusBuilder::add_session(RatingSession session) {
  corpus_.sessions_.push_back(std::move(session));
  return *this;
}

Corpus CorpusBuilder::build() && {
  for (const auto& [id, doc] : corpus_.documents_) {
    if (doc.segments.empty()) throw ParseError(fmt::format("document '{}' has no segments", id));
    for (std::size_t i = 0; i < doc.segments.size(); ++i) {
      const auto& seg = doc.segments[i];
      if (seg.index != static_cast<int>(i)) {
        throw ParseError(fmt::format("document '{}': segment indices must run 0..{}", id,
                                     doc.segments.size() - 1));
      }
      if (seg.start_ms > seg.end_ms) {
        throw ParseError(fmt::format("document '{}' segment {}: start_ms > end_ms", id, i));
      }
      if (trim(seg.text).empty()) {
        throw ParseError(fmt::format("document '{}' segment {}: empty text", id, i));
      }
    }
    auto refs = corpus_.references_.find(id);
    if (refs == corpus_.references_.end()) {
      throw ParseError(fmt::format("document '{}' has no references", id));
    }
    if (refs->second.translation.size() != doc.segments.size()) {
      throw ParseError(fmt::format("document '{}': {} translation sentences for {} segments", id,
                                   refs->second.translation.size(), doc.segments.size()));
    }
    if (refs->second.interpreting.empty()) {
      throw ParseError(fmt::format("document '{}' has no interpreting chunks", id));
    }
  }
  for (const auto& [id, refs] : corpus_.references_) {
    if (!corpus_.documents_.contains(id)) {
      throw ParseError(fmt::format("references for unknown document '{}'", id));
    }
  }
  for (const auto& [key, cand] : corpus_.candidates_) {
    auto doc = corpus_.documents_.find(key.doc_id);
    if (doc == corpus_.documents_.end()) {
      throw ParseError(fmt::format("candidate {} refers to unknown document '{}'", key.str(),
                                   key.doc_id));
    }
    if (cand.segments.size() != doc->second.segments.size()) {
      throw ParseError(fmt::format("candidate {} covers {} of {} segments", key.str(),
                                   cand.segments.size(), doc->second.segments.size()));
    }
    for (std::size_t i = 0; i < cand.segments.size(); ++i) {
      if (cand.segments[i].index != static_cast<int>(i)) {
        throw ParseError(fmt::format("candidate {}: segment indices must match the document",
                                     key.str()));
      }
    }
  }
  for (const auto& s : corpus_.sessions_) {
    if (!corpus_.documents_.contains(s.doc_id)) {
      throw ParseError(fmt::format("rating session by '{}' refers to unknown document '{}'",
                                   s.evaluator_id, s.doc_id));
    }
  }
  return std::move(corpus_);
}

// ---------------------------------------------------------------------------

namespace {

template <typename T>
void put_indexed(std::map<int, T>& slots, int index, T value, const RecordLocation& where,
                 std::string_view what) {
  if (index < 0) throw ParseError(fmt::format("{}: negative {}", where.str(), what));
  if (!slots.emplace(index, std::move(value)).second) {
    throw ParseError(fmt::format("{}: duplicate {} {}", where.str(), what, index));
  }
}

template <typename T>
std::vector<T> contiguous(std::map<int, T>&& slots, std::string_view owner, std::string_view what) {
  std::vector<T> out;
  out.reserve(slots.size());
  int expected = 0;
  for (auto& [index, value] : slots) {
    if (index != expected) {
      throw ParseError(fmt::format("{}: missing {} {}", owner, what, expected));
    }
    out.push_back(std::move(value));
    ++expected;
  }
  return out;
}

void require_known_doc(const std::map<std::string, Document>& docs, const std::string& doc_id,
                       const RecordLocation& where) {
  if (!docs.contains(doc_id)) {
    throw ParseError(fmt::format("{}: unknown doc_id '{}'", where.str(), doc_id));
  }
}

}  // namespace

Corpus load_corpus(const CorpusPaths& paths) {
  // Documents: one record per source segment.
  std::map<std::string, std::pair<Subset, std::map<int, SourceSegment>>> doc_parts;
  read_jsonl(paths.documents, [&](const Json& rec, const RecordLocation& where) {
    const std::string doc_id = get_string(rec, "doc_id", where);
    Subset subset;
    try {
      subset = parse_subset(get_string(rec, "subset", where));
    } catch (const ParseError& e) {
      throw ParseError(fmt::format("{}: {}", where.str(), e.what()));
    }
    SourceSegment seg;
    seg.index = static_cast<int>(get_int(rec, "index", where));
    seg.text = get_string(rec, "text", where);
    seg.start_ms = get_int(rec, "start_ms", where);
    seg.end_ms = get_int(rec, "end_ms", where);
    if (seg.start_ms > seg.end_ms) {
      throw ParseError(fmt::format("{}: start_ms > end_ms", where.str()));
    }
    if (trim(seg.text).empty()) throw ParseError(fmt::format("{}: empty segment text", where.str()));
    auto [it, fresh] = doc_parts.try_emplace(doc_id, subset, std::map<int, SourceSegment>{});
    if (!fresh && it->second.first != subset) {
      throw ParseError(fmt::format("{}: document '{}' assigned to two subsets", where.str(), doc_id));
    }
    put_indexed(it->second.second, seg.index, std::move(seg), where, "segment");
  });

  std::map<std::string, Document> documents;
  for (auto& [doc_id, parts] : doc_parts) {
    Document doc;
    doc.doc_id = doc_id;
    doc.subset = parts.first;
    doc.segments = contiguous(std::move(parts.second), fmt::format("document '{}'", doc_id), "segment");
    documents.emplace(doc_id, std::move(doc));
  }

  // Candidates: one record per (system, latency, doc, segment).
  std::map<CandidateKey, std::map<int, CandidateSegment>> cand_parts;
  read_jsonl(paths.candidates, [&](const Json& rec, const RecordLocation& where) {
    CandidateKey key;
    key.system_id = get_string(rec, "system", where);
    try {
      key.latency = parse_latency(get_string(rec, "latency", where));
    } catch (const ParseError& e) {
      throw ParseError(fmt::format("{}: {}", where.str(), e.what()));
    }
    key.doc_id = get_string(rec, "doc_id", where);
    require_known_doc(documents, key.doc_id, where);

    CandidateSegment seg;
    seg.index = static_cast<int>(get_int(rec, "index", where));
    std::string text = get_string(rec, "text", where);
    auto opts = paths.systems.find(key.system_id);
    if (opts != paths.systems.end() && opts->second.detokenize) {
      text = detokenize(text, opts->second.language);
    }
    seg.text = strip_terminal_eos(text);
    if (has_field(rec, "events")) {
      std::int64_t last = 0;
      for (const Json& ev : get_array(rec, "events", where)) {
        CaptionEvent e{get_int(ev, "t_ms", where), get_string(ev, "text", where)};
        if (e.t_ms < 0 || e.t_ms < last) {
          throw ParseError(fmt::format("{}: caption event times must be nondecreasing and >= 0",
                                       where.str()));
        }
        last = e.t_ms;
        seg.events.push_back(std::move(e));
      }
    }
    auto& slots = cand_parts[key];
    if (slots.contains(seg.index)) {
      throw ParseError(fmt::format("{}: duplicate candidate segment {} for {}", where.str(),
                                   seg.index, key.str()));
    }
    put_indexed(slots, seg.index, std::move(seg), where, "segment");
  });

  std::map<std::string, std::map<int, std::string>> transl_parts;
  read_jsonl(paths.ref_translation, [&](const Json& rec, const RecordLocation& where) {
    const std::string doc_id = get_string(rec, "doc_id", where);
    require_known_doc(documents, doc_id, where);
    put_indexed(transl_parts[doc_id], static_cast<int>(get_int(rec, "index", where)),
                get_string(rec, "text", where), where, "translation sentence");
  });

  std::map<std::string, std::map<int, std::string>> intp_parts;
  read_jsonl(paths.ref_interpreting, [&](const Json& rec, const RecordLocation& where) {
    const std::string doc_id = get_string(rec, "doc_id", where);
    require_known_doc(documents, doc_id, where);
    put_indexed(intp_parts[doc_id], static_cast<int>(get_int(rec, "chunk", where)),
                get_string(rec, "text", where), where, "interpreting chunk");
  });

  CorpusBuilder builder;
  for (auto& [key, parts] : cand_parts) {
    CandidateOutput cand;
    cand.system_id = key.system_id;
    cand.latency = key.latency;
    cand.doc_id = key.doc_id;
    cand.segments = contiguous(std::move(parts), fmt::format("candidate {}", key.str()), "segment");
    builder.add_candidate(std::move(cand));
  }
  for (const auto& [doc_id, doc] : documents) {
    DocumentReferences refs;
    if (auto it = transl_parts.find(doc_id); it != transl_parts.end()) {
      refs.translation = contiguous(std::move(it->second),
                                    fmt::format("translation reference of '{}'", doc_id), "sentence");
    }
    if (auto it = intp_parts.find(doc_id); it != intp_parts.end()) {
      refs.interpreting = contiguous(std::move(it->second),
                                     fmt::format("interpreting reference of '{}'", doc_id), "chunk");
    }
    builder.add_references(doc_id, std::move(refs));
  }
  if (paths.ratings) {
    std::size_t dropped_total = 0;
    read_jsonl(*paths.ratings, [&](const Json& rec, const RecordLocation& where) {
      std::size_t dropped = 0;
      RatingSession session = parse_rating_session(rec, where, &dropped);
      dropped_total += dropped;
      require_known_doc(documents, session.doc_id, where);
      builder.add_session(std::move(session));
    });
    if (dropped_total > 0) {
      spdlog::warn("{}: dropped {} clicks sharing a timestamp with a later click",
                   paths.ratings->string(), dropped_total);
    }
  }
  for (auto& [doc_id, doc] : documents) builder.add_document(std::move(doc));
  return std::move(builder).build();
}

}  // namespace sstmeta
