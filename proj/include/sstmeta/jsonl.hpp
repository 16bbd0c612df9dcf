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
#include <functional>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace sstmeta {

using Json = nlohmann::json;

// Where a record came from, for error messages ("file:line").
struct RecordLocation {
  std::string source;
  std::size_t line = 0;

  std::string str() const;
};

// Calls `fn` for every non-blank line of a line-delimited JSON file. Throws
// ParseError for unreadable files, invalid JSON and non-object records.
void read_jsonl(const std::filesystem::path& path,
                const std::function<void(const Json&, const RecordLocation&)>& fn);

// Same for an in-memory buffer; `source` is used in error messages.
void parse_jsonl(std::string_view text, std::string_view source,
                 const std::function<void(const Json&, const RecordLocation&)>& fn);

// Field accessors. Each throws ParseError naming the location and field when
// the field is missing or has the wrong type.
std::string get_string(const Json& rec, std::string_view field, const RecordLocation& where);
std::int64_t get_int(const Json& rec, std::string_view field, const RecordLocation& where);
double get_number(const Json& rec, std::string_view field, const RecordLocation& where);
const Json& get_array(const Json& rec, std::string_view field, const RecordLocation& where);
bool has_field(const Json& rec, std::string_view field);

// One compact record per line.
void write_jsonl_record(std::ostream& out, const Json& rec);

std::string read_text_file(const std::filesystem::path& path);

// Writes to a sibling temporary file and renames it into place.
void write_text_file(const std::filesystem::path& path, std::string_view contents);

// Appends complete lines under an exclusive lock and syncs them to disk. A
// partial last line left by an earlier crash is terminated first so it stays
// a single unparsable line. Throws Error on failure.
void append_durable(const std::filesystem::path& path, std::string_view lines);

// Lines of a file that end in a newline; a trailing partial line is ignored.
// A missing file yields no lines.
std::vector<std::string> read_complete_lines(const std::filesystem::path& path);

}  // namespace sstmeta
