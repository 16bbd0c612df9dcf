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

#include "sstmeta/jsonl.hpp"

#include <fcntl.h>
#include <sys/file.h>
#include <sys/stat.h>
#include <unistd.h>

#include <fstream>
#include <ostream>
#include <sstream>

#include <fmt/format.h>

#include "sstmeta/error.hpp"

namespace sstmeta {

std::string RecordLocation::str() const {
  return line == 0 ? source : fmt::format("{}:{}", source, line);
}

void parse_jsonl(std::string_view text, std::string_view source,
                 const std::function<void(const Json&, const RecordLocation&)>& fn) {
  RecordLocation where{std::string(source), 0};
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++where.line;
    if (line.find_first_not_of(" \t\r") == std::string_view::npos) continue;
    Json rec;
    try {
      rec = Json::parse(line);
    } catch (const Json::parse_error& e) {
      throw ParseError(fmt::format("{}: invalid JSON: {}", where.str(), e.what()));
    }
    if (!rec.is_object()) {
      throw ParseError(fmt::format("{}: expected a JSON object", where.str()));
    }
    fn(rec, where);
  }
}

void read_jsonl(const std::filesystem::path& path,
                const std::function<void(const Json&, const RecordLocation&)>& fn) {
  parse_jsonl(read_text_file(path), path.string(), fn);
}

namespace {

const Json& require(const Json& rec, std::string_view field, const RecordLocation& where) {
  auto it = rec.find(field);
  if (it == rec.end() || it->is_null()) {
    throw ParseError(fmt::format("{}: missing field '{}'", where.str(), field));
  }
  return *it;
}

}  // namespace

std::string get_string(const Json& rec, std::string_view field, const RecordLocation& where) {
  const Json& v = require(rec, field, where);
  if (!v.is_string()) {
    throw ParseError(fmt::format("{}: field '{}' must be a string", where.str(), field));
  }
  return v.get<std::string>();
}

std::int64_t get_int(const Json& rec, std::string_view field, const RecordLocation& where) {
  const Json& v = require(rec, field, where);
  if (!v.is_number_integer()) {
    throw ParseError(fmt::format("{}: field '{}' must be an integer", where.str(), field));
  }
  return v.get<std::int64_t>();
}

double get_number(const Json& rec, std::string_view field, const RecordLocation& where) {
  const Json& v = require(rec, field, where);
  if (!v.is_number()) {
    throw ParseError(fmt::format("{}: field '{}' must be a number", where.str(), field));
  }
  return v.get<double>();
}

const Json& get_array(const Json& rec, std::string_view field, const RecordLocation& where) {
  const Json& v = require(rec, field, where);
  if (!v.is_array()) {
    throw ParseError(fmt::format("{}: field '{}' must be an array", where.str(), field));
  }
  return v;
}

bool has_field(const Json& rec, std::string_view field) {
  auto it = rec.find(field);
  return it != rec.end() && !it->is_null();
}

void write_jsonl_record(std::ostream& out, const Json& rec) {
  out << rec.dump(-1, ' ', false, Json::error_handler_t::replace) << '\n';
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(fmt::format("cannot open '{}'", path.string()));
  std::ostringstream buf;
  buf << in.rdbuf();
  return std::move(buf).str();
}

void write_text_file(const std::filesystem::path& path, std::string_view contents) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(fmt::format("cannot write '{}'", tmp.string()));
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    if (!out) throw Error(fmt::format("write to '{}' failed", tmp.string()));
  }
  std::filesystem::rename(tmp, path);
}

void append_durable(const std::filesystem::path& path, std::string_view lines) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  const int fd = ::open(path.c_str(), O_RDWR | O_CREAT | O_APPEND, 0644);
  if (fd < 0) throw Error(fmt::format("cannot open '{}' for appending", path.string()));
  ::flock(fd, LOCK_EX);
  std::string buffer;
  struct stat st {};
  if (::fstat(fd, &st) == 0 && st.st_size > 0) {
    char last = '\n';
    if (::pread(fd, &last, 1, st.st_size - 1) == 1 && last != '\n') buffer.push_back('\n');
  }
  buffer.append(lines);
  std::size_t written = 0;
  while (written < buffer.size()) {
    const ssize_t n = ::write(fd, buffer.data() + written, buffer.size() - written);
    if (n <= 0) break;
    written += static_cast<std::size_t>(n);
  }
  const bool synced = ::fsync(fd) == 0;
  ::flock(fd, LOCK_UN);
  ::close(fd);
  if (written != buffer.size() || !synced) {
    throw Error(fmt::format("short write to '{}'", path.string()));
  }
}

std::vector<std::string> read_complete_lines(const std::filesystem::path& path) {
  std::vector<std::string> out;
  if (!std::filesystem::exists(path)) return out;
  const std::string text = read_text_file(path);
  std::size_t begin = 0;
  for (std::size_t nl = text.find('\n'); nl != std::string::npos; nl = text.find('\n', begin)) {
    out.emplace_back(text.substr(begin, nl - begin));
    begin = nl + 1;
  }
  return out;
}

}  // namespace sstmeta
