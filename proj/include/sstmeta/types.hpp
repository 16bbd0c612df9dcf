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

#include <compare>
#include <string>
#include <string_view>

namespace sstmeta {

enum class Subset { Common, NonNative };

enum class Latency { Low, Medium, High };

std::string_view to_string(Subset subset);
std::string_view to_string(Latency latency);
Subset parse_subset(std::string_view text);    // throws ParseError
Latency parse_latency(std::string_view text);  // throws ParseError

// Identifies one candidate translation of one document: a system in one
// latency regime.
struct CandidateKey {
  std::string doc_id;
  std::string system_id;
  Latency latency = Latency::Low;

  auto operator<=>(const CandidateKey&) const = default;
  bool operator==(const CandidateKey&) const = default;

  std::string str() const;
};

}  // namespace sstmeta
