// Copyright 2026 The qgd Authors
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

/**
 * @file registry.hpp
 * @brief Best known CZ counts and depths for CCZ and CCCZ on small connectivities.
 */
#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace qgd {

struct KnownRecord {
  std::string_view target;
  std::string_view connectivity;
  int cz_count;
  std::optional<int> cz_depth;  // nullopt: not reported
  std::string_view source;
};

inline std::span<const KnownRecord> known_records() {
  static const KnownRecord records[] = {
      {"ccz", "triangle", 6, 6, "textbook decomposition"},
      {"ccz", "line3", 8, 8, "prior linear-nearest-neighbour result"},
      {"ccz", "square4", 8, 4, "rotation-angle search, one ancilla"},
      {"cccz", "fully4", 14, 8, "prior phase-polynomial result"},
      {"cccz", "t-shape", 17, 17, "rotation-angle search"},
      {"cccz", "square", 16, 8, "prior phase-polynomial result"},
      {"cccz", "paw", 14, std::nullopt, "rotation-angle search"},
      {"cccz", "line4", 18, 12, "prior phase-polynomial result"},
  };
  return records;
}

inline const KnownRecord* find_record(std::string_view target, std::string_view connectivity) {
  for (const auto& r : known_records())
    if (r.target == target && r.connectivity == connectivity) return &r;
  return nullptr;
}

enum class RecordVerdict { NoRecord, NewRecord, Matches, Above };

inline std::string_view to_string(RecordVerdict v) {
  switch (v) {
    case RecordVerdict::NoRecord: return "no record";
    case RecordVerdict::NewRecord: return "new record, verify manually";
    case RecordVerdict::Matches: return "matches record";
    case RecordVerdict::Above: return "above record";
  }
  return "?";
}

/// Compare a found (count, depth) pair with the registry. Beating the record
/// in either metric is a new record; otherwise equal count and no worse depth
/// is a match.
inline RecordVerdict check_against_registry(std::string_view target, std::string_view connectivity,
                                            int cz_count, int cz_depth) {
  const KnownRecord* r = find_record(target, connectivity);
  if (!r) return RecordVerdict::NoRecord;
  if (cz_count < r->cz_count || (r->cz_depth && cz_depth < *r->cz_depth)) return RecordVerdict::NewRecord;
  if (cz_count == r->cz_count && (!r->cz_depth || cz_depth <= *r->cz_depth)) return RecordVerdict::Matches;
  return RecordVerdict::Above;
}

}  // namespace qgd
