// Copyright 2026 The pelt Authors.
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

#ifndef PELT_LOOKUP_TABLE_H_
#define PELT_LOOKUP_TABLE_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "pelt/common/binary_io.h"

namespace pelt::lookup {

inline constexpr char kTableMagic[8] = {'P', 'E', 'L', 'T', 'T', 'B', 'L', '1'};
inline constexpr std::uint32_t kTableVersion = 1;
// Relative tolerance of the stored-norm invariant.
inline constexpr double kNormTolerance = 1e-5;

struct TableEntry {
  std::vector<float> vector;
  std::uint32_t occurrences = 0;
  std::string source;

  friend bool operator==(const TableEntry&, const TableEntry&) = default;
};

// Entity id -> constructed embedding, all with norm L, tied to the
// checkpoint whose fingerprint it carries. Iteration is in id order.
class EntityEmbeddingTable {
 public:
  EntityEmbeddingTable(Digest fingerprint, std::size_t dim, float norm);

  // Throws DimensionError on a width mismatch and ContractError when the
  // entry has no occurrences or its norm is off by more than kNormTolerance.
  void add(const std::string& entity_id, TableEntry entry);

  const TableEntry* find(const std::string& entity_id) const;
  bool contains(const std::string& entity_id) const { return find(entity_id) != nullptr; }
  const std::map<std::string, TableEntry>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }

  const Digest& fingerprint() const { return fingerprint_; }
  std::size_t dim() const { return dim_; }
  float norm() const { return norm_; }

  // Throws FingerprintError printing both fingerprints unless they match.
  void require_fingerprint(const Digest& checkpoint) const;

  friend bool operator==(const EntityEmbeddingTable&, const EntityEmbeddingTable&) = default;

 private:
  Digest fingerprint_;
  std::size_t dim_;
  float norm_;
  std::map<std::string, TableEntry> entries_;
};

Bytes serialize_table(const EntityEmbeddingTable& table);
// FormatError on bad magic/version; CorruptionError on truncation or on
// entries that break the table invariants.
EntityEmbeddingTable deserialize_table(std::span<const std::uint8_t> bytes);

void save_table(const std::filesystem::path& path, const EntityEmbeddingTable& table);
EntityEmbeddingTable load_table(const std::filesystem::path& path);
// load_table followed by require_fingerprint.
EntityEmbeddingTable load_table_for(const std::filesystem::path& path, const Digest& checkpoint);

}  // namespace pelt::lookup

#endif  // PELT_LOOKUP_TABLE_H_
