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

#include "pelt/lookup/table.h"

#include <cmath>
#include <cstring>

#include "pelt/common/error.h"

namespace pelt::lookup {

namespace {

constexpr std::uint32_t kMaxStringLength = 1 << 16;

}  // namespace

EntityEmbeddingTable::EntityEmbeddingTable(Digest fingerprint, std::size_t dim, float norm)
    : fingerprint_(fingerprint), dim_(dim), norm_(norm) {
  if (dim == 0) throw ContractError("embedding table: D must be positive");
  if (!(norm > 0.0f) || !std::isfinite(norm)) {
    throw ContractError("embedding table: norm L must be positive and finite");
  }
}

void EntityEmbeddingTable::add(const std::string& entity_id, TableEntry entry) {
  if (entry.vector.size() != dim_) {
    throw DimensionError("embedding table: entity '" + entity_id + "' has width " +
                         std::to_string(entry.vector.size()) + ", table D=" +
                         std::to_string(dim_));
  }
  if (entry.occurrences == 0) {
    throw ContractError("embedding table: entity '" + entity_id + "' has no occurrences");
  }
  double sq = 0.0;
  for (float v : entry.vector) sq += static_cast<double>(v) * v;
  const double norm = std::sqrt(sq);
  if (!(std::abs(norm - norm_) <= kNormTolerance * norm_)) {
    throw ContractError("embedding table: entity '" + entity_id + "' has norm " +
                        std::to_string(norm) + ", table L=" + std::to_string(norm_));
  }
  entries_.insert_or_assign(entity_id, std::move(entry));
}

const TableEntry* EntityEmbeddingTable::find(const std::string& entity_id) const {
  auto it = entries_.find(entity_id);
  return it == entries_.end() ? nullptr : &it->second;
}

void EntityEmbeddingTable::require_fingerprint(const Digest& checkpoint) const {
  if (checkpoint != fingerprint_) {
    throw FingerprintError("embedding table was built from checkpoint " + to_hex(fingerprint_) +
                           " but the loaded checkpoint is " + to_hex(checkpoint));
  }
}

Bytes serialize_table(const EntityEmbeddingTable& table) {
  ByteWriter w;
  w.raw(std::string_view(kTableMagic, sizeof(kTableMagic)));
  w.u32(kTableVersion);
  w.raw(std::span<const std::uint8_t>(table.fingerprint()));
  w.u32(static_cast<std::uint32_t>(table.dim()));
  w.f32(table.norm());
  w.u32(static_cast<std::uint32_t>(table.size()));
  for (const auto& [id, entry] : table.entries()) {
    w.u32(static_cast<std::uint32_t>(id.size()));
    w.raw(id);
    w.u32(static_cast<std::uint32_t>(entry.source.size()));
    w.raw(entry.source);
    w.u32(entry.occurrences);
    for (float v : entry.vector) w.f32(v);
  }
  return w.take();
}

EntityEmbeddingTable deserialize_table(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < sizeof(kTableMagic) ||
      std::memcmp(bytes.data(), kTableMagic, sizeof(kTableMagic)) != 0) {
    throw FormatError("embedding table: bad magic (expected PELTTBL1)");
  }
  ByteReader r(bytes, "embedding table");
  r.string(sizeof(kTableMagic));
  const std::uint32_t version = r.u32();
  if (version != kTableVersion) {
    throw FormatError("embedding table: unsupported version " + std::to_string(version) +
                      " (expected " + std::to_string(kTableVersion) + ")");
  }
  Digest fingerprint;
  r.raw(fingerprint);
  const std::uint32_t dim = r.u32();
  const float norm = r.f32();
  const std::uint32_t count = r.u32();
  try {
    EntityEmbeddingTable table(fingerprint, dim, norm);
    auto read_string = [&](const char* what) {
      const std::uint32_t length = r.u32();
      if (length > kMaxStringLength) {
        throw CorruptionError(std::string("embedding table: ") + what + " length " +
                              std::to_string(length));
      }
      return r.string(length);
    };
    for (std::uint32_t i = 0; i < count; ++i) {
      std::string id = read_string("entity id");
      TableEntry entry;
      entry.source = read_string("source tag");
      entry.occurrences = r.u32();
      if (static_cast<std::size_t>(dim) * 4 > r.remaining()) {
        throw CorruptionError("embedding table: truncated vector for '" + id + "'");
      }
      entry.vector.resize(dim);
      for (auto& v : entry.vector) v = r.f32();
      if (table.contains(id)) {
        throw CorruptionError("embedding table: duplicate entity '" + id + "'");
      }
      table.add(id, std::move(entry));
    }
    if (r.remaining() != 0) {
      throw CorruptionError("embedding table: " + std::to_string(r.remaining()) +
                            " trailing bytes");
    }
    return table;
  } catch (const ContractError& e) {
    throw CorruptionError(e.what());
  } catch (const DimensionError& e) {
    throw CorruptionError(e.what());
  }
}

void save_table(const std::filesystem::path& path, const EntityEmbeddingTable& table) {
  write_file(path, serialize_table(table));
}

EntityEmbeddingTable load_table(const std::filesystem::path& path) {
  return deserialize_table(read_file(path));
}

EntityEmbeddingTable load_table_for(const std::filesystem::path& path, const Digest& checkpoint) {
  auto table = load_table(path);
  table.require_fingerprint(checkpoint);
  return table;
}

}  // namespace pelt::lookup
