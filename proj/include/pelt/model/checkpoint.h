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

#ifndef PELT_MODEL_CHECKPOINT_H_
#define PELT_MODEL_CHECKPOINT_H_

#include <cstdint>
#include <filesystem>
#include <string>

#include "pelt/common/binary_io.h"
#include "pelt/model/model.h"

namespace pelt::model {

inline constexpr char kCheckpointMagic[8] = {'P', 'E', 'L', 'T', 'C', 'K', 'P', 'T'};
inline constexpr std::uint32_t kCheckpointVersion = 1;

struct TrainingMeta {
  std::uint64_t step = 0;
  double loss = 0.0;

  friend bool operator==(const TrainingMeta&, const TrainingMeta&) = default;
};

// Stored parameters are 32-bit.
struct Checkpoint {
  Model<float> model;
  TrainingMeta meta;
};

// Byte layout (little-endian) is documented in docs/formats.md.
Bytes serialize_checkpoint(const Checkpoint& checkpoint);
// Throws FormatError on magic/version mismatch, CorruptionError on truncated
// or inconsistent data, ConfigError when tensors do not fit the config.
Checkpoint deserialize_checkpoint(std::span<const std::uint8_t> bytes);

void save_checkpoint(const std::filesystem::path& path, const Checkpoint& checkpoint);
Checkpoint load_checkpoint(const std::filesystem::path& path);

// SHA-256 of the serialized checkpoint.
Digest fingerprint(const Checkpoint& checkpoint);

}  // namespace pelt::model

#endif  // PELT_MODEL_CHECKPOINT_H_
