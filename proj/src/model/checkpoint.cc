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

#include "pelt/model/checkpoint.h"

#include <algorithm>
#include <cstring>

#include "pelt/common/error.h"

namespace pelt::model {

namespace {

// Guards allocations driven by counts read from untrusted bytes.
constexpr std::uint32_t kMaxRank = 8;
constexpr std::uint32_t kMaxNameLength = 1024;

}  // namespace

Bytes serialize_checkpoint(const Checkpoint& checkpoint) {
  const ModelConfig& c = checkpoint.model.config();
  ByteWriter w;
  w.raw(std::string_view(kCheckpointMagic, sizeof(kCheckpointMagic)));
  w.u32(kCheckpointVersion);
  w.u32(static_cast<std::uint32_t>(c.dim));
  w.u32(static_cast<std::uint32_t>(c.layers));
  w.u32(static_cast<std::uint32_t>(c.heads));
  w.u32(static_cast<std::uint32_t>(c.ffn_mult));
  w.u32(static_cast<std::uint32_t>(c.max_len));
  w.u32(static_cast<std::uint32_t>(c.vocab));
  w.f64(c.ln_eps);
  w.u64(c.seed);
  w.u64(checkpoint.meta.step);
  w.f64(checkpoint.meta.loss);
  const auto& params = checkpoint.model.params();
  w.u32(static_cast<std::uint32_t>(params.size()));
  for (const auto& e : params) {
    w.u32(static_cast<std::uint32_t>(e.name.size()));
    w.raw(e.name);
    w.u32(static_cast<std::uint32_t>(e.tensor.rank()));
    for (std::size_t d : e.tensor.shape()) w.u32(static_cast<std::uint32_t>(d));
    for (float v : e.tensor.values()) w.f32(v);
  }
  return w.take();
}

Checkpoint deserialize_checkpoint(std::span<const std::uint8_t> bytes) {
  ByteReader r(bytes, "checkpoint");
  if (bytes.size() < sizeof(kCheckpointMagic) ||
      std::memcmp(bytes.data(), kCheckpointMagic, sizeof(kCheckpointMagic)) != 0) {
    throw FormatError("checkpoint: bad magic (expected PELTCKPT)");
  }
  r.string(sizeof(kCheckpointMagic));
  const std::uint32_t version = r.u32();
  if (version != kCheckpointVersion) {
    throw FormatError("checkpoint: unsupported version " + std::to_string(version) +
                      " (expected " + std::to_string(kCheckpointVersion) + ")");
  }
  ModelConfig c;
  c.dim = r.u32();
  c.layers = r.u32();
  c.heads = r.u32();
  c.ffn_mult = r.u32();
  c.max_len = r.u32();
  c.vocab = r.u32();
  c.ln_eps = r.f64();
  c.seed = r.u64();
  TrainingMeta meta;
  meta.step = r.u64();
  meta.loss = r.f64();
  const std::uint32_t count = r.u32();
  numerics::ParamStore<float> params;
  for (std::uint32_t i = 0; i < count; ++i) {
    const std::uint32_t name_length = r.u32();
    if (name_length > kMaxNameLength) {
      throw CorruptionError("checkpoint: parameter name length " + std::to_string(name_length));
    }
    std::string name = r.string(name_length);
    const std::uint32_t rank = r.u32();
    if (rank > kMaxRank) {
      throw CorruptionError("checkpoint: parameter '" + name + "' has rank " +
                            std::to_string(rank));
    }
    numerics::Shape shape(rank);
    std::size_t n = 1;
    bool fits = true;
    for (auto& d : shape) {
      d = r.u32();
      fits = fits && (d == 0 || n <= r.remaining() / 4 / d);
      n *= fits ? d : 1;
    }
    if (!fits || n * 4 > r.remaining()) {
      throw CorruptionError("checkpoint: truncated data for parameter '" + name + "'");
    }
    std::vector<float> values(n);
    for (auto& v : values) v = r.f32();
    params.add(std::move(name), numerics::Tensor<float>(std::move(shape), std::move(values)));
  }
  if (r.remaining() != 0) {
    throw CorruptionError("checkpoint: " + std::to_string(r.remaining()) + " trailing bytes");
  }
  return Checkpoint{Model<float>(c, std::move(params)), meta};
}

void save_checkpoint(const std::filesystem::path& path, const Checkpoint& checkpoint) {
  write_file(path, serialize_checkpoint(checkpoint));
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
  return deserialize_checkpoint(read_file(path));
}

Digest fingerprint(const Checkpoint& checkpoint) {
  return sha256(serialize_checkpoint(checkpoint));
}

}  // namespace pelt::model
