/*
 * Copyright 2026 The Permnet Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

// Model container:
//   "PNETCNN\0" | u32 version | payload | u32 crc32(payload)
// payload: input shape, seed, layer specs, then every parameter tensor as
// (u32 rank, u64 dims..., f64 values...). All integers little-endian.

#include <zlib.h>

#include <bit>
#include <cstring>
#include <fstream>
#include <string_view>

#include "../byte_reader.hpp"
#include "permnet/error.hpp"
#include "permnet/manifest.hpp"
#include "permnet/nn/model.hpp"

namespace permnet::nn {

namespace {

constexpr std::string_view kMagic{"PNETCNN\0", 8};
constexpr std::uint32_t kFormatVersion = 1;
constexpr std::size_t kHeaderSize = 8 + 4;
constexpr std::size_t kMaxRank = 8;

class Writer {
 public:
  void u8(std::uint8_t v) { bytes_.push_back(v); }
  void u32(std::uint32_t v) { le(v); }
  void u64(std::uint64_t v) { le(v); }
  void f64(double v) { le(std::bit_cast<std::uint64_t>(v)); }
  void raw(std::string_view s) { bytes_.insert(bytes_.end(), s.begin(), s.end()); }
  std::vector<std::uint8_t>& bytes() { return bytes_; }

 private:
  template <typename T>
  void le(T v) {
    for (std::size_t i = 0; i < sizeof(T); ++i) bytes_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  std::vector<std::uint8_t> bytes_;
};

std::uint32_t crc_of(std::span<const std::uint8_t> data) {
  return static_cast<std::uint32_t>(::crc32(0L, data.data(), static_cast<uInt>(data.size())));
}

Shape read_shape(ByteReader& r) {
  const std::uint32_t rank = r.u32();
  if (rank > kMaxRank) {
    throw Error(Errc::TruncatedChunk, "implausible tensor rank");
  }
  Shape shape(rank);
  std::size_t total = 1;
  for (auto& d : shape) {
    d = static_cast<std::size_t>(r.u64());
    if (d != 0 && total > r.remaining() / d) {
      throw Error(Errc::TruncatedChunk, "tensor larger than the file");
    }
    total *= d;
  }
  return shape;
}

}  // namespace

std::vector<std::uint8_t> serialize_model(const CnnModel& model) {
  Writer w;
  w.raw(kMagic);
  w.u32(kFormatVersion);

  w.u32(static_cast<std::uint32_t>(model.input_shape().size()));
  for (std::size_t d : model.input_shape()) w.u64(d);
  w.u64(model.seed());

  const auto specs = model.specs();
  w.u32(static_cast<std::uint32_t>(specs.size()));
  for (const auto& s : specs) {
    w.u8(static_cast<std::uint8_t>(s.kind));
    w.u8(static_cast<std::uint8_t>(s.activation));
    w.u8(static_cast<std::uint8_t>(s.padding));
    w.u8(0);
    for (std::size_t v : {s.kernel_h, s.kernel_w, s.stride_h, s.stride_w, s.units}) w.u64(v);
  }

  const auto params = model.parameters();
  w.u32(static_cast<std::uint32_t>(params.size()));
  for (const Parameter* p : params) {
    w.u32(static_cast<std::uint32_t>(p->value.rank()));
    for (std::size_t d : p->value.shape()) w.u64(d);
    for (double v : p->value.values()) w.f64(v);
  }

  auto& bytes = w.bytes();
  const std::uint32_t crc = crc_of(std::span<const std::uint8_t>(bytes).subspan(kHeaderSize));
  w.u32(crc);
  return std::move(bytes);
}

CnnModel deserialize_model(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < kHeaderSize + 4) {
    throw Error(Errc::TruncatedChunk, "model file too short");
  }
  if (std::string_view(reinterpret_cast<const char*>(bytes.data()), kMagic.size()) != kMagic) {
    throw Error(Errc::BadMagic, "not a permnet model file");
  }
  const auto version = load_le<std::uint32_t>(bytes, kMagic.size());
  if (version != kFormatVersion) {
    throw Error(Errc::VersionMismatch, "model format version " + std::to_string(version) + ", expected " +
                                           std::to_string(kFormatVersion));
  }
  const auto payload = bytes.subspan(kHeaderSize, bytes.size() - kHeaderSize - 4);
  if (crc_of(payload) != load_le<std::uint32_t>(bytes, bytes.size() - 4)) {
    throw Error(Errc::ChecksumMismatch, "model payload checksum mismatch");
  }

  ByteReader r(payload, Errc::TruncatedChunk);
  const Shape input = read_shape(r);
  const std::uint64_t seed = r.u64();
  const std::uint32_t layer_count = r.u32();
  std::vector<LayerSpec> specs;
  for (std::uint32_t i = 0; i < layer_count; ++i) {
    LayerSpec s;
    const std::uint8_t kind = r.u8();
    const std::uint8_t act = r.u8();
    const std::uint8_t pad = r.u8();
    r.u8();
    if (kind > 3 || act > 1 || pad > 1) {
      throw Error(Errc::InvalidSpec, "unknown layer encoding");
    }
    s.kind = static_cast<LayerKind>(kind);
    s.activation = static_cast<Activation>(act);
    s.padding = static_cast<Padding>(pad);
    s.kernel_h = r.u64();
    s.kernel_w = r.u64();
    s.stride_h = r.u64();
    s.stride_w = r.u64();
    s.units = r.u64();
    specs.push_back(s);
  }

  CnnModel model(input, specs, seed);
  auto params = model.parameters();
  if (r.u32() != params.size()) {
    throw Error(Errc::ShapeMismatch, "parameter count does not match the layer specs");
  }
  for (Parameter* p : params) {
    const Shape shape = read_shape(r);
    require_shape(p->value, shape, "stored parameter");
    for (double& v : p->value.values()) v = std::bit_cast<double>(r.u64());
  }
  if (r.remaining() != 0) {
    throw Error(Errc::TruncatedChunk, "trailing bytes after parameters");
  }
  return model;
}

void save_model(const CnnModel& model, const std::filesystem::path& path) {
  const auto bytes = serialize_model(model);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw Error(Errc::Io, "cannot write " + path.string());
  }
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) {
    throw Error(Errc::Io, "write failed for " + path.string());
  }
}

CnnModel load_model(const std::filesystem::path& path) { return deserialize_model(read_file_bytes(path)); }

}  // namespace permnet::nn
