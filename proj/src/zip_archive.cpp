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

#include "permnet/zip_archive.hpp"

#include <zlib.h>

#include <algorithm>
#include <fstream>
#include <iterator>

#include "byte_reader.hpp"
#include "permnet/error.hpp"

namespace permnet {

namespace {

constexpr std::uint32_t kEocdSignature = 0x06054b50;
constexpr std::uint32_t kCentralSignature = 0x02014b50;
constexpr std::uint32_t kLocalSignature = 0x04034b50;
constexpr std::size_t kEocdSize = 22;
constexpr std::size_t kCentralSize = 46;
constexpr std::size_t kLocalSize = 30;
constexpr std::size_t kMaxCommentSize = 0xffff;

std::vector<std::uint8_t> inflate_raw(std::span<const std::uint8_t> in, std::size_t expected) {
  // One spare byte so an overlong stream is detected instead of silently cut.
  std::vector<std::uint8_t> out(expected + 1);
  z_stream zs{};
  if (inflateInit2(&zs, -MAX_WBITS) != Z_OK) {
    throw Error(Errc::UnsupportedCompression, "inflateInit2 failed");
  }
  zs.next_in = const_cast<Bytef*>(in.data());
  zs.avail_in = static_cast<uInt>(in.size());
  zs.next_out = out.data();
  zs.avail_out = static_cast<uInt>(out.size());
  const int rc = inflate(&zs, Z_FINISH);
  const std::size_t produced = zs.total_out;
  inflateEnd(&zs);
  if (rc != Z_STREAM_END || produced != expected) {
    throw Error(Errc::TruncatedArchive, "corrupt DEFLATE stream or size mismatch");
  }
  out.resize(expected);
  return out;
}

}  // namespace

ApkArchive ApkArchive::open(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(Errc::Io, "cannot open " + path.string());
  }
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (in.bad()) {
    throw Error(Errc::Io, "read failed for " + path.string());
  }
  ApkArchive archive;
  archive.bytes_ = std::move(bytes);
  archive.source_ = path.string();
  archive.parse_central_directory();
  return archive;
}

ApkArchive ApkArchive::from_bytes(std::vector<std::uint8_t> bytes) {
  ApkArchive archive;
  archive.bytes_ = std::move(bytes);
  archive.source_ = "<memory>";
  archive.parse_central_directory();
  return archive;
}

void ApkArchive::parse_central_directory() {
  const std::span<const std::uint8_t> data(bytes_);
  if (data.size() < kEocdSize) {
    throw Error(Errc::NotAZip, "file too small for an end-of-central-directory record");
  }
  // The EOCD sits at the end, possibly followed by a comment of up to 64 KiB.
  std::size_t eocd = data.size();
  const std::size_t lowest = data.size() >= kEocdSize + kMaxCommentSize ? data.size() - kEocdSize - kMaxCommentSize : 0;
  for (std::size_t pos = data.size() - kEocdSize + 1; pos-- > lowest;) {
    if (load_le<std::uint32_t>(data, pos) == kEocdSignature) {
      eocd = pos;
      break;
    }
  }
  if (eocd == data.size()) {
    throw Error(Errc::NotAZip, "no end-of-central-directory signature");
  }

  ByteReader eocd_reader(data.subspan(eocd), Errc::TruncatedArchive);
  eocd_reader.skip(4 + 2 + 2 + 2);
  const std::uint16_t total_entries = eocd_reader.u16();
  const std::uint32_t cd_size = eocd_reader.u32();
  const std::uint32_t cd_offset = eocd_reader.u32();
  if (std::size_t{cd_offset} + cd_size > eocd) {
    throw Error(Errc::TruncatedArchive, "central directory extends past its end record");
  }

  ByteReader cd(data.subspan(cd_offset, cd_size), Errc::TruncatedArchive);
  for (std::uint16_t i = 0; i < total_entries; ++i) {
    if (cd.remaining() < kCentralSize) {
      throw Error(Errc::TruncatedArchive, "central directory holds fewer entries than declared");
    }
    if (cd.u32() != kCentralSignature) {
      throw Error(Errc::NotAZip, "bad central directory signature");
    }
    cd.skip(2 + 2 + 2);  // version made by, version needed, flags
    Entry entry;
    entry.method = cd.u16();
    cd.skip(2 + 2);  // mod time, mod date
    entry.crc32 = cd.u32();
    entry.compressed_size = cd.u32();
    entry.uncompressed_size = cd.u32();
    const std::uint16_t name_len = cd.u16();
    const std::uint16_t extra_len = cd.u16();
    const std::uint16_t comment_len = cd.u16();
    cd.skip(2 + 2 + 4);  // disk start, internal attrs, external attrs
    entry.local_header_offset = cd.u32();
    const auto name_bytes = cd.bytes(name_len);
    cd.skip(std::size_t{extra_len} + comment_len);

    std::string name(name_bytes.begin(), name_bytes.end());
    if (!entries_.emplace(std::move(name), entry).second) {
      throw Error(Errc::DuplicateEntry, "duplicate archive entry");
    }
  }
}

std::vector<std::uint8_t> ApkArchive::read(const std::string& name) const {
  const auto it = entries_.find(name);
  if (it == entries_.end()) {
    throw Error(Errc::MissingManifest, "no entry named " + name + " in " + source_);
  }
  const Entry& entry = it->second;
  if (entry.method != 0 && entry.method != 8) {
    throw Error(Errc::UnsupportedCompression, "compression method " + std::to_string(entry.method));
  }
  if (entry.uncompressed_size > kMaxEntrySize) {
    throw Error(Errc::TruncatedArchive, "entry declares an implausible size");
  }

  const std::span<const std::uint8_t> data(bytes_);
  if (entry.local_header_offset > data.size()) {
    throw Error(Errc::TruncatedArchive, "local header offset out of range");
  }
  ByteReader local(data.subspan(entry.local_header_offset), Errc::TruncatedArchive);
  if (local.remaining() < kLocalSize) {
    throw Error(Errc::TruncatedArchive, "local header cut short");
  }
  if (local.u32() != kLocalSignature) {
    throw Error(Errc::NotAZip, "bad local header signature");
  }
  local.skip(2 + 2 + 2 + 2 + 2 + 4 + 4 + 4);
  const std::uint16_t name_len = local.u16();
  const std::uint16_t extra_len = local.u16();
  local.skip(std::size_t{name_len} + extra_len);
  // Sizes come from the central directory; local headers may defer them to a
  // data descriptor.
  const auto payload = local.bytes(entry.compressed_size);

  std::vector<std::uint8_t> out;
  if (entry.method == 0) {
    if (entry.compressed_size != entry.uncompressed_size) {
      throw Error(Errc::TruncatedArchive, "stored entry with mismatched sizes");
    }
    out.assign(payload.begin(), payload.end());
  } else {
    out = inflate_raw(payload, entry.uncompressed_size);
  }
  const auto crc = static_cast<std::uint32_t>(::crc32(0L, out.data(), static_cast<uInt>(out.size())));
  if (crc != entry.crc32) {
    throw Error(Errc::TruncatedArchive, "CRC mismatch for " + name);
  }
  return out;
}

std::vector<std::uint8_t> ApkArchive::read_manifest() const { return read(kManifestEntry); }

}  // namespace permnet
