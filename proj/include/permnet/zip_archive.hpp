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

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace permnet {

/// Read-only view of a ZIP container (an APK). The central directory is
/// parsed eagerly; entry payloads are decoded on demand. Only the stored (0)
/// and DEFLATE (8) compression methods are accepted.
class ApkArchive {
 public:
  struct Entry {
    std::uint16_t method = 0;
    std::uint32_t crc32 = 0;
    std::uint32_t compressed_size = 0;
    std::uint32_t uncompressed_size = 0;
    std::uint32_t local_header_offset = 0;
  };

  static ApkArchive open(const std::filesystem::path& path);
  static ApkArchive from_bytes(std::vector<std::uint8_t> bytes);

  const std::map<std::string, Entry>& entries() const { return entries_; }
  bool contains(const std::string& name) const { return entries_.count(name) != 0; }

  /// Decompressed payload of `name`; Errc::MissingManifest when absent.
  std::vector<std::uint8_t> read(const std::string& name) const;

  /// Payload of AndroidManifest.xml.
  std::vector<std::uint8_t> read_manifest() const;

  const std::string& source() const { return source_; }

 private:
  ApkArchive() = default;
  void parse_central_directory();

  std::vector<std::uint8_t> bytes_;
  std::map<std::string, Entry> entries_;
  std::string source_;
};

inline constexpr const char* kManifestEntry = "AndroidManifest.xml";

/// Upper bound on a single decoded entry; larger declarations are rejected
/// before allocating.
inline constexpr std::size_t kMaxEntrySize = std::size_t{256} << 20;

}  // namespace permnet
