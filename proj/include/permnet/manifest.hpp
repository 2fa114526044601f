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
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace permnet {

inline constexpr std::string_view kAndroidNamespace = "http://schemas.android.com/apk/res/android";

struct Attribute {
  std::string ns;  // namespace URI, empty when unqualified
  std::string name;
  std::string value;

  bool operator==(const Attribute&) const = default;
};

struct Element {
  std::string name;
  std::vector<Attribute> attributes;
  std::vector<Element> children;

  const Attribute* find_attribute(std::string_view ns, std::string_view name) const;

  bool operator==(const Element&) const = default;
};

/// Decoded AndroidManifest.xml, whether it came from binary or text XML.
struct ManifestDocument {
  Element root;

  bool operator==(const ManifestDocument&) const = default;
};

/// Android binary XML (the form stored inside APKs).
ManifestDocument parse_axml(std::span<const std::uint8_t> bytes);

/// Text XML, as produced by decompilers. Namespace prefixes are resolved, so
/// `android:name` is reported with the Android namespace URI.
ManifestDocument parse_plain_manifest(std::string_view text);

/// Picks parse_axml or parse_plain_manifest from the leading bytes.
ManifestDocument parse_manifest(std::span<const std::uint8_t> bytes);

bool looks_like_axml(std::span<const std::uint8_t> bytes);

struct PermissionSet {
  std::string app_id;
  std::set<std::string> permissions;

  std::size_t size() const { return permissions.size(); }
  bool contains(const std::string& p) const { return permissions.count(p) != 0; }

  bool operator==(const PermissionSet&) const = default;
};

struct ExtractDiagnostics {
  std::size_t requests_seen = 0;
  std::size_t blank_names_skipped = 0;
};

/// Collects the android:name of every `uses-permission` and
/// `uses-permission-sdk-23` element. Blank names are skipped and counted.
PermissionSet extract_permissions(const ManifestDocument& doc, std::string app_id,
                                  ExtractDiagnostics* diagnostics = nullptr);

/// One permission per line; `#` starts a comment line; blank lines ignored.
PermissionSet parse_permission_list(std::string_view text, std::string app_id);
std::string format_permission_list(const PermissionSet& perms);

enum class SourceKind { Apk, Manifest, PermissionList };

const char* to_string(SourceKind kind);
SourceKind parse_source_kind(std::string_view text);
/// `.apk` -> Apk, `.txt` -> PermissionList, anything else -> Manifest.
SourceKind guess_source_kind(const std::filesystem::path& path);

/// Full ingestion of one sample from disk in its declared form.
PermissionSet load_permission_set(const std::filesystem::path& path, SourceKind kind,
                                  ExtractDiagnostics* diagnostics = nullptr);

std::vector<std::uint8_t> read_file_bytes(const std::filesystem::path& path);
std::string read_file_text(const std::filesystem::path& path);
void write_file_text(const std::filesystem::path& path, std::string_view text);

}  // namespace permnet
