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
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "permnet/manifest.hpp"

namespace permnet {

enum class ClassLabel { Benign = 0, Botnet = 1 };

const char* to_string(ClassLabel label);
ClassLabel parse_class_label(std::string_view text);

struct FrequencyEntry {
  std::string permission;
  std::size_t count = 0;
  double fraction = 0.0;

  bool operator==(const FrequencyEntry&) const = default;
};

/// Per-class permission usage, most used first (ties by name).
struct FrequencyList {
  ClassLabel label = ClassLabel::Benign;
  std::vector<FrequencyEntry> entries;
  std::size_t corpus_size = 0;

  double fraction_of(std::string_view permission) const;

  bool operator==(const FrequencyList&) const = default;
};

/// Each application counts at most once per permission.
FrequencyList count_frequencies(std::span<const PermissionSet> sets, ClassLabel label);

/// Human-readable "top N" table, one line per permission.
std::string format_frequency_report(const FrequencyList& list, std::size_t top);

/// Ordered permission list fixing the image axes.
class PermissionVocabulary {
 public:
  PermissionVocabulary() = default;
  explicit PermissionVocabulary(std::vector<std::string> permissions);

  std::size_t size() const { return permissions_.size(); }
  bool empty() const { return permissions_.empty(); }
  const std::vector<std::string>& permissions() const { return permissions_; }
  const std::string& operator[](std::size_t i) const { return permissions_[i]; }
  std::optional<std::size_t> index_of(std::string_view permission) const;

  bool operator==(const PermissionVocabulary& other) const { return permissions_ == other.permissions_; }

 private:
  std::vector<std::string> permissions_;
  std::unordered_map<std::string, std::size_t> index_;
};

inline constexpr std::size_t kDefaultVocabularySize = 41;

/// Union of both classes ranked by fraction_botnet + fraction_benign
/// (descending, ties by name), truncated to `n`.
PermissionVocabulary merge_vocabulary(const FrequencyList& botnet, const FrequencyList& benign, std::size_t n);

/// Convenience: count both classes and merge.
PermissionVocabulary build_vocabulary(std::span<const PermissionSet> sets, std::span<const ClassLabel> labels,
                                      std::size_t n);

std::string format_vocabulary(const PermissionVocabulary& vocab);
PermissionVocabulary parse_vocabulary(std::string_view text);
void save_vocabulary(const PermissionVocabulary& vocab, const std::filesystem::path& path);
PermissionVocabulary load_vocabulary(const std::filesystem::path& path);

}  // namespace permnet
