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

#include "permnet/vocabulary.hpp"

#include <algorithm>
#include <cstdio>
#include <map>

#include "permnet/error.hpp"

namespace permnet {

const char* to_string(ClassLabel label) { return label == ClassLabel::Botnet ? "botnet" : "benign"; }

ClassLabel parse_class_label(std::string_view text) {
  if (text == "botnet") return ClassLabel::Botnet;
  if (text == "benign") return ClassLabel::Benign;
  throw Error(Errc::MalformedCsv, "unknown label '" + std::string(text) + "'");
}

double FrequencyList::fraction_of(std::string_view permission) const {
  for (const auto& e : entries) {
    if (e.permission == permission) return e.fraction;
  }
  return 0.0;
}

FrequencyList count_frequencies(std::span<const PermissionSet> sets, ClassLabel label) {
  if (sets.empty()) {
    throw Error(Errc::EmptyCorpus, std::string("no ") + to_string(label) + " applications");
  }
  std::map<std::string, std::size_t> counts;
  for (const auto& set : sets) {
    for (const auto& p : set.permissions) ++counts[p];
  }
  FrequencyList out;
  out.label = label;
  out.corpus_size = sets.size();
  out.entries.reserve(counts.size());
  for (const auto& [perm, count] : counts) {
    out.entries.push_back({perm, count, static_cast<double>(count) / static_cast<double>(sets.size())});
  }
  // std::map iteration is already name-ascending, so a stable sort on count
  // gives the name tie-break for free.
  std::stable_sort(out.entries.begin(), out.entries.end(),
                   [](const FrequencyEntry& a, const FrequencyEntry& b) { return a.count > b.count; });
  return out;
}

std::string format_frequency_report(const FrequencyList& list, std::size_t top) {
  std::string out = std::string("# top permissions, ") + to_string(list.label) + " (" +
                    std::to_string(list.corpus_size) + " applications)\n";
  const std::size_t n = std::min(top, list.entries.size());
  for (std::size_t i = 0; i < n; ++i) {
    const auto& e = list.entries[i];
    char line[64];
    std::snprintf(line, sizeof line, "%3zu %7zu %7.2f%%  ", i + 1, e.count, 100.0 * e.fraction);
    out += line;
    out += e.permission;
    out += '\n';
  }
  return out;
}

PermissionVocabulary::PermissionVocabulary(std::vector<std::string> permissions)
    : permissions_(std::move(permissions)) {
  index_.reserve(permissions_.size());
  for (std::size_t i = 0; i < permissions_.size(); ++i) {
    if (!index_.emplace(permissions_[i], i).second) {
      throw Error(Errc::DuplicateEntry, "permission listed twice: " + permissions_[i]);
    }
  }
}

std::optional<std::size_t> PermissionVocabulary::index_of(std::string_view permission) const {
  const auto it = index_.find(std::string(permission));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

PermissionVocabulary merge_vocabulary(const FrequencyList& botnet, const FrequencyList& benign, std::size_t n) {
  if (n == 0) {
    throw Error(Errc::InvalidArgument, "vocabulary size must be positive");
  }
  std::map<std::string, double> score;
  for (const auto& e : botnet.entries) score[e.permission] += e.fraction;
  for (const auto& e : benign.entries) score[e.permission] += e.fraction;

  std::vector<std::pair<std::string, double>> ranked(score.begin(), score.end());
  std::stable_sort(ranked.begin(), ranked.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });
  ranked.resize(std::min(n, ranked.size()));

  std::vector<std::string> perms;
  perms.reserve(ranked.size());
  for (auto& [p, s] : ranked) perms.push_back(std::move(p));
  return PermissionVocabulary(std::move(perms));
}

PermissionVocabulary build_vocabulary(std::span<const PermissionSet> sets, std::span<const ClassLabel> labels,
                                      std::size_t n) {
  if (sets.size() != labels.size()) {
    throw Error(Errc::InvalidArgument, "sets and labels differ in length");
  }
  std::vector<PermissionSet> botnet, benign;
  for (std::size_t i = 0; i < sets.size(); ++i) {
    (labels[i] == ClassLabel::Botnet ? botnet : benign).push_back(sets[i]);
  }
  return merge_vocabulary(count_frequencies(botnet, ClassLabel::Botnet),
                          count_frequencies(benign, ClassLabel::Benign), n);
}

std::string format_vocabulary(const PermissionVocabulary& vocab) {
  std::string out;
  for (const auto& p : vocab.permissions()) {
    out += p;
    out += '\n';
  }
  return out;
}

PermissionVocabulary parse_vocabulary(std::string_view text) {
  std::vector<std::string> perms;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ' || line.back() == '\t')) line.remove_suffix(1);
    while (!line.empty() && (line.front() == ' ' || line.front() == '\t')) line.remove_prefix(1);
    if (line.empty() || line.front() == '#') continue;
    perms.emplace_back(line);
  }
  if (perms.empty()) {
    throw Error(Errc::EmptyFile, "vocabulary file lists no permissions");
  }
  return PermissionVocabulary(std::move(perms));
}

void save_vocabulary(const PermissionVocabulary& vocab, const std::filesystem::path& path) {
  write_file_text(path, format_vocabulary(vocab));
}

PermissionVocabulary load_vocabulary(const std::filesystem::path& path) {
  return parse_vocabulary(read_file_text(path));
}

}  // namespace permnet
