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

#include "permnet/pipeline/dataset.hpp"

#include <numeric>
#include <optional>
#include <set>

#include "permnet/encoder.hpp"
#include "permnet/error.hpp"

namespace permnet::pipeline {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split_csv_line(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const auto comma = line.find(',', start);
    out.push_back(trim(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

}  // namespace

std::filesystem::path DatasetManifest::resolve(const DatasetRecord& record) const {
  std::filesystem::path p(record.path);
  if (p.is_absolute() || base_dir.empty()) return p;
  return base_dir / p;
}

DatasetManifest parse_dataset_csv(std::string_view text, const std::filesystem::path& base_dir) {
  DatasetManifest out;
  out.base_dir = base_dir;
  bool header_seen = false;
  std::size_t line_no = 0;
  std::set<std::string> seen;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    const std::string_view line = trim(text.substr(0, nl));
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (line.empty() || line.front() == '#') continue;
    const auto fields = split_csv_line(line);
    if (!header_seen) {
      if (fields.size() != 3 || fields[0] != "path" || fields[1] != "label" || fields[2] != "kind") {
        throw Error(Errc::MalformedCsv, "expected header 'path,label,kind'");
      }
      header_seen = true;
      continue;
    }
    if (fields.size() != 3 || fields[0].empty()) {
      throw Error(Errc::MalformedCsv, "line " + std::to_string(line_no) + ": expected 3 fields");
    }
    DatasetRecord rec;
    rec.path = std::string(fields[0]);
    rec.label = parse_class_label(fields[1]);
    try {
      rec.kind = parse_source_kind(fields[2]);
    } catch (const Error& e) {
      throw Error(Errc::MalformedCsv, "line " + std::to_string(line_no) + ": " + e.what());
    }
    if (!seen.insert(rec.path).second) {
      throw Error(Errc::DuplicateEntry, "line " + std::to_string(line_no) + ": path listed twice: " + rec.path);
    }
    out.records.push_back(std::move(rec));
  }
  if (!header_seen) {
    throw Error(Errc::MalformedCsv, "dataset manifest is empty");
  }
  return out;
}

DatasetManifest load_dataset_manifest(const std::filesystem::path& csv_path) {
  return parse_dataset_csv(read_file_text(csv_path), csv_path.parent_path());
}

std::string format_dataset_csv(const DatasetManifest& manifest) {
  std::string out = "path,label,kind\n";
  for (const auto& r : manifest.records) {
    out += r.path + "," + to_string(r.label) + "," + to_string(r.kind) + "\n";
  }
  return out;
}

Corpus load_corpus(const DatasetManifest& manifest) {
  const std::size_t n = manifest.records.size();
  std::vector<std::optional<PermissionSet>> loaded(n);
  std::vector<std::string> errors(n);
#pragma omp parallel for schedule(dynamic)
  for (std::size_t i = 0; i < n; ++i) {
    const auto& rec = manifest.records[i];
    try {
      auto set = load_permission_set(manifest.resolve(rec), rec.kind);
      set.app_id = rec.path;
      loaded[i] = std::move(set);
    } catch (const std::exception& e) {
      errors[i] = e.what();
    }
  }

  Corpus corpus;
  for (std::size_t i = 0; i < n; ++i) {
    if (loaded[i]) {
      corpus.sets.push_back(std::move(*loaded[i]));
      corpus.labels.push_back(manifest.records[i].label);
      corpus.record_index.push_back(i);
    } else {
      corpus.failures.push_back({i, manifest.records[i].path, errors[i]});
    }
  }
  if (corpus.sets.empty()) {
    throw Error(n == 0 ? Errc::EmptyDataset : Errc::AllSamplesFailed,
                n == 0 ? "dataset manifest lists no samples" : "no sample could be read");
  }
  return corpus;
}

std::vector<Sample> encode_samples(const Corpus& corpus, std::span<const std::size_t> which,
                                   const PermissionVocabulary& vocab) {
  std::vector<Sample> out(which.size());
#pragma omp parallel for schedule(static)
  for (std::size_t i = 0; i < which.size(); ++i) {
    const std::size_t id = which[i];
    out[i].image = normalize(encode(corpus.sets[id], vocab));
    out[i].label = corpus.labels[id];
    out[i].id = id;
  }
  return out;
}

std::vector<Sample> encode_samples(const Corpus& corpus, const PermissionVocabulary& vocab) {
  std::vector<std::size_t> all(corpus.size());
  std::iota(all.begin(), all.end(), std::size_t{0});
  return encode_samples(corpus, all, vocab);
}

IngestResult ingest(const DatasetManifest& manifest, const PermissionVocabulary& vocab) {
  Corpus corpus = load_corpus(manifest);
  IngestResult out;
  out.samples = encode_samples(corpus, vocab);
  out.failures = std::move(corpus.failures);
  return out;
}

}  // namespace permnet::pipeline
