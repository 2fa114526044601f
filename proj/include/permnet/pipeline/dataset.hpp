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
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "permnet/manifest.hpp"
#include "permnet/nn/tensor.hpp"
#include "permnet/vocabulary.hpp"

namespace permnet::pipeline {

struct DatasetRecord {
  std::string path;
  ClassLabel label = ClassLabel::Benign;
  SourceKind kind = SourceKind::PermissionList;

  bool operator==(const DatasetRecord&) const = default;
};

/// CSV with header `path,label,kind`. Relative paths are resolved against
/// `base_dir` (the CSV's directory when loaded from disk).
struct DatasetManifest {
  std::vector<DatasetRecord> records;
  std::filesystem::path base_dir;

  std::filesystem::path resolve(const DatasetRecord& record) const;
};

DatasetManifest parse_dataset_csv(std::string_view text, const std::filesystem::path& base_dir = {});
DatasetManifest load_dataset_manifest(const std::filesystem::path& csv_path);
std::string format_dataset_csv(const DatasetManifest& manifest);

struct IngestFailure {
  std::size_t record = 0;
  std::string path;
  std::string message;
};

/// Extracted permission sets for the records that could be read, in record
/// order. `record_index[i]` is the manifest row of `sets[i]`.
struct Corpus {
  std::vector<PermissionSet> sets;
  std::vector<ClassLabel> labels;
  std::vector<std::size_t> record_index;
  std::vector<IngestFailure> failures;

  std::size_t size() const { return sets.size(); }
};

/// Reads every record, collecting per-record failures instead of aborting.
/// Throws AllSamplesFailed if nothing could be read.
Corpus load_corpus(const DatasetManifest& manifest);

struct Sample {
  nn::Tensor image;  // (n, n, 1)
  ClassLabel label = ClassLabel::Benign;
  std::size_t id = 0;  // position in the source Corpus
};

/// Encodes and normalizes the selected corpus entries against `vocab`.
std::vector<Sample> encode_samples(const Corpus& corpus, std::span<const std::size_t> which,
                                   const PermissionVocabulary& vocab);
std::vector<Sample> encode_samples(const Corpus& corpus, const PermissionVocabulary& vocab);

struct IngestResult {
  std::vector<Sample> samples;
  std::vector<IngestFailure> failures;
};

/// extract -> encode -> normalize for every record.
IngestResult ingest(const DatasetManifest& manifest, const PermissionVocabulary& vocab);

}  // namespace permnet::pipeline
