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
#include <string>
#include <string_view>
#include <vector>

#include "permnet/manifest.hpp"
#include "permnet/pipeline/dataset.hpp"
#include "permnet/vocabulary.hpp"

namespace permnet::pipeline {

/// Two-class corpus over a fixed permission pool. The first
/// `botnet_signature` pool entries form the botnet signature, the next
/// `benign_signature` the benign one. A sample takes each permission of its
/// own signature with probability `signature_rate` and every other pool
/// permission with probability `noise_rate`.
struct SynthSpec {
  std::size_t botnet_count = 200;
  std::size_t benign_count = 200;
  std::size_t pool_size = 60;
  std::size_t botnet_signature = 10;
  std::size_t benign_signature = 6;
  double signature_rate = 0.9;
  double noise_rate = 0.05;
  std::uint64_t seed = 1;

  void validate() const;
  /// Probability that a sample of `label` requests pool entry `index`.
  double inclusion_probability(ClassLabel label, std::size_t index) const;
};

SynthSpec parse_synth_spec(std::string_view json_text, SynthSpec base = {});

/// Real Android permission names first, then generated placeholders.
std::vector<std::string> synthetic_permission_pool(std::size_t size);

struct SyntheticCorpus {
  std::vector<PermissionSet> sets;  // botnet samples first, then benign
  std::vector<ClassLabel> labels;
  DatasetManifest manifest;  // relative permission-list paths
};

SyntheticCorpus generate_synthetic_corpus(const SynthSpec& spec);

/// Writes one permission-list file per sample plus `dataset.csv` into `dir`
/// and returns the manifest as loaded from that CSV.
DatasetManifest write_synthetic_corpus(const SynthSpec& spec, const std::filesystem::path& dir);

inline constexpr std::string_view kSyntheticManifestName = "dataset.csv";

}  // namespace permnet::pipeline
