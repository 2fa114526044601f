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

#include <stdexcept>
#include <string>

namespace permnet {

enum class Errc {
  // Archive / binary XML / text parsing.
  NotAZip,
  UnsupportedCompression,
  TruncatedArchive,
  MissingManifest,
  BadMagic,
  TruncatedChunk,
  UnbalancedElements,
  BadStringIndex,
  MalformedXml,
  MalformedCsv,
  DuplicateEntry,
  EmptyFile,
  VersionMismatch,
  ChecksumMismatch,
  // Data / configuration.
  EmptyCorpus,
  EmptyBatch,
  EmptyDataset,
  AllSamplesFailed,
  TooFewSamples,
  InvalidSpec,
  InvalidArgument,
  ShapeMismatch,
  // Numerics.
  NonFiniteLoss,
  // Environment.
  Io,
};

/// Coarse grouping used by the command line for exit codes.
enum class ErrorCategory { Usage = 1, Io = 2, Parse = 3, Numeric = 4 };

const char* to_string(Errc code);
ErrorCategory category_of(Errc code);

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what);

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace permnet
