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

#include "permnet/error.hpp"

namespace permnet {

const char* to_string(Errc code) {
  switch (code) {
    case Errc::NotAZip: return "NotAZip";
    case Errc::UnsupportedCompression: return "UnsupportedCompression";
    case Errc::TruncatedArchive: return "TruncatedArchive";
    case Errc::MissingManifest: return "MissingManifest";
    case Errc::BadMagic: return "BadMagic";
    case Errc::TruncatedChunk: return "TruncatedChunk";
    case Errc::UnbalancedElements: return "UnbalancedElements";
    case Errc::BadStringIndex: return "BadStringIndex";
    case Errc::MalformedXml: return "MalformedXml";
    case Errc::MalformedCsv: return "MalformedCsv";
    case Errc::DuplicateEntry: return "DuplicateEntry";
    case Errc::EmptyFile: return "EmptyFile";
    case Errc::VersionMismatch: return "VersionMismatch";
    case Errc::ChecksumMismatch: return "ChecksumMismatch";
    case Errc::EmptyCorpus: return "EmptyCorpus";
    case Errc::EmptyBatch: return "EmptyBatch";
    case Errc::EmptyDataset: return "EmptyDataset";
    case Errc::AllSamplesFailed: return "AllSamplesFailed";
    case Errc::TooFewSamples: return "TooFewSamples";
    case Errc::InvalidSpec: return "InvalidSpec";
    case Errc::InvalidArgument: return "InvalidArgument";
    case Errc::ShapeMismatch: return "ShapeMismatch";
    case Errc::NonFiniteLoss: return "NonFiniteLoss";
    case Errc::Io: return "IoError";
  }
  return "Unknown";
}

ErrorCategory category_of(Errc code) {
  switch (code) {
    case Errc::InvalidArgument:
      return ErrorCategory::Usage;
    case Errc::Io:
      return ErrorCategory::Io;
    case Errc::NonFiniteLoss:
      return ErrorCategory::Numeric;
    default:
      return ErrorCategory::Parse;
  }
}

Error::Error(Errc code, const std::string& what)
    : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

}  // namespace permnet
