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
#include <vector>

#include "permnet/manifest.hpp"
#include "permnet/nn/tensor.hpp"
#include "permnet/vocabulary.hpp"

namespace permnet {

/// n x n permission co-occurrence image. Cell (i, j) is 0 when the
/// application requests both vocabulary permissions i and j, else 255.
class CoOccurrenceImage {
 public:
  explicit CoOccurrenceImage(std::size_t n, std::uint8_t fill = 255) : n_(n), pixels_(n * n, fill) {}

  std::size_t n() const { return n_; }
  std::uint8_t at(std::size_t i, std::size_t j) const { return pixels_[i * n_ + j]; }
  std::uint8_t& at(std::size_t i, std::size_t j) { return pixels_[i * n_ + j]; }
  const std::vector<std::uint8_t>& pixels() const { return pixels_; }

  std::size_t count_zeros() const;

  bool operator==(const CoOccurrenceImage&) const = default;

 private:
  std::size_t n_;
  std::vector<std::uint8_t> pixels_;
};

struct EncodeDiagnostics {
  std::size_t in_vocabulary = 0;
  std::size_t out_of_vocabulary = 0;
};

CoOccurrenceImage encode(const PermissionSet& perms, const PermissionVocabulary& vocab,
                         EncodeDiagnostics* diagnostics = nullptr);

/// (n, n, 1) tensor holding pixel / 255.
nn::Tensor normalize(const CoOccurrenceImage& image);

/// Binary PGM (P5), row-major.
std::vector<std::uint8_t> to_pgm(const CoOccurrenceImage& image);
void dump_pgm(const CoOccurrenceImage& image, const std::filesystem::path& path);

}  // namespace permnet
