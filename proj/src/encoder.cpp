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

#include "permnet/encoder.hpp"

#include <algorithm>
#include <fstream>
#include <string>

#include "permnet/error.hpp"

namespace permnet {

std::size_t CoOccurrenceImage::count_zeros() const {
  return static_cast<std::size_t>(std::count(pixels_.begin(), pixels_.end(), std::uint8_t{0}));
}

CoOccurrenceImage encode(const PermissionSet& perms, const PermissionVocabulary& vocab,
                         EncodeDiagnostics* diagnostics) {
  if (vocab.empty()) {
    throw Error(Errc::InvalidArgument, "cannot encode against an empty vocabulary");
  }
  std::vector<std::size_t> present;
  std::size_t dropped = 0;
  for (const auto& p : perms.permissions) {
    if (auto idx = vocab.index_of(p)) {
      present.push_back(*idx);
    } else {
      ++dropped;
    }
  }
  CoOccurrenceImage image(vocab.size());
  for (std::size_t i : present) {
    for (std::size_t j : present) image.at(i, j) = 0;
  }
  if (diagnostics) {
    diagnostics->in_vocabulary = present.size();
    diagnostics->out_of_vocabulary = dropped;
  }
  return image;
}

nn::Tensor normalize(const CoOccurrenceImage& image) {
  const std::size_t n = image.n();
  nn::Tensor out({n, n, 1});
  const auto& px = image.pixels();
  for (std::size_t i = 0; i < px.size(); ++i) out[i] = px[i] / 255.0;
  return out;
}

std::vector<std::uint8_t> to_pgm(const CoOccurrenceImage& image) {
  const std::string n = std::to_string(image.n());
  const std::string header = "P5\n" + n + " " + n + "\n255\n";
  std::vector<std::uint8_t> out(header.begin(), header.end());
  out.insert(out.end(), image.pixels().begin(), image.pixels().end());
  return out;
}

void dump_pgm(const CoOccurrenceImage& image, const std::filesystem::path& path) {
  const auto bytes = to_pgm(image);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw Error(Errc::Io, "cannot write " + path.string());
  }
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) {
    throw Error(Errc::Io, "write failed for " + path.string());
  }
}

}  // namespace permnet
