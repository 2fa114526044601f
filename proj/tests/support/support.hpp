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

// Shared helpers for the unit and acceptance suites: scratch directories,
// random manifests, and scalar oracles written independently of the library.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "permnet/manifest.hpp"

namespace permnet::testing {

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag);
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

void write_bytes(const std::filesystem::path& path, const std::vector<std::uint8_t>& bytes);

/// Random printable-or-Unicode identifier-ish string (valid UTF-8).
std::string random_text(std::mt19937_64& rng, std::size_t max_len, bool allow_unicode);

/// Random manifest tree: a <manifest> root holding uses-permission elements
/// (some blank, some sdk-23) and unrelated nested elements. `expected`
/// receives the permission names an extractor must report.
Element random_manifest(std::mt19937_64& rng, bool allow_unicode, std::vector<std::string>* expected = nullptr);

/// Text XML rendering of an element tree with the android prefix bound.
std::string to_plain_xml(const Element& root);

struct PgmImage {
  std::size_t width = 0, height = 0;
  std::vector<std::uint8_t> pixels;
};
PgmImage read_pgm(const std::filesystem::path& path);

// ---- scalar oracles -------------------------------------------------------

namespace oracle {

struct Metrics {
  std::optional<double> fpr, recall, precision, accuracy, f_measure;
};

inline std::optional<double> ratio(double num, double den) {
  if (den == 0.0) return std::nullopt;
  return num / den;
}

inline Metrics metrics(double tp, double tn, double fp, double fn) {
  Metrics m;
  m.fpr = ratio(fp, fp + tn);
  m.recall = ratio(tp, tp + fn);
  m.precision = ratio(tp, tp + fp);
  m.accuracy = ratio(tp + tn, tp + tn + fp + fn);
  if (m.precision && m.recall && *m.precision + *m.recall > 0) {
    m.f_measure = 2.0 * *m.precision * *m.recall / (*m.precision + *m.recall);
  }
  return m;
}

inline double bce(const std::vector<double>& p, const std::vector<int>& y) {
  double total = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double q = std::min(std::max(p[i], 1e-7), 1.0 - 1e-7);
    total += y[i] == 1 ? -std::log(q) : -std::log(1.0 - q);
  }
  return total / static_cast<double>(p.size());
}

/// One Adam update of a single scalar at 1-based step `t`.
inline void adam(double& w, double g, double& m, double& v, int t, double lr, double b1, double b2, double eps) {
  m = b1 * m + (1.0 - b1) * g;
  v = b2 * v + (1.0 - b2) * g * g;
  double b1t = 1.0, b2t = 1.0;
  for (int i = 0; i < t; ++i) {
    b1t *= b1;
    b2t *= b2;
  }
  const double mhat = m / (1.0 - b1t);
  const double vhat = v / (1.0 - b2t);
  w -= lr * mhat / (std::sqrt(vhat) + eps);
}

/// O(n^2) co-occurrence image by linear membership search.
inline std::vector<std::uint8_t> cooccurrence(const std::vector<std::string>& perms,
                                              const std::vector<std::string>& vocab) {
  auto has = [&](const std::string& p) { return std::find(perms.begin(), perms.end(), p) != perms.end(); };
  const std::size_t n = vocab.size();
  std::vector<std::uint8_t> img(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) img[i * n + j] = (has(vocab[i]) && has(vocab[j])) ? 0 : 255;
  }
  return img;
}

inline double sample_stddev(const std::vector<double>& xs) {
  double mean = 0.0;
  for (double x : xs) mean += x;
  mean /= static_cast<double>(xs.size());
  double ss = 0.0;
  for (double x : xs) ss += (x - mean) * (x - mean);
  return std::sqrt(ss / static_cast<double>(xs.size() - 1));
}

}  // namespace oracle

/// |a - n| <= rel * max(|a|, |n|), or both below an absolute floor.
inline bool grad_close(double analytic, double numeric, double rel = 1e-4, double floor = 1e-9) {
  const double diff = std::abs(analytic - numeric);
  return diff <= floor || diff <= rel * std::max(std::abs(analytic), std::abs(numeric));
}

}  // namespace permnet::testing
