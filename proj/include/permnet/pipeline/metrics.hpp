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
#include <optional>

#include "permnet/vocabulary.hpp"

namespace permnet::pipeline {

/// Botnet is the positive class.
struct ConfusionCounts {
  std::size_t tp = 0, tn = 0, fp = 0, fn = 0;

  std::size_t total() const { return tp + tn + fp + fn; }
  void add(ClassLabel truth, ClassLabel predicted);

  bool operator==(const ConfusionCounts&) const = default;
};

/// A ratio whose denominator is zero is reported as std::nullopt.
struct EvalMetrics {
  ConfusionCounts counts;
  std::optional<double> fpr;        // FP / (FP + TN)
  std::optional<double> recall;     // TP / (TP + FN)
  std::optional<double> precision;  // TP / (TP + FP)
  std::optional<double> accuracy;   // (TP + TN) / total
  std::optional<double> f_measure;  // 2PR / (P + R)

  bool operator==(const EvalMetrics&) const = default;
};

EvalMetrics compute_metrics(const ConfusionCounts& counts);

}  // namespace permnet::pipeline
