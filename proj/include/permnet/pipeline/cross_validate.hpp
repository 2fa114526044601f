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
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "permnet/pipeline/dataset.hpp"
#include "permnet/pipeline/folds.hpp"
#include "permnet/pipeline/metrics.hpp"
#include "permnet/pipeline/trainer.hpp"

namespace permnet::pipeline {

struct FoldResult {
  std::size_t fold = 0;
  std::size_t train_size = 0;
  std::size_t validation_size = 0;
  std::size_t test_size = 0;
  std::size_t vocab_size = 0;
  EvalMetrics metrics;
  std::vector<EpochStats> trace;
};

struct MetricSummary {
  std::optional<double> mean;
  std::optional<double> stddev;  // sample (n - 1) deviation over folds where defined
  std::size_t defined_folds = 0;
};

struct CvSummary {
  MetricSummary fpr, recall, precision, accuracy, f_measure;
};

CvSummary summarize(std::span<const FoldResult> folds);

/// Instrumentation for leakage checks. Indices are Corpus positions. With
/// jobs > 1 the callbacks may run concurrently.
struct CvProbe {
  std::function<void(std::size_t fold, std::span<const std::size_t>)> on_vocabulary_input;
  std::function<void(std::size_t fold, std::span<const std::size_t>)> on_train_batch;
  std::function<void(std::size_t fold, std::span<const std::size_t>)> on_test;
};

struct CvResult {
  TrainConfig config;
  FoldPlan plan;
  std::size_t sample_count = 0;
  std::vector<FoldResult> folds;  // ordered by fold index
  CvSummary summary;
  std::vector<IngestFailure> failures;
};

/// For each fold: vocabulary from the training folds (or the whole corpus
/// with config.vocab_from_all), train on the other k-1 folds, evaluate on
/// the held-out fold. Folds may run on `jobs` workers.
CvResult cross_validate(const Corpus& corpus, const TrainConfig& config, const CvProbe* probe = nullptr,
                        int jobs = 1);
CvResult cross_validate(const DatasetManifest& manifest, const TrainConfig& config, const CvProbe* probe = nullptr,
                        int jobs = 1);

}  // namespace permnet::pipeline
