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
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "permnet/nn/adam.hpp"
#include "permnet/nn/model.hpp"
#include "permnet/pipeline/dataset.hpp"
#include "permnet/pipeline/metrics.hpp"

namespace permnet::pipeline {

struct TrainConfig {
  std::size_t epochs = 25;
  std::size_t batch_size = 32;
  nn::AdamConfig adam;
  std::uint64_t seed = 1;
  std::size_t vocab_size = kDefaultVocabularySize;
  std::size_t folds = 10;
  /// Fraction of each training set held out per epoch for val_acc; 0 disables.
  double val_split = 0.0;
  /// Build one vocabulary from the whole corpus instead of per training fold.
  bool vocab_from_all = false;

  void validate() const;
};

/// JSON object with any subset of the TrainConfig fields.
TrainConfig parse_train_config(std::string_view json_text, TrainConfig base = {});
std::string format_train_config(const TrainConfig& config);

struct EpochStats {
  std::size_t epoch = 0;
  double train_loss = 0.0;
  double train_accuracy = 0.0;
  std::optional<double> val_accuracy;

  bool operator==(const EpochStats&) const = default;
};

/// CSV `epoch,train_loss,train_acc[,val_acc]`.
std::string format_trace_csv(std::span<const EpochStats> trace);

struct TrainHooks {
  /// Called with the Sample::id values of every mini-batch before its step.
  std::function<void(std::span<const std::size_t>)> on_batch;
};

struct TrainResult {
  nn::CnnModel model;
  std::vector<EpochStats> trace;
};

/// Mini-batch Adam training of the default network sized to the samples'
/// image. Samples are reshuffled every epoch from a seeded stream; training
/// accuracy is taken from the same forward passes that produce the loss.
TrainResult train(std::span<const Sample> samples, const TrainConfig& config,
                  std::span<const Sample> validation = {}, const TrainHooks* hooks = nullptr);

struct Prediction {
  ClassLabel label = ClassLabel::Benign;
  double botnet_probability = 0.0;

  bool operator==(const Prediction&) const = default;
};

/// argmax rule; an exact tie goes to benign (index 0).
Prediction prediction_from_probs(double benign_p, double botnet_p);

std::vector<Prediction> predict_samples(const nn::CnnModel& model, std::span<const Sample> samples,
                                        std::size_t batch_size = 64);
EvalMetrics evaluate(const nn::CnnModel& model, std::span<const Sample> samples);

/// extract -> encode -> normalize -> forward for one file.
Prediction predict(const nn::CnnModel& model, const PermissionVocabulary& vocab,
                   const std::filesystem::path& sample, SourceKind kind);

}  // namespace permnet::pipeline
