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

#include "permnet/pipeline/cross_validate.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <exception>
#include <random>

#include "permnet/error.hpp"

namespace permnet::pipeline {

namespace {

constexpr std::uint64_t kFoldStream = 100;
constexpr std::uint64_t kValidationStream = 3;

MetricSummary summarize_one(std::span<const FoldResult> folds, std::optional<double> EvalMetrics::*field) {
  MetricSummary s;
  double sum = 0.0;
  for (const auto& f : folds) {
    if (const auto& v = f.metrics.*field) {
      sum += *v;
      ++s.defined_folds;
    }
  }
  if (s.defined_folds == 0) return s;
  const double mean = sum / static_cast<double>(s.defined_folds);
  s.mean = mean;
  if (s.defined_folds > 1) {
    double sq = 0.0;
    for (const auto& f : folds) {
      if (const auto& v = f.metrics.*field) sq += (*v - mean) * (*v - mean);
    }
    s.stddev = std::sqrt(sq / static_cast<double>(s.defined_folds - 1));
  }
  return s;
}

// Stratified seeded carve-out of `fraction` of `train` for validation.
void split_validation(std::vector<std::size_t>& train, std::vector<std::size_t>& validation,
                      const std::vector<ClassLabel>& labels, double fraction, std::uint64_t seed) {
  if (fraction <= 0.0) return;
  std::mt19937_64 rng(seed);
  std::vector<std::size_t> keep;
  for (ClassLabel cls : {ClassLabel::Benign, ClassLabel::Botnet}) {
    std::vector<std::size_t> members;
    for (std::size_t i : train) {
      if (labels[i] == cls) members.push_back(i);
    }
    std::shuffle(members.begin(), members.end(), rng);
    const auto held = static_cast<std::size_t>(std::floor(fraction * static_cast<double>(members.size())));
    validation.insert(validation.end(), members.begin(), members.begin() + static_cast<std::ptrdiff_t>(held));
    keep.insert(keep.end(), members.begin() + static_cast<std::ptrdiff_t>(held), members.end());
  }
  std::sort(keep.begin(), keep.end());
  std::sort(validation.begin(), validation.end());
  train = std::move(keep);
}

FoldResult run_fold(const Corpus& corpus, const FoldPlan& plan, std::size_t fold, const TrainConfig& config,
                    const std::optional<PermissionVocabulary>& shared_vocab, const CvProbe* probe) {
  std::vector<std::size_t> train_ids = plan.train_indices(fold);
  const std::vector<std::size_t> test_ids = plan.test_indices(fold);
  std::vector<std::size_t> val_ids;
  split_validation(train_ids, val_ids, corpus.labels, config.val_split,
                   derive_seed(config.seed, kValidationStream + kFoldStream * (fold + 1)));

  PermissionVocabulary vocab;
  if (shared_vocab) {
    vocab = *shared_vocab;
  } else {
    if (probe && probe->on_vocabulary_input) probe->on_vocabulary_input(fold, train_ids);
    std::vector<PermissionSet> sets;
    std::vector<ClassLabel> labels;
    for (std::size_t i : train_ids) {
      sets.push_back(corpus.sets[i]);
      labels.push_back(corpus.labels[i]);
    }
    vocab = build_vocabulary(sets, labels, config.vocab_size);
  }

  const auto train_samples = encode_samples(corpus, train_ids, vocab);
  const auto val_samples = encode_samples(corpus, val_ids, vocab);
  const auto test_samples = encode_samples(corpus, test_ids, vocab);

  TrainConfig fold_config = config;
  fold_config.seed = derive_seed(config.seed, kFoldStream * (fold + 1));
  TrainHooks hooks;
  if (probe && probe->on_train_batch) {
    hooks.on_batch = [&](std::span<const std::size_t> ids) { probe->on_train_batch(fold, ids); };
  }
  TrainResult trained = train(train_samples, fold_config, val_samples, &hooks);

  if (probe && probe->on_test) probe->on_test(fold, test_ids);
  FoldResult out;
  out.fold = fold;
  out.train_size = train_ids.size();
  out.validation_size = val_ids.size();
  out.test_size = test_ids.size();
  out.vocab_size = vocab.size();
  out.metrics = evaluate(trained.model, test_samples);
  out.trace = std::move(trained.trace);
  return out;
}

}  // namespace

CvSummary summarize(std::span<const FoldResult> folds) {
  CvSummary s;
  s.fpr = summarize_one(folds, &EvalMetrics::fpr);
  s.recall = summarize_one(folds, &EvalMetrics::recall);
  s.precision = summarize_one(folds, &EvalMetrics::precision);
  s.accuracy = summarize_one(folds, &EvalMetrics::accuracy);
  s.f_measure = summarize_one(folds, &EvalMetrics::f_measure);
  return s;
}

CvResult cross_validate(const Corpus& corpus, const TrainConfig& config, const CvProbe* probe, int jobs) {
  config.validate();
  CvResult result;
  result.config = config;
  result.sample_count = corpus.size();
  result.failures = corpus.failures;
  result.plan = make_folds(corpus.labels, config.folds, config.seed);

  std::optional<PermissionVocabulary> shared_vocab;
  if (config.vocab_from_all) {
    std::vector<std::size_t> all(corpus.size());
    std::iota(all.begin(), all.end(), std::size_t{0});
    if (probe && probe->on_vocabulary_input) {
      for (std::size_t f = 0; f < config.folds; ++f) probe->on_vocabulary_input(f, all);
    }
    shared_vocab = build_vocabulary(corpus.sets, corpus.labels, config.vocab_size);
  }

  const std::size_t k = config.folds;
  result.folds.resize(k);
  std::vector<std::exception_ptr> errors(k);
#pragma omp parallel for schedule(dynamic) num_threads(std::max(jobs, 1))
  for (std::size_t f = 0; f < k; ++f) {
    try {
      result.folds[f] = run_fold(corpus, result.plan, f, config, shared_vocab, probe);
    } catch (...) {
      errors[f] = std::current_exception();
    }
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  result.summary = summarize(result.folds);
  return result;
}

CvResult cross_validate(const DatasetManifest& manifest, const TrainConfig& config, const CvProbe* probe, int jobs) {
  return cross_validate(load_corpus(manifest), config, probe, jobs);
}

}  // namespace permnet::pipeline
