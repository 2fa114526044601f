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

#include "permnet/pipeline/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <random>

#include "json.hpp"
#include "permnet/encoder.hpp"
#include "permnet/error.hpp"
#include "permnet/pipeline/folds.hpp"

namespace permnet::pipeline {

namespace {

constexpr std::uint64_t kInitStream = 1;
constexpr std::uint64_t kShuffleStream = 2;

nn::Tensor batch_of(std::span<const Sample> samples, std::span<const std::size_t> order) {
  std::vector<const nn::Tensor*> ptrs;
  ptrs.reserve(order.size());
  for (std::size_t i : order) ptrs.push_back(&samples[i].image);
  return nn::stack_batch(ptrs);
}

}  // namespace

void TrainConfig::validate() const {
  if (batch_size == 0 || vocab_size == 0 || folds == 0) {
    throw Error(Errc::InvalidArgument, "batch size, vocabulary size and fold count must be positive");
  }
  if (!(adam.learning_rate > 0.0) || !(adam.beta1 >= 0.0 && adam.beta1 < 1.0) ||
      !(adam.beta2 >= 0.0 && adam.beta2 < 1.0) || !(adam.epsilon > 0.0)) {
    throw Error(Errc::InvalidArgument, "Adam hyperparameters out of range");
  }
  if (!(val_split >= 0.0 && val_split < 1.0)) {
    throw Error(Errc::InvalidArgument, "val_split must be in [0, 1)");
  }
}

TrainConfig parse_train_config(std::string_view json_text, TrainConfig cfg) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::InvalidSpec, std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) {
    throw Error(Errc::InvalidSpec, "config must be a JSON object");
  }
  try {
    for (const auto& [key, value] : j.items()) {
      if (key == "epochs") cfg.epochs = value.get<std::size_t>();
      else if (key == "batch_size") cfg.batch_size = value.get<std::size_t>();
      else if (key == "learning_rate") cfg.adam.learning_rate = value.get<double>();
      else if (key == "beta1") cfg.adam.beta1 = value.get<double>();
      else if (key == "beta2") cfg.adam.beta2 = value.get<double>();
      else if (key == "epsilon") cfg.adam.epsilon = value.get<double>();
      else if (key == "seed") cfg.seed = value.get<std::uint64_t>();
      else if (key == "vocab_size") cfg.vocab_size = value.get<std::size_t>();
      else if (key == "folds") cfg.folds = value.get<std::size_t>();
      else if (key == "val_split") cfg.val_split = value.get<double>();
      else if (key == "vocab_from_all") cfg.vocab_from_all = value.get<bool>();
      else throw Error(Errc::InvalidSpec, "unknown config key '" + key + "'");
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::InvalidSpec, std::string("bad config value: ") + e.what());
  }
  try {
    cfg.validate();
  } catch (const Error& e) {
    throw Error(Errc::InvalidSpec, e.what());
  }
  return cfg;
}

std::string format_train_config(const TrainConfig& c) {
  nlohmann::ordered_json j;
  j["epochs"] = c.epochs;
  j["batch_size"] = c.batch_size;
  j["learning_rate"] = c.adam.learning_rate;
  j["beta1"] = c.adam.beta1;
  j["beta2"] = c.adam.beta2;
  j["epsilon"] = c.adam.epsilon;
  j["seed"] = c.seed;
  j["vocab_size"] = c.vocab_size;
  j["folds"] = c.folds;
  j["val_split"] = c.val_split;
  j["vocab_from_all"] = c.vocab_from_all;
  return j.dump(2);
}

std::string format_trace_csv(std::span<const EpochStats> trace) {
  const bool with_val = std::any_of(trace.begin(), trace.end(), [](const auto& e) { return e.val_accuracy.has_value(); });
  std::string out = with_val ? "epoch,train_loss,train_acc,val_acc\n" : "epoch,train_loss,train_acc\n";
  char buf[128];
  for (const auto& e : trace) {
    std::snprintf(buf, sizeof buf, "%zu,%.17g,%.17g", e.epoch, e.train_loss, e.train_accuracy);
    out += buf;
    if (with_val) {
      if (e.val_accuracy) {
        std::snprintf(buf, sizeof buf, ",%.17g", *e.val_accuracy);
        out += buf;
      } else {
        out += ",";
      }
    }
    out += '\n';
  }
  return out;
}

Prediction prediction_from_probs(double benign_p, double botnet_p) {
  return {botnet_p > benign_p ? ClassLabel::Botnet : ClassLabel::Benign, botnet_p};
}

TrainResult train(std::span<const Sample> samples, const TrainConfig& config, std::span<const Sample> validation,
                  const TrainHooks* hooks) {
  config.validate();
  if (samples.empty()) {
    throw Error(Errc::EmptyDataset, "no training samples");
  }
  const bool has_botnet = std::any_of(samples.begin(), samples.end(), [](const Sample& s) { return s.label == ClassLabel::Botnet; });
  const bool has_benign = std::any_of(samples.begin(), samples.end(), [](const Sample& s) { return s.label == ClassLabel::Benign; });
  if (!has_botnet || !has_benign) {
    throw Error(Errc::EmptyDataset, "training needs both classes");
  }
  const nn::Shape& image = samples.front().image.shape();
  if (image.size() != 3 || image[0] != image[1] || image[2] != 1) {
    throw Error(Errc::ShapeMismatch, "samples must be (n, n, 1) images, got " + nn::to_string(image));
  }

  TrainResult result{nn::build_default_model(derive_seed(config.seed, kInitStream), image[0]), {}};
  auto params = result.model.parameters();
  nn::AdamState adam(params, config.adam);
  std::mt19937_64 rng(derive_seed(config.seed, kShuffleStream));

  std::vector<std::size_t> order(samples.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::vector<std::size_t> ids;
  std::vector<int> labels;
  nn::Tensor probs;

  for (std::size_t epoch = 1; epoch <= config.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    double loss_sum = 0.0;
    std::size_t correct = 0;
    for (std::size_t start = 0; start < order.size(); start += config.batch_size) {
      const std::size_t end = std::min(order.size(), start + config.batch_size);
      const std::span<const std::size_t> chunk(order.data() + start, end - start);
      ids.clear();
      labels.clear();
      for (std::size_t i : chunk) {
        ids.push_back(samples[i].id);
        labels.push_back(samples[i].label == ClassLabel::Botnet ? 1 : 0);
      }
      if (hooks && hooks->on_batch) hooks->on_batch(ids);

      const double loss = nn::train_step(result.model, batch_of(samples, chunk), labels, adam, &probs);
      loss_sum += loss * static_cast<double>(chunk.size());
      for (std::size_t b = 0; b < chunk.size(); ++b) {
        const auto p = prediction_from_probs(probs[2 * b], probs[2 * b + 1]);
        if ((p.label == ClassLabel::Botnet) == (labels[b] == 1)) ++correct;
      }
    }
    EpochStats stats;
    stats.epoch = epoch;
    stats.train_loss = loss_sum / static_cast<double>(samples.size());
    stats.train_accuracy = static_cast<double>(correct) / static_cast<double>(samples.size());
    if (!validation.empty()) {
      stats.val_accuracy = evaluate(result.model, validation).accuracy;
    }
    result.trace.push_back(stats);
  }
  return result;
}

std::vector<Prediction> predict_samples(const nn::CnnModel& model, std::span<const Sample> samples,
                                        std::size_t batch_size) {
  std::vector<Prediction> out;
  out.reserve(samples.size());
  std::vector<std::size_t> order;
  for (std::size_t start = 0; start < samples.size(); start += batch_size) {
    const std::size_t end = std::min(samples.size(), start + batch_size);
    order.resize(end - start);
    std::iota(order.begin(), order.end(), start);
    const nn::Tensor probs = model.forward(batch_of(samples, order));
    for (std::size_t b = 0; b < order.size(); ++b) {
      out.push_back(prediction_from_probs(probs[2 * b], probs[2 * b + 1]));
    }
  }
  return out;
}

EvalMetrics evaluate(const nn::CnnModel& model, std::span<const Sample> samples) {
  if (samples.empty()) {
    throw Error(Errc::EmptyDataset, "nothing to evaluate");
  }
  const auto predictions = predict_samples(model, samples);
  ConfusionCounts counts;
  for (std::size_t i = 0; i < samples.size(); ++i) counts.add(samples[i].label, predictions[i].label);
  return compute_metrics(counts);
}

Prediction predict(const nn::CnnModel& model, const PermissionVocabulary& vocab, const std::filesystem::path& sample,
                   SourceKind kind) {
  const PermissionSet perms = load_permission_set(sample, kind);
  const nn::Tensor image = normalize(encode(perms, vocab));
  const nn::Tensor* one[] = {&image};
  const nn::Tensor probs = model.forward(nn::stack_batch(one));
  return prediction_from_probs(probs[0], probs[1]);
}

}  // namespace permnet::pipeline
