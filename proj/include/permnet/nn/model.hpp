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
#include <span>
#include <variant>
#include <vector>

#include "permnet/nn/adam.hpp"
#include "permnet/nn/layers.hpp"
#include "permnet/nn/tensor.hpp"

namespace permnet::nn {

using Layer = std::variant<Conv2D, MaxPool2D, Dense, Softmax>;

/// Ordered layer stack ending in a two-way softmax. Shapes are validated at
/// construction; weights are drawn Glorot-uniform from a seeded stream,
/// biases start at zero.
class CnnModel {
 public:
  CnnModel(Shape input_shape, const std::vector<LayerSpec>& specs, std::uint64_t seed);

  const Shape& input_shape() const { return input_shape_; }
  std::uint64_t seed() const { return seed_; }
  const std::vector<Layer>& layers() const { return layers_; }
  std::vector<LayerSpec> specs() const;

  /// Per-sample output shape after each layer.
  std::vector<Shape> shape_trace() const;

  std::vector<Parameter*> parameters();
  std::vector<const Parameter*> parameters() const;
  std::size_t parameter_count() const;

  /// (B, H, W, C) -> (B, 2) class probabilities; column 1 is botnet.
  Tensor forward(const Tensor& batch) const;

  /// Like forward() but keeps activations for backward.
  Tensor forward_train(const Tensor& batch);

  /// Backpropagates d loss / d probabilities through every layer.
  void backward(const Tensor& grad_probs);

  /// Backpropagates d loss / d logits, skipping the final softmax.
  void backward_from_logits(const Tensor& grad_logits);

 private:
  void backward_range(Tensor grad, std::size_t end);

  Shape input_shape_;
  std::uint64_t seed_;
  std::vector<Layer> layers_;
};

/// The 11-stage network: four Conv+MaxPool pairs (5x5/32, 5x5/128,
/// 3x3/128, 1x1/256), Dense 256, Dense 16, Dense 2 + softmax.
std::vector<LayerSpec> default_layer_specs();
CnnModel build_default_model(std::uint64_t seed, std::size_t image_size = 41);

/// Stacks n same-size images (n, n, 1) into a (B, n, n, 1) batch.
Tensor stack_batch(std::span<const Tensor* const> samples);

/// Forward, BCE on the botnet probability, full backward, one Adam step.
/// Returns the batch loss; throws NonFiniteLoss on divergence.
double train_step(CnnModel& model, const Tensor& batch, std::span<const int> labels, AdamState& adam,
                  Tensor* probs_out = nullptr);

void save_model(const CnnModel& model, const std::filesystem::path& path);
CnnModel load_model(const std::filesystem::path& path);
std::vector<std::uint8_t> serialize_model(const CnnModel& model);
CnnModel deserialize_model(std::span<const std::uint8_t> bytes);

}  // namespace permnet::nn
