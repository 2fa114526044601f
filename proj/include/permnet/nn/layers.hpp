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
#include <string>
#include <vector>

#include "permnet/nn/kernels.hpp"
#include "permnet/nn/tensor.hpp"

namespace permnet::nn {

enum class LayerKind : std::uint8_t { Conv = 0, MaxPool = 1, Dense = 2, Softmax = 3 };
enum class Activation : std::uint8_t { None = 0, ReLU = 1 };
enum class Padding : std::uint8_t { None = 0, Same = 1 };

const char* to_string(LayerKind kind);

/// Static description of one stage. Conv uses kernel, stride, units (output
/// channels) and padding; MaxPool uses kernel and stride; Dense uses units.
struct LayerSpec {
  LayerKind kind = LayerKind::Dense;
  Activation activation = Activation::None;
  std::size_t kernel_h = 0, kernel_w = 0;
  std::size_t stride_h = 0, stride_w = 0;
  std::size_t units = 0;
  Padding padding = Padding::None;

  static LayerSpec conv(std::size_t kernel, std::size_t stride, std::size_t channels, Activation act);
  static LayerSpec max_pool(std::size_t kernel, std::size_t stride);
  static LayerSpec dense(std::size_t units, Activation act);
  static LayerSpec softmax();

  bool operator==(const LayerSpec&) const = default;
};

struct Parameter {
  Tensor value;
  Tensor grad;
};

// Every layer maps a batch (B, ...input_shape) to (B, ...output_shape).
// forward() is const and safe to share across threads; forward_train()
// keeps what backward() needs. backward() overwrites parameter gradients.

class Conv2D {
 public:
  Conv2D(const LayerSpec& spec, const Shape& input_shape);

  const LayerSpec& spec() const { return spec_; }
  const Shape& input_shape() const { return input_shape_; }
  Shape output_shape() const;

  Tensor forward(const Tensor& input) const;
  Tensor forward_train(const Tensor& input);
  Tensor backward(const Tensor& grad_output, bool want_input_grad = true);

  Parameter& weights() { return weights_; }
  Parameter& bias() { return bias_; }
  const Parameter& weights() const { return weights_; }
  const Parameter& bias() const { return bias_; }

 private:
  kernels::ConvGeometry geometry(std::size_t batch) const;
  std::size_t chunk_samples() const;
  Tensor run(const Tensor& input, std::vector<double>& col) const;

  LayerSpec spec_;
  Shape input_shape_;  // (H, W, C)
  Parameter weights_;  // (kh, kw, in, out)
  Parameter bias_;     // (out)
  std::vector<double> col_;       // scratch for one chunk of samples
  std::vector<double> grad_col_;  // scratch for one chunk of samples
  Tensor input_;
  Tensor output_;
};

class MaxPool2D {
 public:
  MaxPool2D(const LayerSpec& spec, const Shape& input_shape);

  const LayerSpec& spec() const { return spec_; }
  const Shape& input_shape() const { return input_shape_; }
  Shape output_shape() const;

  Tensor forward(const Tensor& input) const;
  Tensor forward_train(const Tensor& input);
  Tensor backward(const Tensor& grad_output, bool want_input_grad = true);

 private:
  Tensor run(const Tensor& input, std::vector<std::size_t>& argmax) const;

  LayerSpec spec_;
  Shape input_shape_;
  std::vector<std::size_t> argmax_;
  std::size_t batch_ = 0;
};

/// Affine map over the row-major flattening of its input.
class Dense {
 public:
  Dense(const LayerSpec& spec, const Shape& input_shape);

  const LayerSpec& spec() const { return spec_; }
  const Shape& input_shape() const { return input_shape_; }
  Shape output_shape() const { return {spec_.units}; }
  std::size_t fan_in() const { return shape_size(input_shape_); }

  Tensor forward(const Tensor& input) const;
  Tensor forward_train(const Tensor& input);
  Tensor backward(const Tensor& grad_output, bool want_input_grad = true);

  Parameter& weights() { return weights_; }
  Parameter& bias() { return bias_; }
  const Parameter& weights() const { return weights_; }
  const Parameter& bias() const { return bias_; }

 private:
  Tensor run(const Tensor& input) const;

  LayerSpec spec_;
  Shape input_shape_;
  Parameter weights_;  // (in, out)
  Parameter bias_;     // (out)
  Tensor input_;
  Tensor output_;
};

class Softmax {
 public:
  Softmax(const LayerSpec& spec, const Shape& input_shape);

  const LayerSpec& spec() const { return spec_; }
  const Shape& input_shape() const { return input_shape_; }
  Shape output_shape() const { return input_shape_; }

  Tensor forward(const Tensor& input) const;
  Tensor forward_train(const Tensor& input);
  /// Jacobian-vector product: dz = p * (g - <g, p>) per row.
  Tensor backward(const Tensor& grad_output, bool want_input_grad = true);

 private:
  LayerSpec spec_;
  Shape input_shape_;
  Tensor output_;
};

/// Row-wise softmax with max subtraction.
void softmax_rows(std::size_t rows, std::size_t cols, const double* logits, double* probs);
std::vector<double> softmax(const std::vector<double>& logits);

}  // namespace permnet::nn
