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

#include "permnet/nn/layers.hpp"

#include <algorithm>
#include <cmath>

#include "permnet/error.hpp"
#include "permnet/nn/kernels.hpp"

namespace permnet::nn {

namespace {

// Batch size of `input` after checking its trailing dims equal `sample`.
std::size_t batch_of(const Tensor& input, const Shape& sample, const char* layer) {
  const Shape& s = input.shape();
  if (s.size() != sample.size() + 1 || !std::equal(sample.begin(), sample.end(), s.begin() + 1)) {
    throw Error(Errc::ShapeMismatch, std::string(layer) + ": expected (B, " + to_string(sample).substr(1) +
                                         ", got " + to_string(s));
  }
  return s[0];
}

Shape batched(std::size_t batch, const Shape& sample) {
  Shape out{batch};
  out.insert(out.end(), sample.begin(), sample.end());
  return out;
}

void require_rank3(const Shape& s, const char* layer) {
  if (s.size() != 3 || s[0] == 0 || s[1] == 0 || s[2] == 0) {
    throw Error(Errc::ShapeMismatch, std::string(layer) + " needs a non-empty (H, W, C) input, got " + to_string(s));
  }
}

}  // namespace

const char* to_string(LayerKind kind) {
  switch (kind) {
    case LayerKind::Conv: return "Conv";
    case LayerKind::MaxPool: return "MaxPool";
    case LayerKind::Dense: return "Dense";
    case LayerKind::Softmax: return "Softmax";
  }
  return "?";
}

LayerSpec LayerSpec::conv(std::size_t kernel, std::size_t stride, std::size_t channels, Activation act) {
  return {LayerKind::Conv, act, kernel, kernel, stride, stride, channels, Padding::Same};
}

LayerSpec LayerSpec::max_pool(std::size_t kernel, std::size_t stride) {
  return {LayerKind::MaxPool, Activation::None, kernel, kernel, stride, stride, 0, Padding::None};
}

LayerSpec LayerSpec::dense(std::size_t units, Activation act) {
  return {LayerKind::Dense, act, 0, 0, 0, 0, units, Padding::None};
}

LayerSpec LayerSpec::softmax() { return {LayerKind::Softmax, Activation::None, 0, 0, 0, 0, 0, Padding::None}; }

// ---------------------------------------------------------------- Conv2D

Conv2D::Conv2D(const LayerSpec& spec, const Shape& input_shape) : spec_(spec), input_shape_(input_shape) {
  require_rank3(input_shape_, "Conv");
  if (spec.kind != LayerKind::Conv || spec.kernel_h == 0 || spec.kernel_w == 0 || spec.stride_h == 0 ||
      spec.stride_w == 0 || spec.units == 0 || spec.padding != Padding::Same) {
    throw Error(Errc::InvalidSpec, "Conv needs kernel, stride, channels and same padding");
  }
  weights_.value = Tensor({spec.kernel_h, spec.kernel_w, input_shape_[2], spec.units});
  weights_.grad = Tensor(weights_.value.shape());
  bias_.value = Tensor({spec.units});
  bias_.grad = Tensor({spec.units});
}

Shape Conv2D::output_shape() const {
  return {(input_shape_[0] + spec_.stride_h - 1) / spec_.stride_h,
          (input_shape_[1] + spec_.stride_w - 1) / spec_.stride_w, spec_.units};
}

kernels::ConvGeometry Conv2D::geometry(std::size_t batch) const {
  return kernels::ConvGeometry::same(batch, input_shape_[0], input_shape_[1], input_shape_[2], spec_.kernel_h,
                                     spec_.kernel_w, spec_.stride_h, spec_.stride_w);
}

// Samples per im2col chunk, sized to keep the unfolded patches near L2.
// Depends only on the geometry so the dW summation order, and with it the
// result, is the same for every thread count.
std::size_t Conv2D::chunk_samples() const {
  constexpr std::size_t kTargetBytes = std::size_t{1} << 20;
  const auto g = geometry(1);
  const std::size_t per_sample = g.rows() * g.cols() * sizeof(double);
  return std::max<std::size_t>(1, kTargetBytes / per_sample);
}

Tensor Conv2D::run(const Tensor& input, std::vector<double>& col) const {
  const std::size_t batch = batch_of(input, input_shape_, "Conv");
  Tensor out(batched(batch, output_shape()));
  const std::size_t in_stride = shape_size(input_shape_);
  const std::size_t out_stride = shape_size(output_shape());
  const std::size_t step = chunk_samples();
  for (std::size_t b0 = 0; b0 < batch; b0 += step) {
    const auto g = geometry(std::min(step, batch - b0));
    col.resize(g.rows() * g.cols());
    kernels::im2col(g, input.data() + b0 * in_stride, col.data());
    kernels::gemm(kernels::Op::None, kernels::Op::None, g.rows(), spec_.units, g.cols(), col.data(),
                  weights_.value.data(), out.data() + b0 * out_stride);
  }
  kernels::add_bias_activate(batch * out_stride / spec_.units, spec_.units, bias_.value.data(), out.data(),
                             spec_.activation == Activation::ReLU);
  return out;
}

Tensor Conv2D::forward(const Tensor& input) const {
  std::vector<double> col;
  return run(input, col);
}

Tensor Conv2D::forward_train(const Tensor& input) {
  output_ = run(input, col_);
  input_ = input;
  return output_;
}

Tensor Conv2D::backward(const Tensor& grad_output, bool want_input_grad) {
  require_shape(grad_output, output_.shape(), "Conv backward");
  const std::size_t batch = output_.dim(0);
  Tensor grad = grad_output;
  if (spec_.activation == Activation::ReLU) {
    kernels::relu_mask(grad.size(), output_.data(), grad.data());
  }
  kernels::column_sums(grad.size() / spec_.units, spec_.units, grad.data(), bias_.grad.data());

  Tensor grad_input;
  if (want_input_grad) grad_input = Tensor(batched(batch, input_shape_));
  const std::size_t in_stride = shape_size(input_shape_);
  const std::size_t out_stride = shape_size(output_shape());
  const std::size_t step = chunk_samples();
  for (std::size_t b0 = 0; b0 < batch; b0 += step) {
    const auto g = geometry(std::min(step, batch - b0));
    const double* dy = grad.data() + b0 * out_stride;
    // dW += col^T * dY, with the patches unfolded again per chunk.
    col_.resize(g.rows() * g.cols());
    kernels::im2col(g, input_.data() + b0 * in_stride, col_.data());
    kernels::gemm(kernels::Op::Transpose, kernels::Op::None, g.cols(), spec_.units, g.rows(), col_.data(), dy,
                  weights_.grad.data(), b0 > 0);
    if (!want_input_grad) continue;
    // dX = col2im(dY * W^T)
    grad_col_.resize(g.rows() * g.cols());
    kernels::gemm(kernels::Op::None, kernels::Op::Transpose, g.rows(), g.cols(), spec_.units, dy,
                  weights_.value.data(), grad_col_.data());
    kernels::col2im_add(g, grad_col_.data(), grad_input.data() + b0 * in_stride);
  }
  return grad_input;
}

// ------------------------------------------------------------- MaxPool2D

MaxPool2D::MaxPool2D(const LayerSpec& spec, const Shape& input_shape) : spec_(spec), input_shape_(input_shape) {
  require_rank3(input_shape_, "MaxPool");
  if (spec.kind != LayerKind::MaxPool || spec.kernel_h == 0 || spec.kernel_w == 0 || spec.stride_h == 0 ||
      spec.stride_w == 0) {
    throw Error(Errc::InvalidSpec, "MaxPool needs kernel and stride");
  }
  if (input_shape_[0] < spec.kernel_h || input_shape_[1] < spec.kernel_w) {
    throw Error(Errc::ShapeMismatch, "MaxPool input " + to_string(input_shape_) + " smaller than its window");
  }
}

Shape MaxPool2D::output_shape() const {
  return {(input_shape_[0] - spec_.kernel_h) / spec_.stride_h + 1,
          (input_shape_[1] - spec_.kernel_w) / spec_.stride_w + 1, input_shape_[2]};
}

Tensor MaxPool2D::run(const Tensor& input, std::vector<std::size_t>& argmax) const {
  const std::size_t batch = batch_of(input, input_shape_, "MaxPool");
  const auto g = kernels::PoolGeometry::floor(batch, input_shape_[0], input_shape_[1], input_shape_[2],
                                              spec_.kernel_h, spec_.kernel_w, spec_.stride_h, spec_.stride_w);
  Tensor out(batched(batch, output_shape()));
  argmax.resize(out.size());
  kernels::maxpool_forward(g, input.data(), out.data(), argmax.data());
  return out;
}

Tensor MaxPool2D::forward(const Tensor& input) const {
  std::vector<std::size_t> argmax;
  return run(input, argmax);
}

Tensor MaxPool2D::forward_train(const Tensor& input) {
  batch_ = input.shape().empty() ? 0 : input.dim(0);
  return run(input, argmax_);
}

Tensor MaxPool2D::backward(const Tensor& grad_output, bool want_input_grad) {
  require_shape(grad_output, batched(batch_, output_shape()), "MaxPool backward");
  if (!want_input_grad) return {};
  const auto g = kernels::PoolGeometry::floor(batch_, input_shape_[0], input_shape_[1], input_shape_[2],
                                              spec_.kernel_h, spec_.kernel_w, spec_.stride_h, spec_.stride_w);
  Tensor grad_input(batched(batch_, input_shape_));
  kernels::maxpool_backward(g, grad_output.data(), argmax_.data(), grad_input.data());
  return grad_input;
}

// ----------------------------------------------------------------- Dense

Dense::Dense(const LayerSpec& spec, const Shape& input_shape) : spec_(spec), input_shape_(input_shape) {
  if (spec.kind != LayerKind::Dense || spec.units == 0) {
    throw Error(Errc::InvalidSpec, "Dense needs a positive unit count");
  }
  if (input_shape_.empty() || shape_size(input_shape_) == 0) {
    throw Error(Errc::ShapeMismatch, "Dense needs a non-empty input");
  }
  weights_.value = Tensor({fan_in(), spec.units});
  weights_.grad = Tensor(weights_.value.shape());
  bias_.value = Tensor({spec.units});
  bias_.grad = Tensor({spec.units});
}

Tensor Dense::run(const Tensor& input) const {
  const std::size_t batch = batch_of(input, input_shape_, "Dense");
  Tensor out({batch, spec_.units});
  kernels::gemm(kernels::Op::None, kernels::Op::None, batch, spec_.units, fan_in(), input.data(),
                weights_.value.data(), out.data());
  kernels::add_bias_activate(batch, spec_.units, bias_.value.data(), out.data(),
                             spec_.activation == Activation::ReLU);
  return out;
}

Tensor Dense::forward(const Tensor& input) const { return run(input); }

Tensor Dense::forward_train(const Tensor& input) {
  input_ = input;
  output_ = run(input);
  return output_;
}

Tensor Dense::backward(const Tensor& grad_output, bool want_input_grad) {
  require_shape(grad_output, output_.shape(), "Dense backward");
  const std::size_t batch = output_.dim(0);
  Tensor grad = grad_output;
  if (spec_.activation == Activation::ReLU) {
    kernels::relu_mask(grad.size(), output_.data(), grad.data());
  }
  kernels::gemm(kernels::Op::Transpose, kernels::Op::None, fan_in(), spec_.units, batch, input_.data(),
                grad.data(), weights_.grad.data());
  kernels::column_sums(batch, spec_.units, grad.data(), bias_.grad.data());
  if (!want_input_grad) return {};
  Tensor grad_input(batched(batch, input_shape_));
  kernels::gemm(kernels::Op::None, kernels::Op::Transpose, batch, fan_in(), spec_.units, grad.data(),
                weights_.value.data(), grad_input.data());
  return grad_input;
}

// --------------------------------------------------------------- Softmax

void softmax_rows(std::size_t rows, std::size_t cols, const double* logits, double* probs) {
  for (std::size_t r = 0; r < rows; ++r) {
    const double* z = logits + r * cols;
    double* p = probs + r * cols;
    const double top = *std::max_element(z, z + cols);
    double sum = 0.0;
    for (std::size_t c = 0; c < cols; ++c) {
      p[c] = std::exp(z[c] - top);
      sum += p[c];
    }
    for (std::size_t c = 0; c < cols; ++c) p[c] /= sum;
  }
}

std::vector<double> softmax(const std::vector<double>& logits) {
  std::vector<double> out(logits.size());
  if (!logits.empty()) softmax_rows(1, logits.size(), logits.data(), out.data());
  return out;
}

Softmax::Softmax(const LayerSpec& spec, const Shape& input_shape) : spec_(spec), input_shape_(input_shape) {
  if (spec.kind != LayerKind::Softmax) {
    throw Error(Errc::InvalidSpec, "not a softmax spec");
  }
  if (input_shape_.size() != 1 || input_shape_[0] == 0) {
    throw Error(Errc::ShapeMismatch, "Softmax needs a vector input, got " + to_string(input_shape_));
  }
}

Tensor Softmax::forward(const Tensor& input) const {
  const std::size_t batch = batch_of(input, input_shape_, "Softmax");
  Tensor out(input.shape());
  softmax_rows(batch, input_shape_[0], input.data(), out.data());
  return out;
}

Tensor Softmax::forward_train(const Tensor& input) {
  output_ = forward(input);
  return output_;
}

Tensor Softmax::backward(const Tensor& grad_output, bool want_input_grad) {
  require_shape(grad_output, output_.shape(), "Softmax backward");
  if (!want_input_grad) return {};
  const std::size_t rows = output_.dim(0);
  const std::size_t cols = input_shape_[0];
  Tensor grad_input(output_.shape());
  for (std::size_t r = 0; r < rows; ++r) {
    const double* p = output_.data() + r * cols;
    const double* g = grad_output.data() + r * cols;
    double dot = 0.0;
    for (std::size_t c = 0; c < cols; ++c) dot += g[c] * p[c];
    for (std::size_t c = 0; c < cols; ++c) grad_input[r * cols + c] = p[c] * (g[c] - dot);
  }
  return grad_input;
}

}  // namespace permnet::nn
