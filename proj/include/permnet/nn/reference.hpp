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

// Serial reference kernels written as plain nested loops straight from the
// definitions. They share no code with the optimized kernels and exist to
// check them (tests) and to measure them (bench).

#include <cstddef>

#include "permnet/nn/tensor.hpp"

namespace permnet::nn::reference {

/// C = A * B, row-major, i-j-k loop order.
void gemm(std::size_t m, std::size_t n, std::size_t k, const double* a, const double* b, double* c);

/// Same-padded cross-correlation over (B, H, W, Cin) with (kh, kw, Cin, Cout) weights.
Tensor conv2d_forward(const Tensor& input, const Tensor& weights, const Tensor& bias, std::size_t stride_h,
                      std::size_t stride_w, bool relu);

struct ConvGrads {
  Tensor input, weights, bias;
};

ConvGrads conv2d_backward(const Tensor& input, const Tensor& weights, const Tensor& bias, std::size_t stride_h,
                          std::size_t stride_w, bool relu, const Tensor& grad_output);

Tensor maxpool_forward(const Tensor& input, std::size_t kernel, std::size_t stride);
Tensor maxpool_backward(const Tensor& input, std::size_t kernel, std::size_t stride, const Tensor& grad_output);

/// (B, in) x (in, out) + bias.
Tensor dense_forward(const Tensor& input, const Tensor& weights, const Tensor& bias, bool relu);

}  // namespace permnet::nn::reference
