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

// Data-parallel kernels behind the layers. Each kernel splits work across
// OpenMP threads over disjoint output blocks and keeps every reduction in a
// fixed order, so results are bit-identical for any thread count.

#include <cstddef>

namespace permnet::nn::kernels {

enum class Op { None, Transpose };

/// C = op(A) * op(B) (or C += ... when `accumulate`), all row-major.
/// op(A) is m x k, op(B) is k x n. With Op::Transpose the operand is stored
/// as its transpose (k x m for A, n x k for B).
void gemm(Op op_a, Op op_b, std::size_t m, std::size_t n, std::size_t k, const double* a, const double* b,
          double* c, bool accumulate = false);

/// Geometry of a "same"-padded 2-D convolution over NHWC batches.
struct ConvGeometry {
  std::size_t batch = 0, in_h = 0, in_w = 0, in_c = 0;
  std::size_t kernel_h = 0, kernel_w = 0, stride_h = 1, stride_w = 1;
  std::size_t out_h = 0, out_w = 0, pad_top = 0, pad_left = 0;

  /// Output is ceil(in / stride); when the total padding is odd the extra
  /// row/column goes to the bottom/right.
  static ConvGeometry same(std::size_t batch, std::size_t h, std::size_t w, std::size_t c, std::size_t kh,
                           std::size_t kw, std::size_t sh, std::size_t sw);

  std::size_t rows() const { return batch * out_h * out_w; }
  std::size_t cols() const { return kernel_h * kernel_w * in_c; }
};

/// Unfolds input patches into a rows() x cols() matrix, column order
/// (ky, kx, c) to match (kh, kw, in, out) weights.
void im2col(const ConvGeometry& g, const double* input, double* col);

/// Folds a patch matrix back onto the input, adding into `grad_input`.
void col2im_add(const ConvGeometry& g, const double* col, double* grad_input);

/// x[r, :] += bias, then optionally max(x, 0).
void add_bias_activate(std::size_t rows, std::size_t cols, const double* bias, double* x, bool relu);

/// grad *= (activated_output > 0)
void relu_mask(std::size_t n, const double* activated_output, double* grad);

/// out[c] = sum over rows of x[r, c], rows summed in ascending order.
void column_sums(std::size_t rows, std::size_t cols, const double* x, double* out);

struct PoolGeometry {
  std::size_t batch = 0, in_h = 0, in_w = 0, channels = 0;
  std::size_t kernel_h = 2, kernel_w = 2, stride_h = 2, stride_w = 2;
  std::size_t out_h = 0, out_w = 0;

  /// Floor semantics: trailing rows/columns that do not fill a window are dropped.
  static PoolGeometry floor(std::size_t batch, std::size_t h, std::size_t w, std::size_t c, std::size_t kh,
                            std::size_t kw, std::size_t sh, std::size_t sw);
};

/// Window maxima; `argmax` receives the flat input index of the first
/// (row-major) maximum of each window.
void maxpool_forward(const PoolGeometry& g, const double* input, double* output, std::size_t* argmax);

/// Routes each output gradient to its recorded argmax; grad_input is overwritten.
void maxpool_backward(const PoolGeometry& g, const double* grad_output, const std::size_t* argmax,
                      double* grad_input);

}  // namespace permnet::nn::kernels
