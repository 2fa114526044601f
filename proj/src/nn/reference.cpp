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

#include "permnet/nn/reference.hpp"

#include <algorithm>

namespace permnet::nn::reference {

namespace {

struct Same {
  std::size_t out, pad;
};

Same same_padding(std::size_t in, std::size_t kernel, std::size_t stride) {
  const std::size_t out = (in + stride - 1) / stride;
  const std::size_t need = (out - 1) * stride + kernel;
  return {out, need > in ? (need - in) / 2 : 0};
}

}  // namespace

void gemm(std::size_t m, std::size_t n, std::size_t k, const double* a, const double* b, double* c) {
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      double sum = 0.0;
      for (std::size_t p = 0; p < k; ++p) sum += a[i * k + p] * b[p * n + j];
      c[i * n + j] = sum;
    }
  }
}

Tensor conv2d_forward(const Tensor& input, const Tensor& weights, const Tensor& bias, std::size_t stride_h,
                      std::size_t stride_w, bool relu) {
  const std::size_t B = input.dim(0), H = input.dim(1), W = input.dim(2), C = input.dim(3);
  const std::size_t KH = weights.dim(0), KW = weights.dim(1), F = weights.dim(3);
  const Same sh = same_padding(H, KH, stride_h);
  const Same sw = same_padding(W, KW, stride_w);
  Tensor out({B, sh.out, sw.out, F});
  for (std::size_t b = 0; b < B; ++b)
    for (std::size_t oy = 0; oy < sh.out; ++oy)
      for (std::size_t ox = 0; ox < sw.out; ++ox)
        for (std::size_t f = 0; f < F; ++f) {
          double sum = bias[f];
          for (std::size_t ky = 0; ky < KH; ++ky)
            for (std::size_t kx = 0; kx < KW; ++kx)
              for (std::size_t c = 0; c < C; ++c) {
                const long iy = static_cast<long>(oy * stride_h + ky) - static_cast<long>(sh.pad);
                const long ix = static_cast<long>(ox * stride_w + kx) - static_cast<long>(sw.pad);
                if (iy < 0 || ix < 0 || iy >= static_cast<long>(H) || ix >= static_cast<long>(W)) continue;
                sum += input[((b * H + iy) * W + ix) * C + c] * weights[((ky * KW + kx) * C + c) * F + f];
              }
          out[((b * sh.out + oy) * sw.out + ox) * F + f] = relu ? std::max(sum, 0.0) : sum;
        }
  return out;
}

ConvGrads conv2d_backward(const Tensor& input, const Tensor& weights, const Tensor& bias, std::size_t stride_h,
                          std::size_t stride_w, bool relu, const Tensor& grad_output) {
  const std::size_t B = input.dim(0), H = input.dim(1), W = input.dim(2), C = input.dim(3);
  const std::size_t KH = weights.dim(0), KW = weights.dim(1), F = weights.dim(3);
  const Same sh = same_padding(H, KH, stride_h);
  const Same sw = same_padding(W, KW, stride_w);
  const Tensor out = conv2d_forward(input, weights, bias, stride_h, stride_w, relu);

  ConvGrads g{Tensor(input.shape()), Tensor(weights.shape()), Tensor(bias.shape())};
  for (std::size_t b = 0; b < B; ++b)
    for (std::size_t oy = 0; oy < sh.out; ++oy)
      for (std::size_t ox = 0; ox < sw.out; ++ox)
        for (std::size_t f = 0; f < F; ++f) {
          const std::size_t o = ((b * sh.out + oy) * sw.out + ox) * F + f;
          const double go = (relu && !(out[o] > 0.0)) ? 0.0 : grad_output[o];
          g.bias[f] += go;
          for (std::size_t ky = 0; ky < KH; ++ky)
            for (std::size_t kx = 0; kx < KW; ++kx)
              for (std::size_t c = 0; c < C; ++c) {
                const long iy = static_cast<long>(oy * stride_h + ky) - static_cast<long>(sh.pad);
                const long ix = static_cast<long>(ox * stride_w + kx) - static_cast<long>(sw.pad);
                if (iy < 0 || ix < 0 || iy >= static_cast<long>(H) || ix >= static_cast<long>(W)) continue;
                const std::size_t i = ((b * H + iy) * W + ix) * C + c;
                const std::size_t w = ((ky * KW + kx) * C + c) * F + f;
                g.weights[w] += input[i] * go;
                g.input[i] += weights[w] * go;
              }
        }
  return g;
}

Tensor maxpool_forward(const Tensor& input, std::size_t kernel, std::size_t stride) {
  const std::size_t B = input.dim(0), H = input.dim(1), W = input.dim(2), C = input.dim(3);
  const std::size_t OH = (H - kernel) / stride + 1, OW = (W - kernel) / stride + 1;
  Tensor out({B, OH, OW, C});
  for (std::size_t b = 0; b < B; ++b)
    for (std::size_t oy = 0; oy < OH; ++oy)
      for (std::size_t ox = 0; ox < OW; ++ox)
        for (std::size_t c = 0; c < C; ++c) {
          double best = input[((b * H + oy * stride) * W + ox * stride) * C + c];
          for (std::size_t ky = 0; ky < kernel; ++ky)
            for (std::size_t kx = 0; kx < kernel; ++kx)
              best = std::max(best, input[((b * H + oy * stride + ky) * W + ox * stride + kx) * C + c]);
          out[((b * OH + oy) * OW + ox) * C + c] = best;
        }
  return out;
}

Tensor maxpool_backward(const Tensor& input, std::size_t kernel, std::size_t stride, const Tensor& grad_output) {
  const std::size_t B = input.dim(0), H = input.dim(1), W = input.dim(2), C = input.dim(3);
  const std::size_t OH = (H - kernel) / stride + 1, OW = (W - kernel) / stride + 1;
  Tensor grad(input.shape());
  for (std::size_t b = 0; b < B; ++b)
    for (std::size_t oy = 0; oy < OH; ++oy)
      for (std::size_t ox = 0; ox < OW; ++ox)
        for (std::size_t c = 0; c < C; ++c) {
          std::size_t best = ((b * H + oy * stride) * W + ox * stride) * C + c;
          for (std::size_t ky = 0; ky < kernel; ++ky)
            for (std::size_t kx = 0; kx < kernel; ++kx) {
              const std::size_t at = ((b * H + oy * stride + ky) * W + ox * stride + kx) * C + c;
              if (input[at] > input[best]) best = at;
            }
          grad[best] += grad_output[((b * OH + oy) * OW + ox) * C + c];
        }
  return grad;
}

Tensor dense_forward(const Tensor& input, const Tensor& weights, const Tensor& bias, bool relu) {
  const std::size_t B = input.dim(0);
  const std::size_t in = weights.dim(0), out = weights.dim(1);
  Tensor y({B, out});
  for (std::size_t b = 0; b < B; ++b)
    for (std::size_t o = 0; o < out; ++o) {
      double sum = bias[o];
      for (std::size_t i = 0; i < in; ++i) sum += input[b * in + i] * weights[i * out + o];
      y[b * out + o] = relu ? std::max(sum, 0.0) : sum;
    }
  return y;
}

}  // namespace permnet::nn::reference
