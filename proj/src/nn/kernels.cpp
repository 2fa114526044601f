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

#include "permnet/nn/kernels.hpp"

#include <omp.h>

#include <algorithm>
#include <cstring>
#include <vector>

namespace permnet::nn::kernels {

namespace {

// Register tile and cache blocking for the packed GEMM. The micro-kernel is
// written so the compiler vectorizes the NR loop.
constexpr std::size_t kMR = 6;
constexpr std::size_t kNR = 32;
constexpr std::size_t kKC = 512;
constexpr std::size_t kMC = 96;

void micro_kernel(std::size_t kc, const double* __restrict a, const double* __restrict b, double* __restrict c,
                  std::size_t ldc, std::size_t mr, std::size_t nr, bool overwrite) {
  double acc[kMR][kNR] = {};
  for (std::size_t p = 0; p < kc; ++p) {
    const double* ap = a + p * kMR;
    const double* bp = b + p * kNR;
    for (std::size_t i = 0; i < kMR; ++i) {
      const double av = ap[i];
      for (std::size_t j = 0; j < kNR; ++j) acc[i][j] += av * bp[j];
    }
  }
  if (overwrite) {
    for (std::size_t i = 0; i < mr; ++i) {
      for (std::size_t j = 0; j < nr; ++j) c[i * ldc + j] = acc[i][j];
    }
  } else {
    for (std::size_t i = 0; i < mr; ++i) {
      for (std::size_t j = 0; j < nr; ++j) c[i * ldc + j] += acc[i][j];
    }
  }
}

// Packs the kc x nc panel of op(B) starting at (pc, 0) into NR-wide strips.
void pack_b(Op op, const double* b, std::size_t n, std::size_t k, std::size_t pc, std::size_t kc, double* dst) {
  const std::size_t strips = (n + kNR - 1) / kNR;
#pragma omp parallel for schedule(static)
  for (std::size_t s = 0; s < strips; ++s) {
    const std::size_t jr = s * kNR;
    double* d = dst + s * kc * kNR;
    const std::size_t nr = std::min(kNR, n - jr);
    for (std::size_t p = 0; p < kc; ++p) {
      double* row = d + p * kNR;
      if (op == Op::None) {
        const double* src = b + (pc + p) * n + jr;
        for (std::size_t j = 0; j < nr; ++j) row[j] = src[j];
      } else {
        for (std::size_t j = 0; j < nr; ++j) row[j] = b[(jr + j) * k + pc + p];
      }
      for (std::size_t j = nr; j < kNR; ++j) row[j] = 0.0;
    }
  }
}

void pack_a(Op op, const double* a, std::size_t m, std::size_t k, std::size_t ic, std::size_t mc, std::size_t pc,
            std::size_t kc, double* dst) {
  for (std::size_t ir = 0; ir < mc; ir += kMR) {
    double* d = dst + (ir / kMR) * kc * kMR;
    const std::size_t mr = std::min(kMR, mc - ir);
    for (std::size_t p = 0; p < kc; ++p) {
      double* col = d + p * kMR;
      if (op == Op::None) {
        for (std::size_t i = 0; i < mr; ++i) col[i] = a[(ic + ir + i) * k + pc + p];
      } else {
        const double* src = a + (pc + p) * m + ic + ir;
        for (std::size_t i = 0; i < mr; ++i) col[i] = src[i];
      }
      for (std::size_t i = mr; i < kMR; ++i) col[i] = 0.0;
    }
  }
}

}  // namespace

void gemm(Op op_a, Op op_b, std::size_t m, std::size_t n, std::size_t k, const double* a, const double* b,
          double* c, bool accumulate) {
  if (m == 0 || n == 0) return;
  if (k == 0) {
    if (!accumulate) std::fill(c, c + m * n, 0.0);
    return;
  }

  const std::size_t strips = (n + kNR - 1) / kNR;
  std::vector<double> packed_b(std::min(kKC, k) * strips * kNR);
  const std::size_t blocks = (m + kMC - 1) / kMC;

  for (std::size_t pc = 0; pc < k; pc += kKC) {
    const std::size_t kc = std::min(kKC, k - pc);
    const bool overwrite = !accumulate && pc == 0;
    pack_b(op_b, b, n, k, pc, kc, packed_b.data());
#pragma omp parallel
    {
      std::vector<double> packed_a(kc * kMC);
#pragma omp for schedule(static)
      for (std::size_t blk = 0; blk < blocks; ++blk) {
        const std::size_t ic = blk * kMC;
        const std::size_t mc = std::min(kMC, m - ic);
        pack_a(op_a, a, m, k, ic, mc, pc, kc, packed_a.data());
        for (std::size_t jr = 0; jr < n; jr += kNR) {
          const double* bp = packed_b.data() + (jr / kNR) * kc * kNR;
          for (std::size_t ir = 0; ir < mc; ir += kMR) {
            micro_kernel(kc, packed_a.data() + (ir / kMR) * kc * kMR, bp, c + (ic + ir) * n + jr, n,
                         std::min(kMR, mc - ir), std::min(kNR, n - jr), overwrite);
          }
        }
      }
    }
  }
}

ConvGeometry ConvGeometry::same(std::size_t batch, std::size_t h, std::size_t w, std::size_t c, std::size_t kh,
                                std::size_t kw, std::size_t sh, std::size_t sw) {
  ConvGeometry g;
  g.batch = batch;
  g.in_h = h;
  g.in_w = w;
  g.in_c = c;
  g.kernel_h = kh;
  g.kernel_w = kw;
  g.stride_h = sh;
  g.stride_w = sw;
  g.out_h = (h + sh - 1) / sh;
  g.out_w = (w + sw - 1) / sw;
  const std::size_t need_h = (g.out_h - 1) * sh + kh;
  const std::size_t need_w = (g.out_w - 1) * sw + kw;
  g.pad_top = need_h > h ? (need_h - h) / 2 : 0;
  g.pad_left = need_w > w ? (need_w - w) / 2 : 0;
  return g;
}

void im2col(const ConvGeometry& g, const double* input, double* col) {
  const std::size_t rows = g.rows();
  const std::size_t cols = g.cols();
  const std::size_t plane = g.out_h * g.out_w;
#pragma omp parallel for schedule(static)
  for (std::size_t r = 0; r < rows; ++r) {
    const std::size_t b = r / plane;
    const std::size_t oy = (r % plane) / g.out_w;
    const std::size_t ox = r % g.out_w;
    double* dst = col + r * cols;
    const double* sample = input + b * g.in_h * g.in_w * g.in_c;
    for (std::size_t ky = 0; ky < g.kernel_h; ++ky) {
      const std::ptrdiff_t iy = static_cast<std::ptrdiff_t>(oy * g.stride_h + ky) - static_cast<std::ptrdiff_t>(g.pad_top);
      for (std::size_t kx = 0; kx < g.kernel_w; ++kx) {
        const std::ptrdiff_t ix = static_cast<std::ptrdiff_t>(ox * g.stride_w + kx) - static_cast<std::ptrdiff_t>(g.pad_left);
        double* d = dst + (ky * g.kernel_w + kx) * g.in_c;
        if (iy < 0 || ix < 0 || iy >= static_cast<std::ptrdiff_t>(g.in_h) || ix >= static_cast<std::ptrdiff_t>(g.in_w)) {
          std::fill(d, d + g.in_c, 0.0);
        } else {
          const double* s = sample + (static_cast<std::size_t>(iy) * g.in_w + static_cast<std::size_t>(ix)) * g.in_c;
          std::copy(s, s + g.in_c, d);
        }
      }
    }
  }
}

void col2im_add(const ConvGeometry& g, const double* col, double* grad_input) {
  // Locals so the channel loop bound is not reloaded after each store.
  const std::size_t in_h = g.in_h, in_w = g.in_w, in_c = g.in_c, out_w = g.out_w;
  const std::size_t kernel_h = g.kernel_h, kernel_w = g.kernel_w, stride_h = g.stride_h, stride_w = g.stride_w;
  const std::ptrdiff_t pad_top = static_cast<std::ptrdiff_t>(g.pad_top);
  const std::ptrdiff_t pad_left = static_cast<std::ptrdiff_t>(g.pad_left);
  const std::size_t cols = g.cols();
  const std::size_t plane = g.out_h * out_w;
  // One sample per iteration: samples touch disjoint slices of grad_input.
#pragma omp parallel for schedule(static)
  for (std::size_t b = 0; b < g.batch; ++b) {
    double* sample = grad_input + b * in_h * in_w * in_c;
    for (std::size_t pos = 0; pos < plane; ++pos) {
      const std::size_t oy = pos / out_w;
      const std::size_t ox = pos % out_w;
      const double* src = col + (b * plane + pos) * cols;
      for (std::size_t ky = 0; ky < kernel_h; ++ky) {
        const std::ptrdiff_t iy = static_cast<std::ptrdiff_t>(oy * stride_h + ky) - pad_top;
        if (iy < 0 || iy >= static_cast<std::ptrdiff_t>(in_h)) continue;
        for (std::size_t kx = 0; kx < kernel_w; ++kx) {
          const std::ptrdiff_t ix = static_cast<std::ptrdiff_t>(ox * stride_w + kx) - pad_left;
          if (ix < 0 || ix >= static_cast<std::ptrdiff_t>(in_w)) continue;
          const double* __restrict s = src + (ky * kernel_w + kx) * in_c;
          double* __restrict d = sample + (static_cast<std::size_t>(iy) * in_w + static_cast<std::size_t>(ix)) * in_c;
          for (std::size_t c = 0; c < in_c; ++c) d[c] += s[c];
        }
      }
    }
  }
}

void add_bias_activate(std::size_t rows, std::size_t cols, const double* bias, double* x, bool relu) {
#pragma omp parallel for schedule(static)
  for (std::size_t r = 0; r < rows; ++r) {
    double* row = x + r * cols;
    for (std::size_t c = 0; c < cols; ++c) {
      const double v = row[c] + bias[c];
      row[c] = relu ? std::max(v, 0.0) : v;
    }
  }
}

void relu_mask(std::size_t n, const double* activated_output, double* grad) {
#pragma omp parallel for schedule(static)
  for (std::size_t i = 0; i < n; ++i) {
    if (!(activated_output[i] > 0.0)) grad[i] = 0.0;
  }
}

void column_sums(std::size_t rows, std::size_t cols, const double* x, double* out) {
  std::fill(out, out + cols, 0.0);
  for (std::size_t r = 0; r < rows; ++r) {
    const double* row = x + r * cols;
    for (std::size_t c = 0; c < cols; ++c) out[c] += row[c];
  }
}

PoolGeometry PoolGeometry::floor(std::size_t batch, std::size_t h, std::size_t w, std::size_t c, std::size_t kh,
                                 std::size_t kw, std::size_t sh, std::size_t sw) {
  PoolGeometry g;
  g.batch = batch;
  g.in_h = h;
  g.in_w = w;
  g.channels = c;
  g.kernel_h = kh;
  g.kernel_w = kw;
  g.stride_h = sh;
  g.stride_w = sw;
  g.out_h = h >= kh ? (h - kh) / sh + 1 : 0;
  g.out_w = w >= kw ? (w - kw) / sw + 1 : 0;
  return g;
}

void maxpool_forward(const PoolGeometry& g, const double* input, double* output, std::size_t* argmax) {
  // Locals so the compiler knows the channel loop bound is not written
  // through output or argmax.
  const std::size_t channels = g.channels, in_w = g.in_w, out_h = g.out_h, out_w = g.out_w;
  const std::size_t kernel_h = g.kernel_h, kernel_w = g.kernel_w, stride_h = g.stride_h, stride_w = g.stride_w;
  const std::size_t in_plane = g.in_h * in_w * channels;
  const std::size_t rows = g.batch * out_h;
#pragma omp parallel for schedule(static)
  for (std::size_t r = 0; r < rows; ++r) {
    const std::size_t b = r / out_h;
    const std::size_t oy = r % out_h;
    const std::size_t base = b * in_plane;
    for (std::size_t ox = 0; ox < out_w; ++ox) {
      const std::size_t out_at = (r * out_w + ox) * channels;
      double* __restrict out = output + out_at;
      std::size_t* __restrict arg = argmax + out_at;
      const std::size_t first = base + ((oy * stride_h) * in_w + ox * stride_w) * channels;
      for (std::size_t c = 0; c < channels; ++c) {
        out[c] = input[first + c];
        arg[c] = first + c;
      }
      // Row-major window scan with strict '>' keeps the first maximum.
      for (std::size_t ky = 0; ky < kernel_h; ++ky) {
        for (std::size_t kx = 0; kx < kernel_w; ++kx) {
          const std::size_t at = base + ((oy * stride_h + ky) * in_w + ox * stride_w + kx) * channels;
          for (std::size_t c = 0; c < channels; ++c) {
            const double v = input[at + c];
            const bool greater = v > out[c];
            out[c] = greater ? v : out[c];
            arg[c] = greater ? at + c : arg[c];
          }
        }
      }
    }
  }
}

void maxpool_backward(const PoolGeometry& g, const double* grad_output, const std::size_t* argmax,
                      double* grad_input) {
  const std::size_t in_per_sample = g.in_h * g.in_w * g.channels;
  const std::size_t out_per_sample = g.out_h * g.out_w * g.channels;
  // Overlapping windows may share an argmax, so parallelize by sample only.
#pragma omp parallel for schedule(static)
  for (std::size_t b = 0; b < g.batch; ++b) {
    std::fill(grad_input + b * in_per_sample, grad_input + (b + 1) * in_per_sample, 0.0);
    for (std::size_t i = b * out_per_sample; i < (b + 1) * out_per_sample; ++i) {
      grad_input[argmax[i]] += grad_output[i];
    }
  }
}

}  // namespace permnet::nn::kernels
