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

// Optimised kernels against the serial reference implementation.

#include <omp.h>

#include <array>
#include <cmath>
#include <random>

#include "doctest.h"
#include "permnet/nn/kernels.hpp"
#include "permnet/nn/layers.hpp"
#include "permnet/nn/reference.hpp"
#include "test_util.hpp"

using namespace permnet;
using namespace permnet::nn;

namespace {

Tensor random_tensor(Shape shape, std::mt19937_64& rng) {
  Tensor t(std::move(shape));
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (double& v : t.values()) v = u(rng);
  return t;
}

double max_abs_diff(std::span<const double> a, std::span<const double> b) {
  REQUIRE(a.size() == b.size());
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

std::vector<double> transpose(const std::vector<double>& x, std::size_t rows, std::size_t cols) {
  std::vector<double> t(x.size());
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) t[c * rows + r] = x[r * cols + c];
  }
  return t;
}

}  // namespace

TEST_CASE("kernels: gemm matches the reference for every transpose combination") {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const std::size_t sizes[][3] = {{1, 1, 1}, {7, 5, 3}, {8, 24, 256}, {9, 25, 257}, {97, 131, 300}, {33, 2, 1024}};
  for (const auto& s : sizes) {
    const std::size_t m = s[0], n = s[1], k = s[2];
    std::vector<double> a(m * k), b(k * n);
    for (auto& v : a) v = u(rng);
    for (auto& v : b) v = u(rng);
    std::vector<double> expected(m * n);
    reference::gemm(m, n, k, a.data(), b.data(), expected.data());
    const auto at = transpose(a, m, k), bt = transpose(b, k, n);
    for (auto opa : {kernels::Op::None, kernels::Op::Transpose}) {
      for (auto opb : {kernels::Op::None, kernels::Op::Transpose}) {
        std::vector<double> c(m * n, 0.5);
        kernels::gemm(opa, opb, m, n, k, opa == kernels::Op::None ? a.data() : at.data(),
                      opb == kernels::Op::None ? b.data() : bt.data(), c.data());
        CHECK(max_abs_diff(c, expected) < 1e-11);
        std::vector<double> acc(m * n, 1.0);
        kernels::gemm(opa, opb, m, n, k, opa == kernels::Op::None ? a.data() : at.data(),
                      opb == kernels::Op::None ? b.data() : bt.data(), acc.data(), true);
        for (auto& v : acc) v -= 1.0;
        CHECK(max_abs_diff(acc, expected) < 1e-11);
      }
    }
  }
}

TEST_CASE("kernels: same-padding geometry") {
  auto g = kernels::ConvGeometry::same(1, 41, 41, 1, 5, 5, 1, 1);
  CHECK(g.out_h == 41);
  CHECK(g.pad_top == 2);
  g = kernels::ConvGeometry::same(1, 4, 4, 1, 2, 2, 1, 1);
  CHECK(g.out_h == 4);
  CHECK(g.pad_top == 0);  // the single extra row goes to the bottom
  g = kernels::ConvGeometry::same(1, 5, 5, 1, 3, 3, 2, 2);
  CHECK(g.out_h == 3);
  auto p = kernels::PoolGeometry::floor(1, 41, 41, 1, 2, 2, 2, 2);
  CHECK(p.out_h == 20);
}

TEST_CASE("kernels: convolution forward and backward match the reference") {
  std::mt19937_64 rng(2);
  struct Case {
    std::size_t b, h, w, cin, k, stride, cout;
    bool relu;
  };
  const Case cases[] = {{2, 9, 9, 1, 5, 1, 4, true},  {3, 6, 7, 3, 3, 1, 5, false}, {1, 5, 5, 2, 3, 2, 3, true},
                        {2, 4, 4, 6, 1, 1, 8, true},  {1, 8, 6, 2, 2, 1, 2, true},  {2, 41, 41, 1, 5, 1, 32, true}};
  for (const auto& c : cases) {
    Conv2D conv(LayerSpec::conv(c.k, c.stride, c.cout, c.relu ? Activation::ReLU : Activation::None),
                {c.h, c.w, c.cin});
    conv.weights().value = random_tensor(conv.weights().value.shape(), rng);
    conv.bias().value = random_tensor(conv.bias().value.shape(), rng);
    const Tensor x = random_tensor({c.b, c.h, c.w, c.cin}, rng);
    const Tensor y = conv.forward_train(x);
    const Tensor y_ref = reference::conv2d_forward(x, conv.weights().value, conv.bias().value, c.stride, c.stride,
                                                   c.relu);
    REQUIRE(y.shape() == y_ref.shape());
    CHECK(max_abs_diff(y.values(), y_ref.values()) < 1e-12);
    CHECK(conv.forward(x) == y);

    const Tensor g = random_tensor(y.shape(), rng);
    const Tensor gx = conv.backward(g);
    const auto ref = reference::conv2d_backward(x, conv.weights().value, conv.bias().value, c.stride, c.stride,
                                                c.relu, g);
    CHECK(max_abs_diff(gx.values(), ref.input.values()) < 1e-11);
    CHECK(max_abs_diff(conv.weights().grad.values(), ref.weights.values()) < 1e-10);
    CHECK(max_abs_diff(conv.bias().grad.values(), ref.bias.values()) < 1e-10);
  }
}

TEST_CASE("kernels: max pooling matches the reference, including odd sizes") {
  std::mt19937_64 rng(3);
  for (auto [h, w, ch] : std::vector<std::array<std::size_t, 3>>{{4, 4, 1}, {5, 7, 3}, {41, 41, 32}, {3, 2, 2}}) {
    MaxPool2D pool(LayerSpec::max_pool(2, 2), {h, w, ch});
    const Tensor x = random_tensor({2, h, w, ch}, rng);
    const Tensor y = pool.forward_train(x);
    CHECK(y == reference::maxpool_forward(x, 2, 2));
    const Tensor g = random_tensor(y.shape(), rng);
    CHECK(pool.backward(g) == reference::maxpool_backward(x, 2, 2, g));
  }
}

TEST_CASE("kernels: pooling ties route to the first maximum") {
  MaxPool2D pool(LayerSpec::max_pool(2, 2), {2, 2, 1});
  const Tensor x({1, 2, 2, 1}, {3.0, 3.0, 3.0, 1.0});
  pool.forward_train(x);
  const Tensor gx = pool.backward(Tensor({1, 1, 1, 1}, {1.0}));
  CHECK(gx.values()[0] == 1.0);
  CHECK(gx.values()[1] == 0.0);
  CHECK(gx.values()[2] == 0.0);
}

TEST_CASE("kernels: dense matches the reference") {
  std::mt19937_64 rng(4);
  Dense dense(LayerSpec::dense(16, Activation::ReLU), {2, 2, 256});
  dense.weights().value = random_tensor(dense.weights().value.shape(), rng);
  dense.bias().value = random_tensor(dense.bias().value.shape(), rng);
  const Tensor x = random_tensor({5, 2, 2, 256}, rng);
  const Tensor y = dense.forward(x);
  const Tensor y_ref = reference::dense_forward(x.reshaped({5, 1024}), dense.weights().value, dense.bias().value, true);
  CHECK(max_abs_diff(y.values(), y_ref.values()) < 1e-12);
}

TEST_CASE("kernels: results do not depend on the thread count") {
  std::mt19937_64 rng(5);
  Conv2D conv(LayerSpec::conv(5, 1, 32, Activation::ReLU), {20, 20, 8});
  conv.weights().value = random_tensor(conv.weights().value.shape(), rng);
  const Tensor x = random_tensor({4, 20, 20, 8}, rng);
  const int saved = omp_get_max_threads();
  omp_set_num_threads(1);
  const Tensor y1 = conv.forward_train(x);
  conv.backward(y1);
  const Tensor w1 = conv.weights().grad;
  omp_set_num_threads(4);
  const Tensor y4 = conv.forward_train(x);
  conv.backward(y4);
  omp_set_num_threads(saved);
  CHECK(y1 == y4);
  CHECK(w1 == conv.weights().grad);
}

TEST_CASE("layers: shape validation") {
  CHECK_ERRC(MaxPool2D(LayerSpec::max_pool(2, 2), {1, 1, 4}), Errc::ShapeMismatch);
  Conv2D conv(LayerSpec::conv(3, 1, 2, Activation::ReLU), {5, 5, 1});
  CHECK_ERRC(conv.forward(Tensor({1, 5, 5, 2})), Errc::ShapeMismatch);
}
