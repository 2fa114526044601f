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

#include "permnet/nn/loss.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "permnet/error.hpp"

namespace permnet::nn {

LossValue bce_loss(std::span<const double> probs, std::span<const int> labels) {
  if (probs.empty()) {
    throw Error(Errc::EmptyBatch, "loss over an empty batch");
  }
  if (probs.size() != labels.size()) {
    throw Error(Errc::ShapeMismatch, "probabilities and labels differ in length");
  }
  const double n = static_cast<double>(probs.size());
  LossValue out;
  out.gradient.resize(probs.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    const double p = std::clamp(probs[i], kProbabilityClamp, 1.0 - kProbabilityClamp);
    const double y = labels[i] != 0 ? 1.0 : 0.0;
    sum += y * std::log(p) + (1.0 - y) * std::log(1.0 - p);
    out.gradient[i] = (p - y) / (p * (1.0 - p) * n);
  }
  out.value = -sum / n;
  return out;
}

Tensor softmax_bce_logit_grad(const Tensor& probs, std::span<const int> labels) {
  if (probs.rank() != 2 || probs.dim(1) != 2) {
    throw Error(Errc::ShapeMismatch, "expected (N, 2) probabilities, got " + to_string(probs.shape()));
  }
  const std::size_t n = probs.dim(0);
  if (n == 0) {
    throw Error(Errc::EmptyBatch, "loss over an empty batch");
  }
  if (labels.size() != n) {
    throw Error(Errc::ShapeMismatch, "probabilities and labels differ in length");
  }
  Tensor grad(probs.shape());
  const double scale = 1.0 / static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double y = labels[i] != 0 ? 1.0 : 0.0;
    grad[2 * i] = (probs[2 * i] - (1.0 - y)) * scale;
    grad[2 * i + 1] = (probs[2 * i + 1] - y) * scale;
  }
  return grad;
}

std::vector<double> botnet_column(const Tensor& probs) {
  if (probs.rank() != 2 || probs.dim(1) != 2) {
    throw Error(Errc::ShapeMismatch, "expected (N, 2) probabilities, got " + to_string(probs.shape()));
  }
  std::vector<double> out(probs.dim(0));
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = probs[2 * i + 1];
  return out;
}

}  // namespace permnet::nn
