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

#include <span>
#include <vector>

#include "permnet/nn/tensor.hpp"

namespace permnet::nn {

/// Probabilities are clamped to [kProbabilityClamp, 1 - kProbabilityClamp]
/// before taking logarithms.
inline constexpr double kProbabilityClamp = 1e-7;

struct LossValue {
  double value = 0.0;
  std::vector<double> gradient;  // d loss / d p_i
};

/// Mean binary cross-entropy of botnet-class probabilities against 0/1 labels.
LossValue bce_loss(std::span<const double> probs, std::span<const int> labels);

/// Gradient of the mean BCE on column 1 of a two-class softmax, taken with
/// respect to the logits: (softmax - onehot) / N. `probs` is (N, 2).
Tensor softmax_bce_logit_grad(const Tensor& probs, std::span<const int> labels);

/// Column 1 of an (N, 2) probability tensor.
std::vector<double> botnet_column(const Tensor& probs);

}  // namespace permnet::nn
