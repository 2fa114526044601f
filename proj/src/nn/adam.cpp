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

#include "permnet/nn/adam.hpp"

#include <cmath>

#include "permnet/error.hpp"

namespace permnet::nn {

AdamState::AdamState(std::span<Parameter* const> params, AdamConfig cfg) : config(cfg) {
  m.reserve(params.size());
  v.reserve(params.size());
  for (const Parameter* p : params) {
    m.emplace_back(p->value.shape());
    v.emplace_back(p->value.shape());
  }
}

void adam_update(std::span<double> param, std::span<const double> grad, std::span<double> m, std::span<double> v,
                 std::uint64_t step, const AdamConfig& config) {
  if (grad.size() != param.size() || m.size() != param.size() || v.size() != param.size()) {
    throw Error(Errc::ShapeMismatch, "Adam buffers differ in length");
  }
  const double t = static_cast<double>(step);
  const double correction1 = 1.0 - std::pow(config.beta1, t);
  const double correction2 = 1.0 - std::pow(config.beta2, t);
#pragma omp parallel for schedule(static)
  for (std::size_t i = 0; i < param.size(); ++i) {
    const double g = grad[i];
    m[i] = config.beta1 * m[i] + (1.0 - config.beta1) * g;
    v[i] = config.beta2 * v[i] + (1.0 - config.beta2) * g * g;
    const double m_hat = m[i] / correction1;
    const double v_hat = v[i] / correction2;
    param[i] -= config.learning_rate * m_hat / (std::sqrt(v_hat) + config.epsilon);
  }
}

void adam_step(std::span<Parameter* const> params, AdamState& state) {
  if (params.size() != state.m.size()) {
    throw Error(Errc::ShapeMismatch, "Adam state tracks a different parameter list");
  }
  for (std::size_t i = 0; i < params.size(); ++i) {
    require_shape(params[i]->grad, params[i]->value.shape(), "Adam gradient");
    require_shape(state.m[i], params[i]->value.shape(), "Adam first moment");
  }
  ++state.step;
  for (std::size_t i = 0; i < params.size(); ++i) {
    adam_update(params[i]->value.values(), params[i]->grad.values(), state.m[i].values(), state.v[i].values(),
                state.step, state.config);
  }
}

}  // namespace permnet::nn
