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

#include "permnet/nn/model.hpp"

#include <cmath>
#include <random>
#include <string>

#include "permnet/error.hpp"
#include "permnet/nn/loss.hpp"

namespace permnet::nn {

namespace {

Layer make_layer(const LayerSpec& spec, const Shape& input) {
  switch (spec.kind) {
    case LayerKind::Conv: return Conv2D(spec, input);
    case LayerKind::MaxPool: return MaxPool2D(spec, input);
    case LayerKind::Dense: return Dense(spec, input);
    case LayerKind::Softmax: return Softmax(spec, input);
  }
  throw Error(Errc::InvalidSpec, "unknown layer kind");
}

// Glorot uniform: U(-a, a) with a = sqrt(6 / (fan_in + fan_out)). Drawn
// from the top 53 bits so the stream does not depend on the standard
// library's distribution implementation.
void init_glorot(Tensor& t, double fan_in, double fan_out, std::mt19937_64& rng) {
  const double limit = std::sqrt(6.0 / (fan_in + fan_out));
  for (double& w : t.values()) {
    const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    w = (2.0 * u - 1.0) * limit;
  }
}

}  // namespace

CnnModel::CnnModel(Shape input_shape, const std::vector<LayerSpec>& specs, std::uint64_t seed)
    : input_shape_(std::move(input_shape)), seed_(seed) {
  if (specs.empty() || specs.back().kind != LayerKind::Softmax) {
    throw Error(Errc::InvalidSpec, "model must end with a softmax layer");
  }
  Shape shape = input_shape_;
  layers_.reserve(specs.size());
  for (const auto& spec : specs) {
    if (spec.kind == LayerKind::Softmax && &spec != &specs.back()) {
      throw Error(Errc::InvalidSpec, "softmax is only allowed as the last layer");
    }
    layers_.push_back(make_layer(spec, shape));
    shape = std::visit([](const auto& l) { return l.output_shape(); }, layers_.back());
  }
  if (shape != Shape{2}) {
    throw Error(Errc::ShapeMismatch, "model must produce two class probabilities, got " + to_string(shape));
  }

  std::mt19937_64 rng(seed);
  for (auto& layer : layers_) {
    if (auto* conv = std::get_if<Conv2D>(&layer)) {
      const auto& s = conv->spec();
      const double area = static_cast<double>(s.kernel_h * s.kernel_w);
      init_glorot(conv->weights().value, area * static_cast<double>(conv->input_shape()[2]),
                  area * static_cast<double>(s.units), rng);
    } else if (auto* dense = std::get_if<Dense>(&layer)) {
      init_glorot(dense->weights().value, static_cast<double>(dense->fan_in()),
                  static_cast<double>(dense->spec().units), rng);
    }
  }
}

std::vector<LayerSpec> CnnModel::specs() const {
  std::vector<LayerSpec> out;
  for (const auto& layer : layers_) out.push_back(std::visit([](const auto& l) { return l.spec(); }, layer));
  return out;
}

std::vector<Shape> CnnModel::shape_trace() const {
  std::vector<Shape> out;
  for (const auto& layer : layers_) out.push_back(std::visit([](const auto& l) { return l.output_shape(); }, layer));
  return out;
}

std::vector<Parameter*> CnnModel::parameters() {
  std::vector<Parameter*> out;
  for (auto& layer : layers_) {
    if (auto* conv = std::get_if<Conv2D>(&layer)) {
      out.push_back(&conv->weights());
      out.push_back(&conv->bias());
    } else if (auto* dense = std::get_if<Dense>(&layer)) {
      out.push_back(&dense->weights());
      out.push_back(&dense->bias());
    }
  }
  return out;
}

std::vector<const Parameter*> CnnModel::parameters() const {
  std::vector<const Parameter*> out;
  for (Parameter* p : const_cast<CnnModel*>(this)->parameters()) out.push_back(p);
  return out;
}

std::size_t CnnModel::parameter_count() const {
  std::size_t n = 0;
  for (const Parameter* p : parameters()) n += p->value.size();
  return n;
}

Tensor CnnModel::forward(const Tensor& batch) const {
  Tensor x = batch;
  for (const auto& layer : layers_) {
    x = std::visit([&x](const auto& l) { return l.forward(x); }, layer);
  }
  return x;
}

Tensor CnnModel::forward_train(const Tensor& batch) {
  Tensor x = batch;
  for (auto& layer : layers_) {
    x = std::visit([&x](auto& l) { return l.forward_train(x); }, layer);
  }
  return x;
}

void CnnModel::backward_range(Tensor grad, std::size_t end) {
  for (std::size_t i = end; i-- > 0;) {
    const bool want_input = i > 0;
    grad = std::visit([&](auto& l) { return l.backward(grad, want_input); }, layers_[i]);
  }
}

void CnnModel::backward(const Tensor& grad_probs) { backward_range(grad_probs, layers_.size()); }

void CnnModel::backward_from_logits(const Tensor& grad_logits) { backward_range(grad_logits, layers_.size() - 1); }

std::vector<LayerSpec> default_layer_specs() {
  const auto relu = Activation::ReLU;
  return {
      LayerSpec::conv(5, 1, 32, relu),  LayerSpec::max_pool(2, 2),
      LayerSpec::conv(5, 1, 128, relu), LayerSpec::max_pool(2, 2),
      LayerSpec::conv(3, 1, 128, relu), LayerSpec::max_pool(2, 2),
      LayerSpec::conv(1, 1, 256, relu), LayerSpec::max_pool(2, 2),
      LayerSpec::dense(256, relu),      LayerSpec::dense(16, relu),
      LayerSpec::dense(2, Activation::None), LayerSpec::softmax(),
  };
}

CnnModel build_default_model(std::uint64_t seed, std::size_t image_size) {
  return CnnModel({image_size, image_size, 1}, default_layer_specs(), seed);
}

Tensor stack_batch(std::span<const Tensor* const> samples) {
  if (samples.empty()) {
    throw Error(Errc::EmptyBatch, "no samples to stack");
  }
  const Shape& sample_shape = samples.front()->shape();
  Shape shape{samples.size()};
  shape.insert(shape.end(), sample_shape.begin(), sample_shape.end());
  Tensor out(shape);
  const std::size_t per = samples.front()->size();
  for (std::size_t i = 0; i < samples.size(); ++i) {
    require_shape(*samples[i], sample_shape, "batch sample");
    std::copy(samples[i]->data(), samples[i]->data() + per, out.data() + i * per);
  }
  return out;
}

double train_step(CnnModel& model, const Tensor& batch, std::span<const int> labels, AdamState& adam,
                  Tensor* probs_out) {
  Tensor probs = model.forward_train(batch);
  const double loss = bce_loss(botnet_column(probs), labels).value;
  if (!std::isfinite(loss)) {
    throw Error(Errc::NonFiniteLoss, "training diverged (loss " + std::to_string(loss) + ")");
  }
  model.backward_from_logits(softmax_bce_logit_grad(probs, labels));
  auto params = model.parameters();
  adam_step(params, adam);
  if (probs_out) *probs_out = std::move(probs);
  return loss;
}

}  // namespace permnet::nn
