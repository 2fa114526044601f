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

#include "permnet/pipeline/metrics.hpp"

namespace permnet::pipeline {

namespace {

std::optional<double> ratio(std::size_t num, std::size_t den) {
  if (den == 0) return std::nullopt;
  return static_cast<double>(num) / static_cast<double>(den);
}

}  // namespace

void ConfusionCounts::add(ClassLabel truth, ClassLabel predicted) {
  if (truth == ClassLabel::Botnet) {
    ++(predicted == ClassLabel::Botnet ? tp : fn);
  } else {
    ++(predicted == ClassLabel::Botnet ? fp : tn);
  }
}

EvalMetrics compute_metrics(const ConfusionCounts& c) {
  EvalMetrics m;
  m.counts = c;
  m.fpr = ratio(c.fp, c.fp + c.tn);
  m.recall = ratio(c.tp, c.tp + c.fn);
  m.precision = ratio(c.tp, c.tp + c.fp);
  m.accuracy = ratio(c.tp + c.tn, c.total());
  if (m.precision && m.recall && *m.precision + *m.recall > 0.0) {
    m.f_measure = 2.0 * *m.precision * *m.recall / (*m.precision + *m.recall);
  }
  return m;
}

}  // namespace permnet::pipeline
