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

#include "permnet/pipeline/folds.hpp"

#include <algorithm>
#include <random>
#include <string>

#include "permnet/error.hpp"

namespace permnet::pipeline {

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  // splitmix64 finalizer over the pair.
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::vector<std::size_t> FoldPlan::test_indices(std::size_t fold) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < assignment.size(); ++i) {
    if (assignment[i] == fold) out.push_back(i);
  }
  return out;
}

std::vector<std::size_t> FoldPlan::train_indices(std::size_t fold) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < assignment.size(); ++i) {
    if (assignment[i] != fold) out.push_back(i);
  }
  return out;
}

FoldPlan make_folds(std::span<const ClassLabel> labels, std::size_t k, std::uint64_t seed) {
  if (k < 2) {
    throw Error(Errc::InvalidArgument, "cross-validation needs k >= 2");
  }
  FoldPlan plan;
  plan.k = k;
  plan.seed = seed;
  plan.assignment.assign(labels.size(), 0);

  std::mt19937_64 rng(seed);
  std::size_t next = 0;
  for (ClassLabel cls : {ClassLabel::Benign, ClassLabel::Botnet}) {
    std::vector<std::size_t> members;
    for (std::size_t i = 0; i < labels.size(); ++i) {
      if (labels[i] == cls) members.push_back(i);
    }
    if (members.size() < k) {
      throw Error(Errc::TooFewSamples, std::string(to_string(cls)) + " class has " +
                                           std::to_string(members.size()) + " samples, need at least " +
                                           std::to_string(k));
    }
    std::shuffle(members.begin(), members.end(), rng);
    for (std::size_t idx : members) {
      plan.assignment[idx] = next;
      next = (next + 1) % k;
    }
  }
  return plan;
}

}  // namespace permnet::pipeline
