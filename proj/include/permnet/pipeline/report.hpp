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

#include <string>

#include "permnet/pipeline/cross_validate.hpp"

namespace permnet::pipeline {

/// Human-readable report: config echo, per-fold counts and metrics, then
/// mean and standard deviation. Contains nothing run-dependent beyond the
/// inputs, so equal inputs give byte-identical output.
std::string format_report_text(const CvResult& result);

/// Same content as a JSON document; undefined metrics are null.
std::string format_report_json(const CvResult& result);

}  // namespace permnet::pipeline
