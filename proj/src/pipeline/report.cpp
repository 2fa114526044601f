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

#include "permnet/pipeline/report.hpp"

#include <cstdio>

#include "json.hpp"

namespace permnet::pipeline {

namespace {

using Json = nlohmann::ordered_json;

std::string fmt_metric(const std::optional<double>& v) {
  if (!v) return "undefined";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6f", *v);
  return buf;
}

Json metric_json(const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); }

Json metrics_json(const EvalMetrics& m) {
  Json j;
  j["tp"] = m.counts.tp;
  j["tn"] = m.counts.tn;
  j["fp"] = m.counts.fp;
  j["fn"] = m.counts.fn;
  j["fpr"] = metric_json(m.fpr);
  j["recall"] = metric_json(m.recall);
  j["precision"] = metric_json(m.precision);
  j["accuracy"] = metric_json(m.accuracy);
  j["f_measure"] = metric_json(m.f_measure);
  return j;
}

Json summary_json(const MetricSummary& s) {
  Json j;
  j["mean"] = metric_json(s.mean);
  j["stddev"] = metric_json(s.stddev);
  j["defined_folds"] = s.defined_folds;
  return j;
}

void append_row(std::string& out, const char* name, const MetricSummary& s) {
  char buf[160];
  std::snprintf(buf, sizeof buf, "  %-10s mean %-10s stddev %-10s defined in %zu fold(s)\n", name, fmt_metric(s.mean).c_str(),
                fmt_metric(s.stddev).c_str(), s.defined_folds);
  out += buf;
}

}  // namespace

std::string format_report_text(const CvResult& r) {
  const TrainConfig& c = r.config;
  std::string out;
  char buf[256];
  out += "cross-validation report\n";
  std::snprintf(buf, sizeof buf,
                "config: folds=%zu epochs=%zu batch_size=%zu learning_rate=%.10g beta1=%.10g beta2=%.10g "
                "epsilon=%.10g vocab_size=%zu val_split=%.10g vocab_from_all=%s\n",
                c.folds, c.epochs, c.batch_size, c.adam.learning_rate, c.adam.beta1, c.adam.beta2, c.adam.epsilon,
                c.vocab_size, c.val_split, c.vocab_from_all ? "true" : "false");
  out += buf;
  std::snprintf(buf, sizeof buf, "seed: %llu\nsamples: %zu\ningest failures: %zu\n",
                static_cast<unsigned long long>(c.seed), r.sample_count, r.failures.size());
  out += buf;
  for (const auto& f : r.failures) out += "  failed: " + f.path + ": " + f.message + "\n";
  out += "\nfold  train  test  vocab    TP    TN    FP    FN  fpr        recall     precision  accuracy   f_measure\n";
  for (const auto& f : r.folds) {
    const auto& m = f.metrics;
    std::snprintf(buf, sizeof buf, "%4zu %6zu %5zu %6zu %5zu %5zu %5zu %5zu  %-10s %-10s %-10s %-10s %s\n", f.fold,
                  f.train_size, f.test_size, f.vocab_size, m.counts.tp, m.counts.tn, m.counts.fp, m.counts.fn,
                  fmt_metric(m.fpr).c_str(), fmt_metric(m.recall).c_str(), fmt_metric(m.precision).c_str(),
                  fmt_metric(m.accuracy).c_str(), fmt_metric(m.f_measure).c_str());
    out += buf;
  }
  out += "\nsummary:\n";
  append_row(out, "fpr", r.summary.fpr);
  append_row(out, "recall", r.summary.recall);
  append_row(out, "precision", r.summary.precision);
  append_row(out, "accuracy", r.summary.accuracy);
  append_row(out, "f_measure", r.summary.f_measure);
  return out;
}

std::string format_report_json(const CvResult& r) {
  Json doc;
  doc["config"] = Json::parse(format_train_config(r.config));
  doc["seed"] = r.config.seed;
  doc["samples"] = r.sample_count;
  Json failures = Json::array();
  for (const auto& f : r.failures) failures.push_back({{"record", f.record}, {"path", f.path}, {"message", f.message}});
  doc["failures"] = std::move(failures);
  Json folds = Json::array();
  for (const auto& f : r.folds) {
    Json j;
    j["fold"] = f.fold;
    j["train_size"] = f.train_size;
    j["validation_size"] = f.validation_size;
    j["test_size"] = f.test_size;
    j["vocab_size"] = f.vocab_size;
    j["metrics"] = metrics_json(f.metrics);
    folds.push_back(std::move(j));
  }
  doc["folds"] = std::move(folds);
  Json summary;
  summary["fpr"] = summary_json(r.summary.fpr);
  summary["recall"] = summary_json(r.summary.recall);
  summary["precision"] = summary_json(r.summary.precision);
  summary["accuracy"] = summary_json(r.summary.accuracy);
  summary["f_measure"] = summary_json(r.summary.f_measure);
  doc["summary"] = std::move(summary);
  return doc.dump(2) + "\n";
}

}  // namespace permnet::pipeline
