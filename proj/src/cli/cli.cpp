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

#include "permnet/cli.hpp"

#include <cstdio>
#include <filesystem>
#include <optional>

#include "CLI11.hpp"
#include "permnet/encoder.hpp"
#include "permnet/error.hpp"
#include "permnet/manifest.hpp"
#include "permnet/nn/model.hpp"
#include "permnet/pipeline/cross_validate.hpp"
#include "permnet/pipeline/dataset.hpp"
#include "permnet/pipeline/report.hpp"
#include "permnet/pipeline/synth.hpp"
#include "permnet/pipeline/trainer.hpp"
#include "permnet/vocabulary.hpp"

namespace permnet::cli {

namespace {

namespace fs = std::filesystem;
using pipeline::TrainConfig;

struct Options {
  std::optional<std::uint64_t> seed;

  std::string input;
  std::string kind;
  std::string out;
  std::string manifest;
  std::string vocab;
  std::string model;
  std::string config;
  std::string report;
  std::string format = "text";
  std::string trace;
  std::string vocab_out;
  std::string spec;
  std::size_t n = kDefaultVocabularySize;
  std::size_t top = 0;
  std::optional<std::size_t> k;
  std::optional<std::size_t> epochs;
  std::optional<double> val_split;
  bool vocab_from_all = false;
  int jobs = 1;
};

SourceKind kind_for(const Options& o) {
  return o.kind.empty() ? guess_source_kind(o.input) : parse_source_kind(o.kind);
}

void report_failures(const std::vector<pipeline::IngestFailure>& failures, std::ostream& err) {
  for (const auto& f : failures) err << "warning: skipped " << f.path << ": " << f.message << "\n";
}

void emit(const std::string& text, const std::string& path, std::ostream& out) {
  if (path.empty()) {
    out << text;
  } else {
    write_file_text(path, text);
  }
}

TrainConfig train_config_for(const Options& o) {
  TrainConfig cfg;
  if (!o.config.empty()) cfg = pipeline::parse_train_config(read_file_text(o.config));
  if (o.seed) cfg.seed = *o.seed;
  if (o.k) cfg.folds = *o.k;
  if (o.epochs) cfg.epochs = *o.epochs;
  if (o.val_split) cfg.val_split = *o.val_split;
  if (o.vocab_from_all) cfg.vocab_from_all = true;
  cfg.validate();
  return cfg;
}

int cmd_extract(const Options& o, std::ostream& out, std::ostream& err) {
  ExtractDiagnostics diag;
  const PermissionSet perms = load_permission_set(o.input, kind_for(o), &diag);
  if (diag.blank_names_skipped > 0) {
    err << "warning: skipped " << diag.blank_names_skipped << " uses-permission element(s) without a name\n";
  }
  emit(format_permission_list(perms), o.out, out);
  return kExitOk;
}

int cmd_vocab(const Options& o, std::ostream& out, std::ostream& err) {
  const auto corpus = pipeline::load_corpus(pipeline::load_dataset_manifest(o.manifest));
  report_failures(corpus.failures, err);
  const PermissionVocabulary vocab = build_vocabulary(corpus.sets, corpus.labels, o.n);
  emit(format_vocabulary(vocab), o.out, out);
  if (!o.report.empty()) {
    std::vector<PermissionSet> botnet, benign;
    for (std::size_t i = 0; i < corpus.size(); ++i) {
      (corpus.labels[i] == ClassLabel::Botnet ? botnet : benign).push_back(corpus.sets[i]);
    }
    std::string text;
    const std::size_t top = o.top == 0 ? o.n : o.top;
    if (!botnet.empty()) text += format_frequency_report(count_frequencies(botnet, ClassLabel::Botnet), top);
    if (!benign.empty()) {
      if (!text.empty()) text += "\n";
      text += format_frequency_report(count_frequencies(benign, ClassLabel::Benign), top);
    }
    write_file_text(o.report, text);
  }
  return kExitOk;
}

int cmd_encode(const Options& o, std::ostream& out, std::ostream&) {
  const PermissionVocabulary vocab = load_vocabulary(o.vocab);
  EncodeDiagnostics diag;
  const CoOccurrenceImage image = encode(load_permission_set(o.input, kind_for(o)), vocab, &diag);
  dump_pgm(image, o.out);
  out << "encoded " << diag.in_vocabulary << " of " << diag.in_vocabulary + diag.out_of_vocabulary
      << " permission(s) into a " << image.n() << "x" << image.n() << " image\n";
  return kExitOk;
}

int cmd_train(const Options& o, std::ostream& out, std::ostream& err) {
  const TrainConfig cfg = train_config_for(o);
  const auto corpus = pipeline::load_corpus(pipeline::load_dataset_manifest(o.manifest));
  report_failures(corpus.failures, err);
  const PermissionVocabulary vocab = build_vocabulary(corpus.sets, corpus.labels, cfg.vocab_size);
  const auto samples = pipeline::encode_samples(corpus, vocab);
  const auto result = pipeline::train(samples, cfg);
  nn::save_model(result.model, o.model);
  if (!o.vocab_out.empty()) save_vocabulary(vocab, o.vocab_out);
  if (!o.trace.empty()) write_file_text(o.trace, pipeline::format_trace_csv(result.trace));
  if (!result.trace.empty()) {
    const auto& last = result.trace.back();
    char buf[128];
    std::snprintf(buf, sizeof buf, "trained %zu epoch(s): loss %.6f, training accuracy %.6f\n", last.epoch,
                  last.train_loss, last.train_accuracy);
    out << buf;
  }
  return kExitOk;
}

int cmd_cv(const Options& o, std::ostream& out, std::ostream& err) {
  if (o.format != "text" && o.format != "json") throw Error(Errc::InvalidArgument, "--format must be text or json");
  const TrainConfig cfg = train_config_for(o);
  const auto corpus = pipeline::load_corpus(pipeline::load_dataset_manifest(o.manifest));
  report_failures(corpus.failures, err);
  const auto result = pipeline::cross_validate(corpus, cfg, nullptr, o.jobs);
  const std::string text =
      o.format == "json" ? pipeline::format_report_json(result) : pipeline::format_report_text(result);
  emit(text, o.report, out);
  if (!o.trace.empty()) {
    std::error_code ec;
    fs::create_directories(o.trace, ec);
    if (ec) throw Error(Errc::Io, "cannot create " + o.trace + ": " + ec.message());
    for (const auto& f : result.folds) {
      char name[32];
      std::snprintf(name, sizeof name, "fold_%02zu.csv", f.fold);
      write_file_text(fs::path(o.trace) / name, pipeline::format_trace_csv(f.trace));
    }
  }
  return kExitOk;
}

int cmd_predict(const Options& o, std::ostream& out, std::ostream&) {
  if (o.format != "text" && o.format != "json") throw Error(Errc::InvalidArgument, "--format must be text or json");
  const nn::CnnModel model = nn::load_model(o.model);
  const PermissionVocabulary vocab = load_vocabulary(o.vocab);
  const auto p = pipeline::predict(model, vocab, o.input, kind_for(o));
  char buf[256];
  if (o.format == "json") {
    std::snprintf(buf, sizeof buf, "{\"label\": \"%s\", \"botnet_probability\": %.17g}\n", to_string(p.label),
                  p.botnet_probability);
  } else {
    std::snprintf(buf, sizeof buf, "%s %.6f\n", to_string(p.label), p.botnet_probability);
  }
  out << buf;
  return kExitOk;
}

int cmd_synth(const Options& o, std::ostream& out, std::ostream&) {
  pipeline::SynthSpec spec;
  if (!o.spec.empty()) spec = pipeline::parse_synth_spec(read_file_text(o.spec));
  if (o.seed) spec.seed = *o.seed;
  const auto manifest = pipeline::write_synthetic_corpus(spec, o.out);
  out << "wrote " << manifest.records.size() << " samples to "
      << (fs::path(o.out) / pipeline::kSyntheticManifestName).string() << "\n";
  return kExitOk;
}

int exit_code_for(ErrorCategory c) { return static_cast<int>(c); }

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Android botnet detection from permission co-occurrence images", "permnet"};
  app.require_subcommand(1);
  app.fallthrough();
  app.add_option("--seed", o.seed, "Seed for every random choice (overrides config files)");

  auto* extract = app.add_subcommand("extract", "Print or save the permissions requested by a sample");
  extract->add_option("input", o.input, "APK, AndroidManifest.xml (binary or text) or permission list")->required();
  extract->add_option("--kind", o.kind, "apk, manifest or permlist (default: from extension)");
  extract->add_option("--out", o.out, "Output permission list (default: stdout)");

  auto* vocab = app.add_subcommand("vocab", "Build the permission vocabulary of a dataset");
  vocab->add_option("--manifest", o.manifest, "Dataset CSV")->required();
  vocab->add_option("--n", o.n, "Vocabulary size")->check(CLI::PositiveNumber);
  vocab->add_option("--out", o.out, "Output vocabulary file (default: stdout)");
  vocab->add_option("--report", o.report, "Write per-class frequency tables here");
  vocab->add_option("--top", o.top, "Rows per frequency table (default: --n)");

  auto* enc = app.add_subcommand("encode", "Render a sample's co-occurrence image as PGM");
  enc->add_option("input", o.input, "Sample file")->required();
  enc->add_option("--kind", o.kind, "apk, manifest or permlist (default: from extension)");
  enc->add_option("--vocab", o.vocab, "Vocabulary file")->required();
  enc->add_option("--out", o.out, "Output PGM image")->required();

  auto* tr = app.add_subcommand("train", "Train a model on a whole dataset");
  tr->add_option("--manifest", o.manifest, "Dataset CSV")->required();
  tr->add_option("--config", o.config, "JSON training configuration");
  tr->add_option("--model-out", o.model, "Output model file")->required();
  tr->add_option("--vocab-out", o.vocab_out, "Save the vocabulary used for training");
  tr->add_option("--trace", o.trace, "Per-epoch CSV trace");
  tr->add_option("--epochs", o.epochs, "Override the configured epoch count");

  auto* cv = app.add_subcommand("cv", "Stratified k-fold cross-validation");
  cv->add_option("--manifest", o.manifest, "Dataset CSV")->required();
  cv->add_option("--k", o.k, "Number of folds")->check(CLI::Range(2, 1000000));
  cv->add_option("--config", o.config, "JSON training configuration");
  cv->add_option("--epochs", o.epochs, "Override the configured epoch count");
  cv->add_option("--report", o.report, "Report file (default: stdout)");
  cv->add_option("--format", o.format, "text or json");
  cv->add_flag("--vocab-from-all", o.vocab_from_all, "Build one vocabulary from the whole dataset");
  cv->add_option("--val-split", o.val_split, "Fraction of each training set held out for validation");
  cv->add_option("--jobs", o.jobs, "Folds trained concurrently")->check(CLI::PositiveNumber);
  cv->add_option("--trace-dir", o.trace, "Write fold_NN.csv epoch traces here");

  auto* pr = app.add_subcommand("predict", "Classify one sample");
  pr->add_option("input", o.input, "Sample file")->required();
  pr->add_option("--kind", o.kind, "apk, manifest or permlist (default: from extension)");
  pr->add_option("--model", o.model, "Model file")->required();
  pr->add_option("--vocab", o.vocab, "Vocabulary file used in training")->required();
  pr->add_option("--format", o.format, "text or json");

  auto* sy = app.add_subcommand("synth", "Generate a synthetic labelled corpus");
  sy->add_option("--spec", o.spec, "JSON corpus specification");
  sy->add_option("--out", o.out, "Output directory")->required();

  std::vector<const char*> argv;
  argv.reserve(args.size());
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kExitUsage;
  }

  try {
    if (extract->parsed()) return cmd_extract(o, out, err);
    if (vocab->parsed()) return cmd_vocab(o, out, err);
    if (enc->parsed()) return cmd_encode(o, out, err);
    if (tr->parsed()) return cmd_train(o, out, err);
    if (cv->parsed()) return cmd_cv(o, out, err);
    if (pr->parsed()) return cmd_predict(o, out, err);
    if (sy->parsed()) return cmd_synth(o, out, err);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    if (category_of(e.code()) == ErrorCategory::Usage) err << "\n" << app.help();
    return exit_code_for(category_of(e.code()));
  } catch (const fs::filesystem_error& e) {
    err << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitParse;
  }
  err << app.help();
  return kExitUsage;
}

}  // namespace permnet::cli
