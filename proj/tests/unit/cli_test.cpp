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

#include <sstream>

#include "axml_writer.hpp"
#include "doctest.h"
#include "permnet/encoder.hpp"
#include "permnet/nn/model.hpp"
#include "permnet/pipeline/trainer.hpp"
#include "support.hpp"
#include "zip_writer.hpp"

using namespace permnet;
using namespace permnet::testing;

namespace {

struct Run {
  int code = 0;
  std::string out, err;
};

Run run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "permnet");
  std::ostringstream out, err;
  Run r;
  r.code = cli::run(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

const std::filesystem::path kFixtures = PERMNET_FIXTURE_DIR;

struct Workspace {
  TempDir dir{"cli"};
  std::string data;

  Workspace() {
    write_file_text(dir / "spec.json", R"({"botnet_count": 12, "benign_count": 12})");
    write_file_text(dir / "train.json", R"({"epochs": 2, "batch_size": 8, "vocab_size": 16})");
    REQUIRE(run_cli({"synth", "--spec", (dir / "spec.json").string(), "--out", (dir / "data").string(), "--seed", "4"})
                .code == 0);
    data = (dir / "data" / "dataset.csv").string();
  }
  std::string path(const std::string& name) const { return (dir / name).string(); }
};

}  // namespace

TEST_CASE("cli: usage errors exit 1 with a synopsis") {
  auto r = run_cli({});
  CHECK(r.code == 1);
  CHECK(r.err.find("Usage") != std::string::npos);
  CHECK(run_cli({"frobnicate"}).code == 1);
  CHECK(run_cli({"vocab"}).code == 1);
  CHECK(run_cli({"cv", "--manifest", "x.csv", "--k", "1"}).code == 1);
  CHECK(run_cli({"--help"}).code == 0);
}

TEST_CASE("cli: extract matches the golden permission list") {
  TempDir dir("cli_extract");
  const auto out = (dir / "perms.txt").string();
  const auto r = run_cli({"extract", (kFixtures / "AndroidManifest.xml").string(), "--out", out});
  CHECK(r.code == 0);
  CHECK(read_file_text(out) == read_file_text(kFixtures / "AndroidManifest.perms.txt"));

  // Same manifest compiled to binary XML inside an APK.
  const auto doc = parse_plain_manifest(read_file_text(kFixtures / "AndroidManifest.xml"));
  write_bytes(dir / "app.apk", write_zip({{"AndroidManifest.xml", write_axml(doc.root), true}}));
  const auto apk = run_cli({"extract", (dir / "app.apk").string()});
  CHECK(apk.code == 0);
  CHECK(apk.out == read_file_text(kFixtures / "AndroidManifest.perms.txt"));
}

TEST_CASE("cli: error categories map to stable exit codes") {
  Workspace ws;
  CHECK(run_cli({"extract", ws.path("missing.xml")}).code == 2);
  write_file_text(ws.dir / "bad.xml", "<manifest><oops></manifest>");
  CHECK(run_cli({"extract", ws.path("bad.xml")}).code == 3);
  write_file_text(ws.dir / "bad.csv", "path,label\n");
  CHECK(run_cli({"vocab", "--manifest", ws.path("bad.csv")}).code == 3);
  CHECK(run_cli({"cv", "--manifest", ws.data, "--format", "xml"}).code == 1);
  write_file_text(ws.dir / "diverge.json", R"({"epochs": 2, "vocab_size": 16, "learning_rate": 1e300})");
  CHECK(run_cli({"train", "--manifest", ws.data, "--config", ws.path("diverge.json"), "--model-out", ws.path("m.bin")})
            .code == 4);
}

TEST_CASE("cli: vocab and encode agree with the library") {
  Workspace ws;
  REQUIRE(run_cli({"vocab", "--manifest", ws.data, "--n", "10", "--out", ws.path("vocab.txt"), "--report",
                   ws.path("freq.txt")})
              .code == 0);
  const auto vocab = load_vocabulary(ws.path("vocab.txt"));
  CHECK(vocab.size() == 10);
  CHECK(read_file_text(ws.path("freq.txt")).find("botnet") != std::string::npos);

  const auto sample = ws.dir / "data" / "botnet_0000.txt";
  REQUIRE(run_cli({"encode", sample.string(), "--vocab", ws.path("vocab.txt"), "--out", ws.path("img.pgm")}).code == 0);
  const auto pgm = read_pgm(ws.path("img.pgm"));
  const auto expected = encode(load_permission_set(sample, SourceKind::PermissionList), vocab);
  CHECK(pgm.width == 10);
  CHECK(pgm.pixels == expected.pixels());
}

TEST_CASE("cli: train then predict equals the library prediction") {
  Workspace ws;
  REQUIRE(run_cli({"train", "--manifest", ws.data, "--config", ws.path("train.json"), "--model-out", ws.path("m.bin"),
                   "--vocab-out", ws.path("v.txt"), "--trace", ws.path("trace.csv")})
              .code == 0);
  CHECK(read_file_text(ws.path("trace.csv")).rfind("epoch,train_loss,train_acc\n1,", 0) == 0);
  const auto sample = ws.dir / "data" / "benign_0003.txt";
  const auto r = run_cli({"predict", sample.string(), "--model", ws.path("m.bin"), "--vocab", ws.path("v.txt"),
                          "--format", "json"});
  REQUIRE(r.code == 0);
  const auto p = pipeline::predict(nn::load_model(ws.path("m.bin")), load_vocabulary(ws.path("v.txt")), sample,
                                   SourceKind::PermissionList);
  char expected[160];
  std::snprintf(expected, sizeof expected, "{\"label\": \"%s\", \"botnet_probability\": %.17g}\n", to_string(p.label),
                p.botnet_probability);
  CHECK(r.out == expected);
}

TEST_CASE("cli: cv twice with one seed gives byte-identical reports and traces") {
  Workspace ws;
  for (const char* fmt : {"text", "json"}) {
    const std::vector<std::string> base = {"cv",      "--manifest", ws.data, "--k",      "2", "--seed", "9",
                                           "--config", ws.path("train.json"), "--format", fmt};
    auto a = base, b = base;
    a.insert(a.end(), {"--report", ws.path("a.out"), "--trace-dir", ws.path("ta")});
    b.insert(b.end(), {"--report", ws.path("b.out"), "--trace-dir", ws.path("tb"), "--jobs", "2"});
    REQUIRE(run_cli(a).code == 0);
    REQUIRE(run_cli(b).code == 0);
    CHECK(read_file_text(ws.path("a.out")) == read_file_text(ws.path("b.out")));
    CHECK(read_file_text(ws.dir / "ta" / "fold_01.csv") == read_file_text(ws.dir / "tb" / "fold_01.csv"));
  }
  CHECK(read_file_text(ws.path("a.out")).find("\"seed\": 9") != std::string::npos);
}

TEST_CASE("cli: synth honours the global seed") {
  TempDir dir("cli_synth");
  REQUIRE(run_cli({"--seed", "1", "synth", "--out", (dir / "a").string()}).code == 0);
  REQUIRE(run_cli({"synth", "--out", (dir / "b").string(), "--seed", "1"}).code == 0);
  REQUIRE(run_cli({"synth", "--out", (dir / "c").string(), "--seed", "2"}).code == 0);
  CHECK(read_file_text(dir / "a" / "botnet_0007.txt") == read_file_text(dir / "b" / "botnet_0007.txt"));
  CHECK(read_file_text(dir / "a" / "dataset.csv").size() > 1000);
  bool differs = false;
  for (int i = 0; i < 10; ++i) {
    const std::string name = "benign_000" + std::to_string(i) + ".txt";
    differs |= read_file_text(dir / "a" / name) != read_file_text(dir / "c" / name);
  }
  CHECK(differs);
}
