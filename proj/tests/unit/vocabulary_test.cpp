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

#include "permnet/vocabulary.hpp"

#include <map>
#include <random>

#include "doctest.h"
#include "support.hpp"
#include "test_util.hpp"

using namespace permnet;
using namespace permnet::testing;

namespace {

PermissionSet make_set(std::vector<std::string> perms) {
  PermissionSet s;
  s.permissions.insert(perms.begin(), perms.end());
  return s;
}

}  // namespace

TEST_CASE("vocabulary: per-class frequencies count each app once") {
  const std::vector<PermissionSet> sets = {make_set({"A", "B"}), make_set({"A"}), make_set({"A", "C"}),
                                           make_set({})};
  const auto f = count_frequencies(sets, ClassLabel::Botnet);
  CHECK(f.corpus_size == 4);
  REQUIRE(f.entries.size() == 3);
  CHECK(f.entries[0] == FrequencyEntry{"A", 3, 0.75});
  CHECK(f.entries[1] == FrequencyEntry{"B", 1, 0.25});
  CHECK(f.entries[2] == FrequencyEntry{"C", 1, 0.25});
  CHECK(f.fraction_of("A") == 0.75);
  CHECK(f.fraction_of("Z") == 0.0);
  CHECK_ERRC(count_frequencies({}, ClassLabel::Benign), Errc::EmptyCorpus);
}

TEST_CASE("vocabulary: merge ranks by summed class fractions") {
  // Botnet: 4 apps; benign: 2 apps.
  const std::vector<PermissionSet> bot = {make_set({"SMS", "NET"}), make_set({"SMS", "NET"}), make_set({"SMS"}),
                                          make_set({"BOOT"})};
  const std::vector<PermissionSet> ben = {make_set({"NET", "CAM"}), make_set({"NET"})};
  const auto v = merge_vocabulary(count_frequencies(bot, ClassLabel::Botnet), count_frequencies(ben, ClassLabel::Benign),
                                  10);
  // NET: 0.5 + 1.0, SMS: 0.75, CAM: 0.5, BOOT: 0.25
  CHECK(v.permissions() == std::vector<std::string>{"NET", "SMS", "CAM", "BOOT"});
  const auto top2 = merge_vocabulary(count_frequencies(bot, ClassLabel::Botnet),
                                     count_frequencies(ben, ClassLabel::Benign), 2);
  CHECK(top2.permissions() == std::vector<std::string>{"NET", "SMS"});
  CHECK_ERRC(merge_vocabulary(count_frequencies(bot, ClassLabel::Botnet), count_frequencies(ben, ClassLabel::Benign), 0),
             Errc::InvalidArgument);
}

TEST_CASE("vocabulary: ties break by name and ranking matches a brute-force oracle") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<PermissionSet> sets;
    std::vector<ClassLabel> labels;
    const std::size_t count = 2 + rng() % 30;
    for (std::size_t i = 0; i < count; ++i) {
      PermissionSet s;
      for (int p = 0; p < 12; ++p) {
        if (rng() % 3 == 0) s.permissions.insert("perm." + std::to_string(p));
      }
      sets.push_back(s);
      labels.push_back(i % 2 ? ClassLabel::Botnet : ClassLabel::Benign);
    }
    const std::size_t n = 1 + rng() % 14;
    const auto vocab = build_vocabulary(sets, labels, n);

    std::map<std::string, std::pair<double, double>> counts;  // (botnet, benign)
    double nb = 0, ng = 0;
    for (std::size_t i = 0; i < sets.size(); ++i) {
      (labels[i] == ClassLabel::Botnet ? nb : ng) += 1;
      for (const auto& p : sets[i].permissions) {
        (labels[i] == ClassLabel::Botnet ? counts[p].first : counts[p].second) += 1;
      }
    }
    std::vector<std::pair<double, std::string>> ranked;
    for (const auto& [p, c] : counts) ranked.push_back({-(c.first / nb + c.second / ng), p});
    std::sort(ranked.begin(), ranked.end());
    std::vector<std::string> expected;
    for (std::size_t i = 0; i < std::min(n, ranked.size()); ++i) expected.push_back(ranked[i].second);
    REQUIRE(vocab.permissions() == expected);
  }
}

TEST_CASE("vocabulary: duplicate permissions are rejected") {
  CHECK_ERRC(PermissionVocabulary({"A", "B", "A"}), Errc::DuplicateEntry);
  const PermissionVocabulary v({"A", "B"});
  CHECK(v.index_of("B") == 1u);
  CHECK_FALSE(v.index_of("C").has_value());
}

TEST_CASE("vocabulary: file format round-trip") {
  const PermissionVocabulary v({"android.permission.INTERNET", "android.permission.SEND_SMS"});
  CHECK(parse_vocabulary(format_vocabulary(v)) == v);
  CHECK(parse_vocabulary("# header\n\nX\n  Y \n") == PermissionVocabulary({"X", "Y"}));
  CHECK_ERRC(parse_vocabulary("# only comments\n"), Errc::EmptyFile);
  TempDir dir("vocab");
  save_vocabulary(v, dir / "v.txt");
  CHECK(load_vocabulary(dir / "v.txt") == v);
}

TEST_CASE("vocabulary: class labels") {
  CHECK(parse_class_label("botnet") == ClassLabel::Botnet);
  CHECK(parse_class_label("benign") == ClassLabel::Benign);
  CHECK(std::string(to_string(ClassLabel::Botnet)) == "botnet");
  CHECK_ERRC(parse_class_label("malware"), Errc::MalformedCsv);
}

TEST_CASE("vocabulary: frequency report lists the top rows") {
  const std::vector<PermissionSet> sets = {make_set({"A", "B"}), make_set({"A"})};
  const auto report = format_frequency_report(count_frequencies(sets, ClassLabel::Botnet), 1);
  CHECK(report.find("  A\n") != std::string::npos);
  CHECK(report.find("  B\n") == std::string::npos);
}
