// Copyright 2026 The segbias authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "segbias/report.hpp"
#include "testutil.hpp"

using namespace segbias;

namespace {

ReportBundle sample_bundle() {
  ReportBundle bundle;
  bundle.meta.tool_version = "segbias 0.1.0";
  bundle.meta.config = {{"subcommand", "eval-gender"}, {"benchmark", "b.tsv"}};
  bundle.meta.input_digests = {{"benchmark", "fnv1a64:00deadbeef015eed"}};

  bundle.vocab = std::vector<VocabRow>{{"bpe", 8048}, {"char", 304}};

  AccuracyReport acc;
  acc.all.correct = 10;
  acc.all.wrong = 3;
  acc.all.not_found = 2;
  acc.per_category[Category::k1F] = {4, 3, 0};
  acc.per_category[Category::k1M] = {6, 0, 1};
  acc.per_category[Category::k2F] = {0, 0, 1};  // accuracy undefined
  acc.per_category[Category::k2M] = {0, 0, 0};
  bundle.accuracy = acc;

  DiversityReport div;
  div.ttr_pct = 16.12;
  div.mattr_pct = 41.39;
  div.window = 1000;
  div.token_count = 35000;
  div.type_count = 5642;
  bundle.diversity = div;

  IncrementReport inc;
  inc.averaging = Averaging::kMacro;
  inc.mean_increment_pct = 1.04;
  inc.entries = {{"e1", 21, 20, 5.0}, {"e2", 33, 33, 0.0}};
  bundle.increment = inc;

  IsolationReport iso;
  iso.isolated_count = 7;
  iso.total_pairs = 9;
  iso.skipped_multiword = 1;
  iso.verdicts = {{"adoptée", "adopté", 6, true}, {"amiche", "amici", 4, false}};
  bundle.isolation = iso;

  AsymmetryReport asym;
  asym.pct_feminine_rarer = 86.0;
  asym.pct_feminine_longer = 95.0;
  asym.n_pairs = 200;
  asym.exceptions = {{"incinta", "incinto", 55, 3}};
  bundle.asymmetry = asym;

  return bundle;
}

bool bundles_equal(const ReportBundle& a, const ReportBundle& b) {
  return export_machine_string(a, ExportFormat::kTsv) ==
             export_machine_string(b, ExportFormat::kTsv) &&
         export_machine_string(a, ExportFormat::kJsonLines) ==
             export_machine_string(b, ExportFormat::kJsonLines);
}

}  // namespace

TEST_CASE("two-decimal rendering rounds half to even") {
  CHECK(detail::format_fixed2(0.125) == "0.12");
  CHECK(detail::format_fixed2(0.375) == "0.38");
  CHECK(detail::format_fixed2(65.18) == "65.18");
  CHECK(detail::format_fixed2(0.0) == "0.00");
  CHECK(detail::format_fixed2(-1.005) == "-1.00");  // stored below the tie
}

TEST_CASE("text rendering is deterministic and column-complete") {
  const ReportBundle bundle = sample_bundle();
  const std::string a = render_text(bundle);
  const std::string b = render_text(bundle);
  CHECK(a == b);

  // accuracy section carries exactly the five category columns in order
  CHECK(a.find("ALL") != std::string::npos);
  const size_t all_pos = a.find("ALL");
  const size_t f1_pos = a.find("1F", all_pos);
  const size_t m1_pos = a.find("1M", f1_pos);
  const size_t f2_pos = a.find("2F", m1_pos);
  const size_t m2_pos = a.find("2M", f2_pos);
  CHECK(m2_pos != std::string::npos);

  // undefined accuracy renders as an em dash
  CHECK(a.find("—") != std::string::npos);

  // every section header shows up
  for (const char* name :
       {"[vocab]", "[accuracy]", "[diversity]", "[increment]", "[isolation]",
        "[asymmetry]"}) {
    CHECK(a.find(name) != std::string::npos);
  }
}

TEST_CASE("empty bundles are rejected") {
  ReportBundle empty;
  CHECK_THROWS_AS(render_text(empty), ValidationError);
  CHECK_THROWS_AS(export_machine_string(empty, ExportFormat::kTsv),
                  ValidationError);
}

TEST_CASE("tsv export round-trips losslessly") {
  testutil::TempDir dir;
  const ReportBundle bundle = sample_bundle();
  const auto path = dir.file("r.tsv");
  export_machine(bundle, path, ExportFormat::kTsv);

  const ReportBundle back = import_machine(path);
  CHECK(bundles_equal(bundle, back));

  // numeric values reconstruct exactly
  CHECK(back.diversity->ttr_pct == bundle.diversity->ttr_pct);
  CHECK(back.increment->entries[0].increment_pct == 5.0);
  CHECK(back.accuracy->category(Category::k2F).accuracy_pct() ==
        bundle.accuracy->category(Category::k2F).accuracy_pct());

  // one header row per section
  const std::string text = testutil::read_file(path);
  size_t sections = 0;
  size_t pos = 0;
  while ((pos = text.find("#SECTION ", pos)) != std::string::npos) {
    ++sections;
    pos += 9;
  }
  CHECK(sections == 9);  // six sections + three detail tables
}

TEST_CASE("json-lines export round-trips losslessly") {
  testutil::TempDir dir;
  const ReportBundle bundle = sample_bundle();
  const auto path = dir.file("r.jsonl");
  export_machine(bundle, path, ExportFormat::kJsonLines);

  const ReportBundle back = import_machine(path);
  CHECK(bundles_equal(bundle, back));
  CHECK(back.meta.tool_version == bundle.meta.tool_version);
  CHECK(back.meta.config == bundle.meta.config);

  // every line is one self-describing object
  const std::string text = testutil::read_file(path);
  std::istringstream lines(text);
  std::string line;
  while (std::getline(lines, line)) {
    const auto j = nlohmann::json::parse(line);
    CHECK(j.contains("section"));
  }
}

TEST_CASE("undefined ratios export as null") {
  ReportBundle bundle;
  bundle.meta.tool_version = "segbias 0.1.0";
  AccuracyReport acc;
  for (Category c : kAllCategories) acc.per_category[c];
  acc.per_category[Category::k1F].not_found = 1;
  acc.all.not_found = 1;
  bundle.accuracy = acc;

  const std::string tsv = export_machine_string(bundle, ExportFormat::kTsv);
  CHECK(tsv.find("null") != std::string::npos);
  const std::string jsonl = export_machine_string(bundle, ExportFormat::kJsonLines);
  CHECK(jsonl.find("\"accuracy_pct\":null") != std::string::npos);
}

TEST_CASE("file digests change with content") {
  testutil::TempDir dir;
  const auto path = dir.file("input.txt");
  testutil::write_file(path, "alpha\n");
  const std::string d1 = detail::file_digest(path);
  testutil::write_file(path, "beta\n");
  const std::string d2 = detail::file_digest(path);
  CHECK(d1 != d2);
  CHECK(d1.rfind("fnv1a64:", 0) == 0);

  // identical content, identical digest
  testutil::write_file(path, "alpha\n");
  CHECK(detail::file_digest(path) == d1);
}
