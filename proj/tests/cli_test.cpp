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

#include <cstdlib>
#include <sstream>

#include "segbias/cli.hpp"
#include "segbias/model_io.hpp"
#include "testutil.hpp"

using namespace segbias;

namespace {

// Silences and captures std::cerr / std::cout for one call.
struct StreamCapture {
  StreamCapture()
      : old_out(std::cout.rdbuf(out.rdbuf())), old_err(std::cerr.rdbuf(err.rdbuf())) {}
  ~StreamCapture() {
    std::cout.rdbuf(old_out);
    std::cerr.rdbuf(old_err);
  }
  std::ostringstream out;
  std::ostringstream err;
  std::streambuf* old_out;
  std::streambuf* old_err;
};

int run_cli(const std::vector<std::string>& args, std::string* err_text = nullptr,
            std::string* out_text = nullptr) {
  StreamCapture capture;
  const int code = cli::run(args);
  if (err_text != nullptr) *err_text = capture.err.str();
  if (out_text != nullptr) *out_text = capture.out.str();
  return code;
}

const char* kBenchText =
    "ID\tCATEGORY\tSRC\tREF_CORRECT\tREF_WRONG\tTERMS\n"
    "e1\t1F\tI am tired\tje suis fatiguée\tje suis fatigué\tfatiguée>fatigué\n"
    "e2\t1M\the is gone\til est allé\til est allée\tallé>allée\n";

}  // namespace

TEST_CASE("train writes a model file and exits zero") {
  testutil::TempDir dir;
  const auto corpus = dir.file("c.txt");
  const auto model_path = dir.file("m.sbm");
  testutil::write_file(corpus, testutil::corpus_text(testutil::synthetic_corpus(60, 1)));

  CHECK(run_cli({"train", "--method", "bpe", "--merges", "25", "--input", corpus,
                 "--model", model_path}) == 0);
  const auto model = load_model(model_path);
  CHECK(model.method == Method::kBpe);
  CHECK(model.merges.merges.size() <= 25);
}

TEST_CASE("apply and deseg invert each other through files") {
  testutil::TempDir dir;
  const auto corpus = dir.file("c.txt");
  const auto model_path = dir.file("m.sbm");
  const auto seg_path = dir.file("seg.txt");
  const auto flat_path = dir.file("flat.txt");
  const std::string text = "uno due tre\n\nquattro\n";
  testutil::write_file(corpus, text);

  REQUIRE(run_cli({"train", "--method", "char", "--input", corpus, "--model",
                   model_path}) == 0);
  REQUIRE(run_cli({"apply", "--model", model_path, "--input", corpus, "--out",
                   seg_path}) == 0);
  const std::string segmented = testutil::read_file(seg_path);
  CHECK(segmented.find("u@@ n@@ o") == 0);
  // blank lines pass through
  CHECK(segmented.find("\n\n") != std::string::npos);

  REQUIRE(run_cli({"deseg", "--input", seg_path, "--out", flat_path}) == 0);
  CHECK(testutil::read_file(flat_path) == text);
}

TEST_CASE("eval-gender exports a machine report") {
  testutil::TempDir dir;
  const auto bench_path = dir.file("b.tsv");
  const auto hyp_path = dir.file("h.txt");
  const auto out_path = dir.file("r.tsv");
  testutil::write_file(bench_path, kBenchText);
  testutil::write_file(hyp_path, "je suis fatiguée\nil est allée\n");

  CHECK(run_cli({"eval-gender", "--benchmark", bench_path, "--hyp", hyp_path,
                 "--out", out_path}) == 0);
  const ReportBundle bundle = import_machine(out_path);
  REQUIRE(bundle.accuracy.has_value());
  CHECK(bundle.accuracy->category(Category::k1F).correct == 1);
  CHECK(bundle.accuracy->category(Category::k1M).wrong == 1);
  CHECK(bundle.meta.config.at("subcommand") == "eval-gender");
  CHECK(bundle.meta.input_digests.count("benchmark") == 1);
}

TEST_CASE("eval-gender line-count mismatch names both counts") {
  testutil::TempDir dir;
  const auto bench_path = dir.file("b.tsv");
  const auto hyp_path = dir.file("h.txt");
  testutil::write_file(bench_path, kBenchText);
  testutil::write_file(hyp_path, "je suis fatiguée\n");

  std::string err;
  CHECK(run_cli({"eval-gender", "--benchmark", bench_path, "--hyp", hyp_path},
                &err) == 1);
  CHECK(err.find("1") != std::string::npos);
  CHECK(err.find("2") != std::string::npos);
}

TEST_CASE("exit codes separate validation from io failures") {
  testutil::TempDir dir;
  std::string err;

  SUBCASE("missing input file is exit 2") {
    CHECK(run_cli({"apply", "--model", dir.file("none.sbm"), "--input",
                   dir.file("none.txt")},
                  &err) == 2);
  }
  SUBCASE("unknown subcommand is exit 1") {
    CHECK(run_cli({"frobnicate"}, &err) == 1);
  }
  SUBCASE("unknown flag is exit 1") {
    CHECK(run_cli({"deseg", "--nope", "x"}, &err) == 1);
  }
  SUBCASE("bad flag value is exit 1") {
    const auto corpus = dir.file("c.txt");
    testutil::write_file(corpus, "a b\n");
    CHECK(run_cli({"train", "--method", "bpe", "--merges", "0", "--input",
                   corpus, "--model", dir.file("m.sbm")},
                  &err) == 1);
  }
  SUBCASE("malformed corpus content is exit 1") {
    const auto corpus = dir.file("c.txt");
    testutil::write_file(corpus, "x@@y\n");
    CHECK(run_cli({"train", "--method", "char", "--input", corpus, "--model",
                   dir.file("m.sbm")},
                  &err) == 1);
    CHECK(err.find(":1") != std::string::npos);
  }
}

TEST_CASE("config files feed flags and the command line wins") {
  testutil::TempDir dir;
  const auto corpus = dir.file("c.txt");
  const auto config = dir.file("train.cfg");
  const auto model_path = dir.file("m.sbm");
  testutil::write_file(corpus, testutil::corpus_text(testutil::synthetic_corpus(50, 2)));
  testutil::write_file(config, "# training defaults\nmethod = bpe\nmerges = 5\n");

  SUBCASE("values come from the file") {
    CHECK(run_cli({"train", "--config", config, "--input", corpus, "--model",
                   model_path}) == 0);
    CHECK(load_model(model_path).merges.merges.size() <= 5);
  }
  SUBCASE("explicit flags override the file") {
    CHECK(run_cli({"train", "--config", config, "--merges", "2", "--input",
                   corpus, "--model", model_path}) == 0);
    CHECK(load_model(model_path).merges.merges.size() <= 2);
  }
}

TEST_CASE("vocab reports the model size") {
  testutil::TempDir dir;
  const auto corpus = dir.file("c.txt");
  const auto model_path = dir.file("m.sbm");
  const auto out_path = dir.file("v.tsv");
  testutil::write_file(corpus, "abc abd\n");

  REQUIRE(run_cli({"train", "--method", "char", "--input", corpus, "--model",
                   model_path}) == 0);
  CHECK(run_cli({"vocab", "--model", model_path, "--out", out_path}) == 0);
  const ReportBundle bundle = import_machine(out_path);
  REQUIRE(bundle.vocab.has_value());
  CHECK(bundle.vocab->at(0).method == "char");
  CHECK(bundle.vocab->at(0).size == 4);  // a b c d

  std::string out;
  CHECK(run_cli({"vocab", "--model", model_path, "--dump-entries"}, nullptr,
                &out) == 0);
  CHECK(out.find("a\n") != std::string::npos);
}

TEST_CASE("eval-length, eval-isolation and analyze-asymmetry run end to end") {
  testutil::TempDir dir;
  const auto corpus = dir.file("c.txt");
  const auto bench_path = dir.file("b.tsv");
  const auto model_path = dir.file("m.sbm");
  testutil::write_file(corpus, "fatiguée fatigué allé allée fatigué fatigué\n");
  testutil::write_file(bench_path, kBenchText);
  REQUIRE(run_cli({"train", "--method", "char", "--input", corpus, "--model",
                   model_path}) == 0);

  SUBCASE("eval-length macro") {
    const auto out_path = dir.file("len.tsv");
    CHECK(run_cli({"eval-length", "--benchmark", bench_path, "--model",
                   model_path, "--out", out_path}) == 0);
    const ReportBundle bundle = import_machine(out_path);
    REQUIRE(bundle.increment.has_value());
    CHECK(bundle.increment->entries.size() == 2);
  }
  SUBCASE("eval-isolation on the benchmark pairs") {
    const auto out_path = dir.file("iso.jsonl");
    CHECK(run_cli({"eval-isolation", "--benchmark", bench_path, "--model",
                   model_path, "--out", out_path, "--format", "json-lines"}) == 0);
    const ReportBundle bundle = import_machine(out_path);
    REQUIRE(bundle.isolation.has_value());
    CHECK(bundle.isolation->isolation_rate_pct() == 100.0);  // char model
  }
  SUBCASE("analyze-asymmetry over the training corpus") {
    const auto out_path = dir.file("asym.tsv");
    CHECK(run_cli({"analyze-asymmetry", "--benchmark", bench_path, "--corpus",
                   corpus, "--out", out_path}) == 0);
    const ReportBundle bundle = import_machine(out_path);
    REQUIRE(bundle.asymmetry.has_value());
    CHECK(bundle.asymmetry->n_pairs == 2);
    // fatiguée:1 < fatigué:3 rarer; allée:1 == allé:1 not rarer
    CHECK(bundle.asymmetry->pct_feminine_rarer == 50.0);
  }
  SUBCASE("pairs and benchmark flags are mutually exclusive") {
    std::string err;
    CHECK(run_cli({"eval-isolation", "--model", model_path}, &err) == 1);
    CHECK(err.find("exactly one") != std::string::npos);
  }
}

TEST_CASE("eval-diversity scores a text file") {
  testutil::TempDir dir;
  const auto input = dir.file("t.txt");
  const auto out_path = dir.file("d.tsv");
  testutil::write_file(input, "a b a b\n");

  CHECK(run_cli({"eval-diversity", "--input", input, "--window", "2", "--out",
                 out_path}) == 0);
  const ReportBundle bundle = import_machine(out_path);
  REQUIRE(bundle.diversity.has_value());
  CHECK(bundle.diversity->ttr_pct == 50.0);
  CHECK(bundle.diversity->window == 2);
}

TEST_CASE("report re-renders and re-exports machine files") {
  testutil::TempDir dir;
  const auto bench_path = dir.file("b.tsv");
  const auto hyp_path = dir.file("h.txt");
  const auto tsv_path = dir.file("r.tsv");
  testutil::write_file(bench_path, kBenchText);
  testutil::write_file(hyp_path, "je suis fatiguée\nil est allé\n");
  REQUIRE(run_cli({"eval-gender", "--benchmark", bench_path, "--hyp", hyp_path,
                   "--out", tsv_path}) == 0);

  SUBCASE("re-export is byte-identical to the source") {
    const auto again = dir.file("again.tsv");
    CHECK(run_cli({"report", "--in", tsv_path, "--format", "tsv", "--out",
                   again}) == 0);
    CHECK(testutil::read_file(again) == testutil::read_file(tsv_path));
  }
  SUBCASE("text rendering mentions the accuracy table") {
    const auto text_path = dir.file("r.txt");
    CHECK(run_cli({"report", "--in", tsv_path, "--out", text_path}) == 0);
    const std::string text = testutil::read_file(text_path);
    CHECK(text.find("[accuracy]") != std::string::npos);
    CHECK(text.find("100.00") != std::string::npos);
  }
}

TEST_CASE("SEGBIAS_THREADS does not change apply output") {
  testutil::TempDir dir;
  const auto corpus = dir.file("c.txt");
  const auto model_path = dir.file("m.sbm");
  testutil::write_file(corpus, testutil::corpus_text(testutil::synthetic_corpus(80, 4)));
  REQUIRE(run_cli({"train", "--method", "bpe", "--merges", "30", "--input",
                   corpus, "--model", model_path}) == 0);

  const auto seq_path = dir.file("seq.txt");
  const auto par_path = dir.file("par.txt");
  REQUIRE(run_cli({"apply", "--model", model_path, "--input", corpus, "--out",
                   seq_path}) == 0);
  setenv("SEGBIAS_THREADS", "4", 1);
  REQUIRE(run_cli({"apply", "--model", model_path, "--input", corpus, "--out",
                   par_path}) == 0);
  unsetenv("SEGBIAS_THREADS");
  CHECK(testutil::read_file(seq_path) == testutil::read_file(par_path));
}

TEST_CASE("help exits zero") {
  std::string out;
  CHECK(run_cli({"--help"}, nullptr, &out) == 0);
  CHECK(out.find("train") != std::string::npos);
}
