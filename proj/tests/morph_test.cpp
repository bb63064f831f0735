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

#include <cmath>
#include <map>
#include <set>

#include "segbias/model_io.hpp"
#include "segbias/morph_trainer.hpp"
#include "testutil.hpp"

using namespace segbias;

namespace {

// Independent MDL cost: computed from scratch out of word counts and
// flat analyses, with no shared code with the trainer's incremental
// bookkeeping.
double oracle_mdl_cost(
    const std::map<std::string, uint64_t>& word_counts,
    const std::map<std::string, std::vector<std::string>>& analyses) {
  std::map<std::string, uint64_t> morph_counts;
  for (const auto& [word, count] : word_counts) {
    for (const auto& morph : analyses.at(word)) morph_counts[morph] += count;
  }
  uint64_t n = 0;
  for (const auto& [morph, count] : morph_counts) n += count;

  double corpus_cost = 0.0;
  for (const auto& [morph, count] : morph_counts) {
    corpus_cost -= static_cast<double>(count) *
                   std::log2(static_cast<double>(count) / static_cast<double>(n));
  }

  std::map<char32_t, uint64_t> char_counts;
  uint64_t total_chars = 0;
  for (const auto& [morph, count] : morph_counts) {
    const auto cps = uni::try_decode_utf8(morph);
    for (char32_t cp : *cps) {
      ++char_counts[cp];
      ++total_chars;
    }
  }
  const uint64_t lex_size = morph_counts.size();
  const double t = static_cast<double>(total_chars + lex_size);
  double lexicon_cost = 0.0;
  for (const auto& [morph, count] : morph_counts) {
    const auto cps = uni::try_decode_utf8(morph);
    for (char32_t cp : *cps) {
      lexicon_cost -= std::log2(static_cast<double>(char_counts.at(cp)) / t);
    }
    lexicon_cost -= std::log2(static_cast<double>(lex_size) / t);
  }
  return corpus_cost + lexicon_cost;
}

}  // namespace

TEST_CASE("repeated-stem word splits into its halves") {
  const std::map<std::string, uint64_t> counts = {{"abcabc", 50}};

  // hand check first: the split must genuinely cost less
  const double unsplit =
      oracle_mdl_cost(counts, {{"abcabc", {"abcabc"}}});
  const double split = oracle_mdl_cost(counts, {{"abcabc", {"abc", "abc"}}});
  CHECK(split < unsplit);
  CHECK(split == doctest::Approx(8.0).epsilon(1e-12));

  MorphTrainStats stats;
  const auto model = train_morfessor(testutil::corpus_from_counts(counts), {}, &stats);
  CHECK(model.lexicon.word_analyses.at("abcabc") ==
        std::vector<std::string>{"abc", "abc"});
  CHECK(model.lexicon.morphs.at("abc") == 100);

  // trainer's incremental cost agrees with the from-scratch oracle
  std::map<std::string, std::vector<std::string>> analyses(
      model.lexicon.word_analyses.begin(), model.lexicon.word_analyses.end());
  CHECK(stats.epoch_cost.back() ==
        doctest::Approx(oracle_mdl_cost(counts, analyses)).epsilon(1e-9));
}

TEST_CASE("epoch cost never increases") {
  const Corpus corpus = testutil::synthetic_corpus(300, 77);
  MorphTrainStats stats;
  train_morfessor(corpus, {}, &stats);
  REQUIRE(!stats.epoch_cost.empty());
  for (size_t i = 1; i < stats.epoch_cost.size(); ++i) {
    CHECK(stats.epoch_cost[i] <= stats.epoch_cost[i - 1] + 1e-9);
  }
}

TEST_CASE("every morph appears in at least one analysis") {
  const Corpus corpus = testutil::synthetic_corpus(200, 5);
  const auto model = train_morfessor(corpus);

  std::set<std::string> used;
  for (const auto& [word, analysis] : model.lexicon.word_analyses) {
    std::string concat;
    for (const auto& morph : analysis) {
      used.insert(morph);
      concat += morph;
      CHECK(model.lexicon.morphs.count(morph) == 1);
    }
    CHECK(concat == word);
  }
  for (const auto& [morph, count] : model.lexicon.morphs) {
    CHECK(used.count(morph) == 1);
    CHECK(count > 0);
  }

  // incremental trainer cost equals the oracle on the final state
  const auto freq = word_counts(corpus);
  std::map<std::string, uint64_t> counts(freq.entries.begin(), freq.entries.end());
  std::map<std::string, std::vector<std::string>> analyses(
      model.lexicon.word_analyses.begin(), model.lexicon.word_analyses.end());
  MorphTrainStats stats;
  train_morfessor(corpus, {}, &stats);
  CHECK(stats.epoch_cost.back() ==
        doctest::Approx(oracle_mdl_cost(counts, analyses)).epsilon(1e-9));
}

TEST_CASE("lmvr respects its lexicon cap") {
  const Corpus corpus = testutil::synthetic_corpus(200, 31);
  const auto alphabet_size = train_char(corpus).alphabet.size();

  const uint64_t cap = alphabet_size + 5;
  const auto model = train_lmvr(corpus, cap);
  CHECK(model.lexicon.morphs.size() <= cap);
  CHECK(model.lexicon.cap == cap);

  SUBCASE("cap below the alphabet is rejected") {
    CHECK_THROWS_AS(train_lmvr(corpus, alphabet_size - 1), ValidationError);
  }
}

TEST_CASE("uncapped lmvr matches morfessor byte for byte") {
  const Corpus corpus = testutil::synthetic_corpus(150, 13);
  const auto morf = train_morfessor(corpus);
  const auto lmvr = train_lmvr(corpus, std::nullopt);

  CHECK(lmvr.lexicon.morphs == morf.lexicon.morphs);
  CHECK(lmvr.lexicon.word_analyses == morf.lexicon.word_analyses);

  // serialized payloads (records after the header) are byte-identical
  auto payload = [](const SegmentationModel& m) {
    const std::string text = detail::serialize_model(m);
    return text.substr(text.find('\n') + 1);
  };
  CHECK(payload(morf) == payload(lmvr));
}

TEST_CASE("training twice is deterministic") {
  const Corpus corpus = testutil::synthetic_corpus(120, 29);
  const auto a = train_morfessor(corpus);
  const auto b = train_morfessor(corpus);
  CHECK(a.lexicon.morphs == b.lexicon.morphs);
  CHECK(a.lexicon.word_analyses == b.lexicon.word_analyses);
}

TEST_CASE("empty corpus is rejected") {
  CHECK_THROWS_AS(train_morfessor(Corpus{}), ValidationError);
  CHECK_THROWS_AS(train_lmvr(Corpus{}, 100), ValidationError);
}

TEST_CASE("morph lattice costs follow the count distribution") {
  // lexicon {ab: 3, c: 1}, N = 4
  //   [ab, c]   costs -log2(3/4) - log2(1/4)            = 2.415 bits
  //   [a, b, c] costs 2 * -log2(0.5/4) - log2(1/4)      = 8 bits
  SegmentationModel model;
  model.method = Method::kMorfessor;
  model.alphabet = {"a", "b", "c"};
  model.lexicon.morphs = {{"ab", 3}, {"c", 1}};
  model.lexicon.word_analyses = {{"ab", {"ab"}}, {"abc", {"ab", "c"}},
                                 {"c", {"c"}}};

  CHECK(segment_word(model, "abcab") ==
        std::vector<std::string>{"ab", "c", "ab"});
  // unknown codepoints fall back to the rare-singleton cost
  CHECK(segment_word(model, "abz") == std::vector<std::string>{"ab", "z"});

  SUBCASE("known words use the stored analysis, not the lattice") {
    SegmentationModel pinned = model;
    pinned.lexicon.morphs = {{"ab", 3}, {"c", 1}, {"abc", 1}};
    pinned.lexicon.word_analyses = {{"ab", {"ab"}}, {"abc", {"abc"}},
                                    {"c", {"c"}}};
    CHECK(segment_word(pinned, "abc") == std::vector<std::string>{"abc"});
  }
}

TEST_CASE("unknown words segment via the morph lattice") {
  const auto model = train_morfessor(testutil::corpus_from_counts(
      {{"walked", 20}, {"walking", 20}, {"talked", 20}, {"talking", 20}}));
  // a word the model never saw still concatenates back
  for (const std::string word : {"walkedtalking", "walk", "zzz"}) {
    const auto tokens = segment_word(model, word);
    std::string concat;
    for (const auto& t : tokens) concat += t;
    CHECK(concat == word);
  }
}
