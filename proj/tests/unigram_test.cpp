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

#include <algorithm>
#include <cmath>
#include <map>
#include <random>

#include "segbias/model.hpp"
#include "segbias/unigram_trainer.hpp"
#include "testutil.hpp"

using namespace segbias;

namespace {

// Builds a unigram model from relative weights, normalized to mass 1.
SegmentationModel unigram_fixture(const std::map<std::string, double>& weights) {
  double total = 0.0;
  for (const auto& [piece, w] : weights) total += w;
  SegmentationModel model;
  model.method = Method::kUnigram;
  for (const auto& [piece, w] : weights) {
    model.unigram.pieces[piece] = std::log(w / total);
    if (uni::codepoint_count(piece) == 1) model.alphabet.insert(piece);
  }
  return model;
}

// Order-independent score: per-token log-probabilities summed after an
// ascending sort, mirroring the tie semantics of the lattice search.
double canonical_score(const SegmentationModel& model,
                       const std::vector<std::string>& tokens) {
  const double unknown = model.unigram.min_logp() + std::log(0.5);
  std::vector<double> scores;
  scores.reserve(tokens.size());
  for (const auto& t : tokens) {
    auto it = model.unigram.pieces.find(t);
    scores.push_back(it != model.unigram.pieces.end() ? it->second : unknown);
  }
  std::sort(scores.begin(), scores.end());
  double sum = 0.0;
  for (double s : scores) sum += s;
  return sum;
}

struct BruteResult {
  double score = -std::numeric_limits<double>::infinity();
  std::vector<std::string> tokens;
  bool found = false;
};

// Exhaustive enumeration over all 2^(n-1) segmentations with the same
// scoring and tie rules the DP contract states: maximum score, then
// fewer tokens, then lexicographically smallest sequence.
BruteResult brute_force_best(const SegmentationModel& model, const std::string& word) {
  const auto cps = uni::codepoints(word);
  const size_t n = cps.size();

  BruteResult best;
  for (uint64_t mask = 0; mask < (uint64_t{1} << (n - 1)); ++mask) {
    std::vector<std::string> tokens;
    std::string cur;
    bool ok = true;
    for (size_t i = 0; i < n; ++i) {
      cur += cps[i];
      if (i == n - 1 || (mask >> i) & 1) {
        if (model.unigram.pieces.find(cur) == model.unigram.pieces.end() &&
            uni::codepoint_count(cur) != 1) {
          ok = false;
          break;
        }
        tokens.push_back(cur);
        cur.clear();
      }
    }
    if (!ok) continue;
    const double score = canonical_score(model, tokens);
    bool take = false;
    if (!best.found || score > best.score) {
      take = true;
    } else if (score == best.score) {
      if (tokens.size() < best.tokens.size()) {
        take = true;
      } else if (tokens.size() == best.tokens.size() && tokens < best.tokens) {
        take = true;
      }
    }
    if (take) {
      best.score = score;
      best.tokens = tokens;
      best.found = true;
    }
  }
  return best;
}

}  // namespace

TEST_CASE("tiny corpus keeps the whole-word piece") {
  UnigramTrainParams params;
  params.target_vocab = 3;
  const auto model = train_unigram(testutil::corpus_from_counts({{"ab", 10}}), params);
  CHECK(model.unigram.pieces.count("a") == 1);
  CHECK(model.unigram.pieces.count("b") == 1);
  CHECK(model.unigram.pieces.count("ab") == 1);
  CHECK(segment_word(model, "ab") == std::vector<std::string>{"ab"});
}

TEST_CASE("single-path segmentation is forced") {
  const auto model = unigram_fixture({{"a", 1}, {"b", 1}, {"c", 1}});
  CHECK(segment_word(model, "abc") == std::vector<std::string>{"a", "b", "c"});
}

TEST_CASE("viterbi agrees with exhaustive enumeration") {
  // 30-piece fixture over a small alphabet, mixing strong subwords,
  // weak long pieces and plain characters.
  std::map<std::string, double> weights = {
      {"a", 40}, {"b", 30}, {"c", 20}, {"d", 10}, {"e", 25},
      {"ab", 60}, {"bc", 15}, {"cd", 35}, {"de", 18}, {"ea", 12},
      {"abc", 22}, {"bcd", 8}, {"cde", 30}, {"dea", 5}, {"eab", 7},
      {"abcd", 9}, {"bcde", 4}, {"cdea", 11}, {"abab", 16}, {"baba", 3},
      {"aa", 28}, {"bb", 6}, {"cc", 13}, {"dd", 2}, {"ee", 21},
      {"ae", 17}, {"ba", 26}, {"ce", 1}, {"da", 14}, {"ed", 19},
  };
  const auto model = unigram_fixture(weights);
  REQUIRE(model.unigram.pieces.size() == 30);

  std::mt19937 rng(97);
  std::uniform_int_distribution<int> len_dist(1, 10);
  const std::string alpha = "abcde";
  std::uniform_int_distribution<size_t> cp(0, alpha.size() - 1);

  for (int round = 0; round < 500; ++round) {
    const int n = len_dist(rng);
    std::string word;
    for (int i = 0; i < n; ++i) word += alpha[cp(rng)];

    const auto dp = segment_word(model, word);
    const auto brute = brute_force_best(model, word);
    REQUIRE(brute.found);
    CHECK(canonical_score(model, dp) == doctest::Approx(brute.score).epsilon(1e-9));
    CHECK(dp == brute.tokens);
  }
}

TEST_CASE("viterbi handles unknown codepoints as rare singletons") {
  const auto model = unigram_fixture({{"a", 1}, {"b", 1}});
  const auto tokens = segment_word(model, "axb");
  CHECK(tokens == std::vector<std::string>{"a", "x", "b"});
  // enumeration with the same unknown rule still agrees
  const auto brute = brute_force_best(model, "axb");
  CHECK(tokens == brute.tokens);
}

TEST_CASE("EM log-likelihood is non-decreasing within every phase") {
  std::mt19937 rng(123);
  for (int round = 0; round < 8; ++round) {
    const Corpus corpus = testutil::synthetic_corpus(60, 1000 + round);
    UnigramTrainParams params;
    params.target_vocab = 60;
    params.em_iterations = 5;
    UnigramTrainStats stats;
    train_unigram(corpus, params, &stats);
    REQUIRE(!stats.em_loglik.empty());
    for (const auto& phase : stats.em_loglik) {
      for (size_t i = 1; i < phase.size(); ++i) {
        CHECK(phase[i] >= phase[i - 1] - 1e-9);
      }
    }
  }
}

TEST_CASE("pruning reaches the vocabulary target") {
  const Corpus corpus = testutil::synthetic_corpus(200, 9);
  UnigramTrainParams params;
  params.target_vocab = 80;
  const auto model = train_unigram(corpus, params);
  CHECK(model.unigram.pieces.size() <= 80);

  // every alphabet character survives pruning
  for (const auto& c : model.alphabet) {
    CHECK(model.unigram.pieces.count(c) == 1);
  }

  // probabilities stay normalized and finite
  double mass = 0.0;
  for (const auto& [piece, logp] : model.unigram.pieces) {
    CHECK(std::isfinite(logp));
    CHECK(logp <= 0.0);
    mass += std::exp(logp);
  }
  CHECK(mass == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("target below the alphabet size is rejected") {
  UnigramTrainParams params;
  params.target_vocab = 2;
  CHECK_THROWS_AS(
      train_unigram(testutil::corpus_from_counts({{"abcdef", 3}}), params),
      ValidationError);
}

TEST_CASE("training twice is deterministic") {
  const Corpus corpus = testutil::synthetic_corpus(120, 17);
  UnigramTrainParams params;
  params.target_vocab = 90;
  const auto a = train_unigram(corpus, params);
  const auto b = train_unigram(corpus, params);
  REQUIRE(a.unigram.pieces.size() == b.unigram.pieces.size());
  auto ita = a.unigram.pieces.begin();
  auto itb = b.unigram.pieces.begin();
  for (; ita != a.unigram.pieces.end(); ++ita, ++itb) {
    CHECK(ita->first == itb->first);
    CHECK(ita->second == itb->second);  // bitwise-equal doubles
  }
}
