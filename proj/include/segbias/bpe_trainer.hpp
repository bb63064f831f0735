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

#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "segbias/char_trainer.hpp"
#include "segbias/corpus.hpp"
#include "segbias/error.hpp"
#include "segbias/model.hpp"

namespace segbias {

// Classic byte-pair-encoding training: repeatedly merge the most
// frequent adjacent symbol pair over word types weighted by their
// corpus counts. Pair frequencies count every occurrence inside a
// word; ties break lexicographically on (left, right). Training stops
// early once no pair occurs at least twice. Merges never cross word
// boundaries.
inline SegmentationModel train_bpe(const Corpus& corpus, size_t num_merges) {
  if (num_merges < 1) throw ValidationError("num_merges must be >= 1");
  if (corpus.word_count() == 0) {
    throw ValidationError("cannot train on an empty corpus");
  }

  const FrequencyTable freq = word_counts(corpus);
  std::vector<std::pair<std::vector<std::string>, uint64_t>> words;
  words.reserve(freq.entries.size());
  for (const auto& [word, count] : freq.entries) {
    words.emplace_back(uni::codepoints(word), count);
  }

  MergeTable table;
  for (size_t rank = 0; rank < num_merges; ++rank) {
    std::map<std::pair<std::string, std::string>, uint64_t> pair_counts;
    for (const auto& [symbols, count] : words) {
      for (size_t i = 0; i + 1 < symbols.size(); ++i) {
        pair_counts[{symbols[i], symbols[i + 1]}] += count;
      }
    }

    const std::pair<std::string, std::string>* best = nullptr;
    uint64_t best_count = 0;
    for (const auto& [pair, count] : pair_counts) {
      if (count > best_count) {
        best = &pair;
        best_count = count;
      }
    }
    if (best == nullptr || best_count < 2) break;

    const auto [left, right] = *best;
    for (auto& [symbols, count] : words) {
      if (symbols.size() < 2) continue;
      std::vector<std::string> next;
      next.reserve(symbols.size());
      size_t i = 0;
      while (i < symbols.size()) {
        if (i + 1 < symbols.size() && symbols[i] == left && symbols[i + 1] == right) {
          next.push_back(left + right);
          i += 2;
        } else {
          next.push_back(symbols[i]);
          ++i;
        }
      }
      symbols = std::move(next);
    }
    table.merges.emplace_back(left, right);
  }

  SegmentationModel model;
  model.method = Method::kBpe;
  model.alphabet = detail::corpus_alphabet(corpus);
  model.merges = std::move(table);
  return model;
}

}  // namespace segbias
