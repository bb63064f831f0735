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

#include "segbias/corpus.hpp"
#include "segbias/error.hpp"
#include "segbias/model.hpp"

namespace segbias {

namespace detail {

inline std::set<std::string> corpus_alphabet(const Corpus& corpus) {
  std::set<std::string> alphabet;
  for (const auto& sentence : corpus.sentences) {
    for (const auto& word : sentence) {
      for (auto& cp : uni::codepoints(word)) alphabet.insert(std::move(cp));
    }
  }
  return alphabet;
}

}  // namespace detail

// Character segmentation has no trainable payload; the model only
// records the alphabet seen in training.
inline SegmentationModel train_char(const Corpus& corpus) {
  if (corpus.word_count() == 0) {
    throw ValidationError("cannot train on an empty corpus");
  }
  SegmentationModel model;
  model.method = Method::kChar;
  model.alphabet = detail::corpus_alphabet(corpus);
  return model;
}

}  // namespace segbias
