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

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <string>
#include <vector>

#include "segbias/char_trainer.hpp"
#include "segbias/corpus.hpp"
#include "segbias/error.hpp"
#include "segbias/model.hpp"

namespace segbias {

struct UnigramTrainParams {
  size_t target_vocab = 8000;
  size_t max_piece_len = 8;   // codepoints
  size_t em_iterations = 4;
  double prune_fraction = 0.2;
};

// Per-round corpus log-likelihood traces, one vector per EM phase.
// Within a phase the likelihood is non-decreasing; pruning between
// phases may lower it.
struct UnigramTrainStats {
  std::vector<std::vector<double>> em_loglik;
};

namespace detail {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

inline double log_add(double a, double b) {
  if (a == kNegInf) return b;
  if (b == kNegInf) return a;
  if (a < b) std::swap(a, b);
  return a + std::log1p(std::exp(b - a));
}

// One training word: codepoint split plus every lattice edge
// (start, end, piece id) present in the current inventory.
struct LatticeWord {
  std::vector<std::string> cps;
  uint64_t count = 0;
  struct Edge {
    uint32_t begin = 0;
    uint32_t end = 0;
    uint32_t piece = 0;
  };
  std::vector<Edge> edges;
};

struct WordLattice {
  // Forward/backward log sums over the word's segmentation lattice.
  // Returns the total log-probability mass (log Z), or -inf when the
  // word has no path (cannot happen while single characters remain).
  static double forward(const LatticeWord& word, const std::vector<double>& logp,
                        std::vector<double>* alpha, uint32_t skip_piece) {
    const size_t n = word.cps.size();
    alpha->assign(n + 1, kNegInf);
    (*alpha)[0] = 0.0;
    for (const auto& e : word.edges) {
      if (e.piece == skip_piece) continue;
      if ((*alpha)[e.begin] == kNegInf) continue;
      (*alpha)[e.end] = log_add((*alpha)[e.end], (*alpha)[e.begin] + logp[e.piece]);
    }
    return (*alpha)[n];
  }

  static void backward(const LatticeWord& word, const std::vector<double>& logp,
                       std::vector<double>* beta) {
    const size_t n = word.cps.size();
    beta->assign(n + 1, kNegInf);
    (*beta)[n] = 0.0;
    for (auto it = word.edges.rbegin(); it != word.edges.rend(); ++it) {
      if ((*beta)[it->end] == kNegInf) continue;
      (*beta)[it->begin] =
          log_add((*beta)[it->begin], logp[it->piece] + (*beta)[it->end]);
    }
  }
};

constexpr uint32_t kNoSkip = std::numeric_limits<uint32_t>::max();

}  // namespace detail

// Unigram-LM trainer: seeds the inventory with all substrings of
// length <= max_piece_len occurring at least twice (plus every single
// character, which is never pruned), then alternates EM over the
// per-word segmentation lattices with pruning of the pieces whose
// removal costs the least corpus likelihood, until the inventory fits
// target_vocab.
inline SegmentationModel train_unigram(const Corpus& corpus,
                                       const UnigramTrainParams& params = {},
                                       UnigramTrainStats* stats = nullptr) {
  if (corpus.word_count() == 0) {
    throw ValidationError("cannot train on an empty corpus");
  }
  if (params.max_piece_len < 1) throw ValidationError("max_piece_len must be >= 1");
  if (params.em_iterations < 1) throw ValidationError("em_iterations must be >= 1");
  if (!(params.prune_fraction > 0.0) || params.prune_fraction >= 1.0) {
    throw ValidationError("prune_fraction must be in (0, 1)");
  }

  const FrequencyTable freq = word_counts(corpus);

  // Seed inventory from weighted substring counts.
  std::map<std::string, uint64_t> substring_counts;
  std::set<std::string> chars;
  for (const auto& [word, count] : freq.entries) {
    const auto cps = uni::codepoints(word);
    for (size_t i = 0; i < cps.size(); ++i) {
      chars.insert(cps[i]);
      std::string sub;
      for (size_t len = 1; len <= params.max_piece_len && i + len <= cps.size(); ++len) {
        sub += cps[i + len - 1];
        substring_counts[sub] += count;
      }
    }
  }
  if (params.target_vocab < chars.size()) {
    throw ValidationError("target_vocab " + std::to_string(params.target_vocab) +
                          " is smaller than the alphabet (" +
                          std::to_string(chars.size()) + ")");
  }

  std::map<std::string, double> piece_weight;
  for (const auto& [sub, count] : substring_counts) {
    if (count >= 2) piece_weight[sub] = static_cast<double>(count);
  }
  for (const auto& c : chars) {
    piece_weight[c] = static_cast<double>(substring_counts[c]);
  }

  // Piece ids are positions in the sorted piece list of each round.
  std::vector<std::string> pieces;
  std::vector<double> logp;
  {
    double total = 0.0;
    for (const auto& [piece, weight] : piece_weight) total += weight;
    for (const auto& [piece, weight] : piece_weight) {
      pieces.push_back(piece);
      logp.push_back(std::log(weight / total));
    }
  }

  std::vector<detail::LatticeWord> words;
  words.reserve(freq.entries.size());
  for (const auto& [word, count] : freq.entries) {
    detail::LatticeWord lw;
    lw.cps = uni::codepoints(word);
    lw.count = count;
    words.push_back(std::move(lw));
  }

  auto rebuild_edges = [&]() {
    std::map<std::string, uint32_t> index;
    for (uint32_t id = 0; id < pieces.size(); ++id) index[pieces[id]] = id;
    for (auto& word : words) {
      word.edges.clear();
      const size_t n = word.cps.size();
      for (size_t i = 0; i < n; ++i) {
        std::string sub;
        for (size_t len = 1; len <= params.max_piece_len && i + len <= n; ++len) {
          sub += word.cps[i + len - 1];
          auto it = index.find(sub);
          if (it != index.end()) {
            word.edges.push_back({static_cast<uint32_t>(i),
                                  static_cast<uint32_t>(i + len), it->second});
          }
        }
      }
      // Forward/backward scans rely on edges sorted by position.
      std::sort(word.edges.begin(), word.edges.end(),
                [](const auto& a, const auto& b) {
                  return a.begin != b.begin ? a.begin < b.begin : a.end < b.end;
                });
    }
  };

  std::vector<double> alpha;
  std::vector<double> beta;

  while (true) {
    rebuild_edges();

    // EM phase.
    std::vector<double> phase_ll;
    for (size_t iter = 0; iter < params.em_iterations; ++iter) {
      std::vector<double> expected(pieces.size(), 0.0);
      double loglik = 0.0;
      for (const auto& word : words) {
        const double log_z =
            detail::WordLattice::forward(word, logp, &alpha, detail::kNoSkip);
        detail::WordLattice::backward(word, logp, &beta);
        loglik += static_cast<double>(word.count) * log_z;
        for (const auto& e : word.edges) {
          if (alpha[e.begin] == detail::kNegInf || beta[e.end] == detail::kNegInf) {
            continue;
          }
          expected[e.piece] += static_cast<double>(word.count) *
                               std::exp(alpha[e.begin] + logp[e.piece] +
                                        beta[e.end] - log_z);
        }
      }
      phase_ll.push_back(loglik);

      double total = 0.0;
      for (double e : expected) total += e;
      for (size_t id = 0; id < pieces.size(); ++id) {
        // Underflow floor keeps log-probabilities finite.
        const double e = std::max(expected[id], 1e-300);
        logp[id] = std::log(e / total);
      }
    }
    if (stats != nullptr) stats->em_loglik.push_back(std::move(phase_ll));

    if (pieces.size() <= params.target_vocab) break;

    // Pruning phase: exact likelihood loss on removal, restricted to
    // the words whose lattices contain the piece.
    std::vector<double> loss(pieces.size(), 0.0);
    std::vector<bool> prunable(pieces.size(), false);
    size_t prunable_count = 0;
    for (size_t id = 0; id < pieces.size(); ++id) {
      if (uni::codepoint_count(pieces[id]) > 1) {
        prunable[id] = true;
        ++prunable_count;
      }
    }
    for (const auto& word : words) {
      const double log_z =
          detail::WordLattice::forward(word, logp, &alpha, detail::kNoSkip);
      std::set<uint32_t> in_word;
      for (const auto& e : word.edges) {
        if (prunable[e.piece]) in_word.insert(e.piece);
      }
      for (uint32_t id : in_word) {
        const double log_z_without =
            detail::WordLattice::forward(word, logp, &alpha, id);
        if (log_z_without == detail::kNegInf) {
          loss[id] = std::numeric_limits<double>::infinity();
        } else {
          loss[id] += static_cast<double>(word.count) * (log_z - log_z_without);
        }
      }
    }

    std::vector<uint32_t> order;
    for (uint32_t id = 0; id < pieces.size(); ++id) {
      if (prunable[id]) order.push_back(id);
    }
    std::sort(order.begin(), order.end(), [&](uint32_t a, uint32_t b) {
      if (loss[a] != loss[b]) return loss[a] < loss[b];
      return pieces[a] < pieces[b];
    });

    const size_t want = std::max<size_t>(
        1, static_cast<size_t>(params.prune_fraction *
                               static_cast<double>(prunable_count)));
    const size_t drop = std::min(want, pieces.size() - params.target_vocab);

    std::vector<bool> dropped(pieces.size(), false);
    for (size_t k = 0; k < drop; ++k) dropped[order[k]] = true;

    std::vector<std::string> kept_pieces;
    std::vector<double> kept_p;
    double mass = 0.0;
    for (size_t id = 0; id < pieces.size(); ++id) {
      if (dropped[id]) continue;
      kept_pieces.push_back(std::move(pieces[id]));
      kept_p.push_back(std::exp(logp[id]));
      mass += kept_p.back();
    }
    pieces = std::move(kept_pieces);
    logp.resize(pieces.size());
    for (size_t id = 0; id < pieces.size(); ++id) {
      logp[id] = std::log(kept_p[id] / mass);
    }
  }

  SegmentationModel model;
  model.method = Method::kUnigram;
  model.alphabet = chars;
  for (size_t id = 0; id < pieces.size(); ++id) {
    model.unigram.pieces[pieces[id]] = logp[id];
  }
  return model;
}

}  // namespace segbias
