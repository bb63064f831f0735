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
#include <optional>
#include <string>
#include <vector>

#include "segbias/char_trainer.hpp"
#include "segbias/corpus.hpp"
#include "segbias/error.hpp"
#include "segbias/model.hpp"

namespace segbias {

struct MorphTrainParams {
  size_t max_epochs = 10;
  double convergence_eps = 1e-4;  // relative total-cost change per epoch
};

struct MorphTrainStats {
  std::vector<double> epoch_cost;  // total MDL cost after each epoch
};

namespace detail {

// Two-part MDL cost, maintained incrementally:
//   corpus cost  = -sum_m count(m) * log2(count(m) / N)
//   lexicon cost = sum over lexicon entries of the per-character code
//                  lengths -log2 p(c) plus one end marker per entry,
//                  with p(.) the character/end-marker distribution over
//                  the lexicon itself.
// Integer state is exact; the two floating-point sums are snapshotted
// per transaction so a rollback restores them bit-exactly.
class MdlState {
 public:
  double cost() const {
    double total = 0.0;
    if (n_tokens_ > 0) {
      total += xlog2(static_cast<double>(n_tokens_)) - sum_c_log2c_;
    }
    const uint64_t t = lex_chars_ + lex_size_;
    if (t > 0) {
      total += xlog2(static_cast<double>(t)) - sum_n_log2n_ -
               xlog2(static_cast<double>(lex_size_));
    }
    return total;
  }

  size_t lexicon_size() const { return lex_size_; }
  const std::map<std::string, uint64_t>& morph_counts() const { return counts_; }

  void add(const std::string& morph, uint64_t k) {
    txn_.emplace_back(morph, static_cast<int64_t>(k));
    apply(morph, static_cast<int64_t>(k));
  }

  void remove(const std::string& morph, uint64_t k) {
    txn_.emplace_back(morph, -static_cast<int64_t>(k));
    apply(morph, -static_cast<int64_t>(k));
  }

  void begin_txn() {
    txn_.clear();
    saved_sum_c_log2c_ = sum_c_log2c_;
    saved_sum_n_log2n_ = sum_n_log2n_;
  }

  void rollback_txn() {
    for (auto it = txn_.rbegin(); it != txn_.rend(); ++it) {
      apply(it->first, -it->second);
    }
    txn_.clear();
    // Integer state is restored exactly above; the float sums are
    // restored from the snapshot to cancel accumulated rounding.
    sum_c_log2c_ = saved_sum_c_log2c_;
    sum_n_log2n_ = saved_sum_n_log2n_;
  }

  void commit_txn() { txn_.clear(); }

 private:
  static double xlog2(double x) { return x > 0.0 ? x * std::log2(x) : 0.0; }

  void apply(const std::string& morph, int64_t delta) {
    auto it = counts_.find(morph);
    uint64_t old_count = it == counts_.end() ? 0 : it->second;
    const uint64_t new_count =
        static_cast<uint64_t>(static_cast<int64_t>(old_count) + delta);

    sum_c_log2c_ -= xlog2(static_cast<double>(old_count));
    sum_c_log2c_ += xlog2(static_cast<double>(new_count));
    n_tokens_ = static_cast<uint64_t>(static_cast<int64_t>(n_tokens_) + delta);

    if (old_count == 0 && new_count > 0) {
      enter_lexicon(morph);
      counts_[morph] = new_count;
    } else if (old_count > 0 && new_count == 0) {
      leave_lexicon(morph);
      counts_.erase(it);
    } else {
      it->second = new_count;
    }
  }

  void enter_lexicon(const std::string& morph) {
    ++lex_size_;
    auto cps = uni::try_decode_utf8(morph);
    for (char32_t cp : *cps) {
      uint64_t& n = char_counts_[cp];
      sum_n_log2n_ -= xlog2(static_cast<double>(n));
      ++n;
      sum_n_log2n_ += xlog2(static_cast<double>(n));
      ++lex_chars_;
    }
  }

  void leave_lexicon(const std::string& morph) {
    --lex_size_;
    auto cps = uni::try_decode_utf8(morph);
    for (char32_t cp : *cps) {
      auto it = char_counts_.find(cp);
      sum_n_log2n_ -= xlog2(static_cast<double>(it->second));
      --it->second;
      sum_n_log2n_ += xlog2(static_cast<double>(it->second));
      if (it->second == 0) char_counts_.erase(it);
      --lex_chars_;
    }
  }

  std::map<std::string, uint64_t> counts_;
  std::map<char32_t, uint64_t> char_counts_;
  double sum_c_log2c_ = 0.0;
  double sum_n_log2n_ = 0.0;
  uint64_t n_tokens_ = 0;
  uint64_t lex_chars_ = 0;
  size_t lex_size_ = 0;

  std::vector<std::pair<std::string, int64_t>> txn_;
  double saved_sum_c_log2c_ = 0.0;
  double saved_sum_n_log2n_ = 0.0;
};

// Cost comparisons ignore differences below this margin; it absorbs the
// rounding drift of the incremental sums, and a node split must beat
// the unsplit form by more than this to be taken.
constexpr double kCostMargin = 1e-6;

struct MorphWord {
  std::string bytes;
  std::vector<size_t> cp_offsets;  // byte offset of each codepoint + end
  uint64_t count = 0;

  size_t cp_size() const { return cp_offsets.size() - 1; }
  std::string piece(size_t i, size_t j) const {
    return bytes.substr(cp_offsets[i], cp_offsets[j] - cp_offsets[i]);
  }
};

class MorphTrainer {
 public:
  MorphTrainer(const Corpus& corpus, std::optional<uint64_t> cap,
               const MorphTrainParams& params)
      : cap_(cap), params_(params) {
    const FrequencyTable freq = word_counts(corpus);
    for (const auto& [word, count] : freq.entries) {
      MorphWord mw;
      mw.bytes = word;
      size_t offset = 0;
      for (const auto& cp : uni::codepoints(word)) {
        mw.cp_offsets.push_back(offset);
        offset += cp.size();
      }
      mw.cp_offsets.push_back(offset);
      mw.count = count;
      words_.push_back(std::move(mw));
    }
    // Re-analysis order: descending count, then lexicographic.
    std::sort(words_.begin(), words_.end(), [](const auto& a, const auto& b) {
      if (a.count != b.count) return a.count > b.count;
      return a.bytes < b.bytes;
    });
  }

  MorphLexicon train(MorphTrainStats* stats) {
    init_analyses();

    double prev_cost = state_.cost();
    for (size_t epoch = 0; epoch < params_.max_epochs; ++epoch) {
      for (const auto& word : words_) resplit(word);
      const double cur_cost = state_.cost();
      if (stats != nullptr) stats->epoch_cost.push_back(cur_cost);
      if (std::abs(prev_cost - cur_cost) <
          params_.convergence_eps * std::max(1.0, std::abs(prev_cost))) {
        break;
      }
      prev_cost = cur_cost;
    }

    MorphLexicon lexicon;
    lexicon.cap = cap_;
    lexicon.morphs = state_.morph_counts();
    for (const auto& word : words_) {
      lexicon.word_analyses[word.bytes] = analyses_[word.bytes];
    }
    return lexicon;
  }

 private:
  bool admissible() const {
    return !cap_ || state_.lexicon_size() <= *cap_;
  }

  // Unbounded training starts from whole words. Under a finite cap the
  // whole-word start may itself exceed the bound, so every word starts
  // fully split into characters (the alphabet fits by precondition) and
  // later epochs merge upward where the cost allows.
  void init_analyses() {
    for (const auto& word : words_) {
      std::vector<std::string> analysis;
      if (cap_) {
        for (size_t i = 0; i < word.cp_size(); ++i) {
          analysis.push_back(word.piece(i, i + 1));
        }
      } else {
        analysis.push_back(word.bytes);
      }
      for (const auto& morph : analysis) state_.add(morph, word.count);
      analyses_[word.bytes] = std::move(analysis);
    }
  }

  void resplit(const MorphWord& word) {
    state_.begin_txn();
    const double old_cost = state_.cost();
    for (const auto& morph : analyses_[word.bytes]) {
      state_.remove(morph, word.count);
    }
    auto candidate = analyze_node(word, 0, word.cp_size());
    if (candidate && state_.cost() < old_cost - kCostMargin) {
      analyses_[word.bytes] = std::move(*candidate);
      state_.commit_txn();
    } else {
      state_.rollback_txn();
    }
  }

  // Greedy recursive binary splitting of the codepoint range [i, j).
  // Evaluates the range as a single morph against every binary split
  // (both halves unsplit); ties keep the unsplit form. The chosen
  // analysis is committed into the state. Returns nullopt when the
  // lexicon cap rules out every option.
  std::optional<std::vector<std::string>> analyze_node(const MorphWord& word,
                                                       size_t i, size_t j) {
    constexpr double kInf = std::numeric_limits<double>::infinity();
    const std::string whole = word.piece(i, j);

    double whole_cost = kInf;
    state_.add(whole, word.count);
    if (admissible()) whole_cost = state_.cost();
    state_.remove(whole, word.count);

    double best_split_cost = kInf;
    size_t best_split = 0;
    for (size_t split = i + 1; split < j; ++split) {
      const std::string left = word.piece(i, split);
      const std::string right = word.piece(split, j);
      state_.add(left, word.count);
      state_.add(right, word.count);
      if (admissible()) {
        const double c = state_.cost();
        if (c < best_split_cost) {
          best_split_cost = c;
          best_split = split;
        }
      }
      state_.remove(right, word.count);
      state_.remove(left, word.count);
    }

    if (whole_cost == kInf && best_split_cost == kInf) return std::nullopt;

    if (whole_cost <= best_split_cost + detail::kCostMargin) {
      state_.add(whole, word.count);
      return std::vector<std::string>{whole};
    }

    auto left = analyze_node(word, i, best_split);
    if (!left) return std::nullopt;
    auto right = analyze_node(word, best_split, j);
    if (!right) return std::nullopt;
    left->insert(left->end(), std::make_move_iterator(right->begin()),
                 std::make_move_iterator(right->end()));
    return left;
  }

  std::optional<uint64_t> cap_;
  MorphTrainParams params_;
  std::vector<MorphWord> words_;
  MdlState state_;
  std::map<std::string, std::vector<std::string>> analyses_;
};

}  // namespace detail

// Morfessor-style MDL training: epochs over word types in descending
// (count, lexicographic) order, each re-analyzed by recursive binary
// splitting; a re-analysis is kept only when it lowers the total cost,
// so the per-epoch cost trace never increases.
inline SegmentationModel train_morfessor(const Corpus& corpus,
                                         const MorphTrainParams& params = {},
                                         MorphTrainStats* stats = nullptr) {
  if (corpus.word_count() == 0) {
    throw ValidationError("cannot train on an empty corpus");
  }
  detail::MorphTrainer trainer(corpus, std::nullopt, params);
  SegmentationModel model;
  model.method = Method::kMorfessor;
  model.alphabet = detail::corpus_alphabet(corpus);
  model.lexicon = trainer.train(stats);
  return model;
}

// Vocabulary-capped variant: identical to train_morfessor except that a
// re-analysis (or any option inside the recursive splitting) is only
// admissible while the lexicon stays within `cap`. An unset cap
// reproduces train_morfessor exactly.
inline SegmentationModel train_lmvr(const Corpus& corpus,
                                    std::optional<uint64_t> cap,
                                    const MorphTrainParams& params = {},
                                    MorphTrainStats* stats = nullptr) {
  if (corpus.word_count() == 0) {
    throw ValidationError("cannot train on an empty corpus");
  }
  if (cap) {
    const auto alphabet = detail::corpus_alphabet(corpus);
    if (*cap < alphabet.size()) {
      throw ValidationError("cap " + std::to_string(*cap) +
                            " is smaller than the alphabet (" +
                            std::to_string(alphabet.size()) + ")");
    }
  }
  detail::MorphTrainer trainer(corpus, cap, params);
  SegmentationModel model;
  model.method = Method::kLmvr;
  model.alphabet = detail::corpus_alphabet(corpus);
  model.lexicon = trainer.train(stats);
  return model;
}

}  // namespace segbias
