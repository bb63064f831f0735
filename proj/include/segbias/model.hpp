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
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "segbias/corpus.hpp"
#include "segbias/error.hpp"
#include "segbias/unicode.hpp"

namespace segbias {

enum class Method { kChar, kBpe, kUnigram, kMorfessor, kLmvr };

inline std::string to_string(Method m) {
  switch (m) {
    case Method::kChar: return "char";
    case Method::kBpe: return "bpe";
    case Method::kUnigram: return "unigram";
    case Method::kMorfessor: return "morfessor";
    case Method::kLmvr: return "lmvr";
  }
  return "?";
}

inline std::optional<Method> parse_method(std::string_view name) {
  if (name == "char") return Method::kChar;
  if (name == "bpe") return Method::kBpe;
  if (name == "unigram") return Method::kUnigram;
  if (name == "morfessor") return Method::kMorfessor;
  if (name == "lmvr") return Method::kLmvr;
  return std::nullopt;
}

// Ordered merge rules; rank order is the application order.
struct MergeTable {
  std::vector<std::pair<std::string, std::string>> merges;
};

// Piece inventory with natural-log probabilities summing to 1.
struct UnigramModel {
  std::map<std::string, double> pieces;

  size_t max_piece_cp_len() const {
    size_t n = 1;
    for (const auto& [piece, logp] : pieces) {
      n = std::max(n, uni::codepoint_count(piece));
    }
    return n;
  }

  double min_logp() const {
    double m = 0.0;
    for (const auto& [piece, logp] : pieces) m = std::min(m, logp);
    return m;
  }
};

// Morph inventory plus the stored analysis of every training word type.
struct MorphLexicon {
  std::map<std::string, uint64_t> morphs;
  std::map<std::string, std::vector<std::string>> word_analyses;
  std::optional<uint64_t> cap;

  uint64_t total_morph_tokens() const {
    uint64_t n = 0;
    for (const auto& [morph, count] : morphs) n += count;
    return n;
  }

  size_t max_morph_cp_len() const {
    size_t n = 1;
    for (const auto& [morph, count] : morphs) {
      n = std::max(n, uni::codepoint_count(morph));
    }
    return n;
  }
};

// A trained segmenter. Immutable once trained; only the payload that
// matches `method` is populated.
struct SegmentationModel {
  Method method = Method::kChar;
  std::set<std::string> alphabet;  // single-codepoint UTF-8 strings
  MergeTable merges;               // bpe
  UnigramModel unigram;            // unigram
  MorphLexicon lexicon;            // morfessor / lmvr
};

struct SegmentedSentence {
  std::vector<std::vector<std::string>> word_tokens;

  size_t token_count() const {
    size_t n = 0;
    for (const auto& toks : word_tokens) n += toks.size();
    return n;
  }
};

struct SegmentedCorpus {
  std::vector<SegmentedSentence> sentences;
};

namespace detail {

// Order-independent segmentation score: the per-token scores summed in
// ascending order, so permutations of one piece multiset compare
// bitwise-equal and the tie rules below become association-proof.
inline double canonical_score(std::vector<double> scores) {
  std::sort(scores.begin(), scores.end());
  double sum = 0.0;
  for (double s : scores) sum += s;
  return sum;
}

// Maximum-score segmentation of a codepoint sequence; ties prefer fewer
// tokens, then the lexicographically smallest token sequence.
// `piece_score` returns the score of a candidate piece or nullopt if it
// is not in the inventory; single unknown codepoints fall back to
// `unknown_score`.
template <typename ScoreFn>
std::vector<std::string> viterbi_segment(const std::vector<std::string>& cps,
                                         size_t max_piece_len,
                                         ScoreFn piece_score,
                                         double unknown_score) {
  const size_t n = cps.size();
  constexpr double kNegInf = -std::numeric_limits<double>::infinity();

  struct State {
    double canon = -std::numeric_limits<double>::infinity();
    std::vector<std::string> tokens;
    std::vector<double> sorted_scores;
    bool reached = false;
  };
  std::vector<State> best(n + 1);
  best[0].canon = 0.0;
  best[0].reached = true;

  std::string piece;
  std::vector<double> cand_scores;
  for (size_t j = 1; j <= n; ++j) {
    const size_t lo = j > max_piece_len ? j - max_piece_len : 0;
    for (size_t i = lo; i < j; ++i) {
      if (!best[i].reached) continue;
      piece.clear();
      for (size_t k = i; k < j; ++k) piece += cps[k];
      std::optional<double> sc = piece_score(piece);
      if (!sc && j - i == 1) sc = unknown_score;
      if (!sc || *sc == kNegInf) continue;

      cand_scores = best[i].sorted_scores;
      cand_scores.insert(
          std::upper_bound(cand_scores.begin(), cand_scores.end(), *sc), *sc);
      double cand_canon = 0.0;
      for (double s : cand_scores) cand_canon += s;

      State& cur = best[j];
      bool take = false;
      if (!cur.reached || cand_canon > cur.canon) {
        take = true;
      } else if (cand_canon == cur.canon) {
        const size_t cand_len = best[i].tokens.size() + 1;
        if (cand_len < cur.tokens.size()) {
          take = true;
        } else if (cand_len == cur.tokens.size()) {
          std::vector<std::string> cand_tokens = best[i].tokens;
          cand_tokens.push_back(piece);
          if (cand_tokens < cur.tokens) {
            cur.tokens = std::move(cand_tokens);
            cur.sorted_scores = cand_scores;
            cur.canon = cand_canon;
            continue;
          }
        }
      }
      if (take) {
        cur.tokens = best[i].tokens;
        cur.tokens.push_back(piece);
        cur.sorted_scores = cand_scores;
        cur.canon = cand_canon;
        cur.reached = true;
      }
    }
  }
  if (!best[n].reached) {
    throw ValidationError("word cannot be segmented with this model");
  }
  return std::move(best[n].tokens);
}

inline void check_segmentable_word(const std::string& word) {
  if (word.empty()) throw ValidationError("cannot segment an empty word");
  auto cps = uni::try_decode_utf8(word);
  if (!cps) throw ValidationError("word is not valid UTF-8");
  for (char32_t cp : *cps) {
    if (uni::is_space(cp)) {
      throw ValidationError("word '" + word + "' contains whitespace");
    }
  }
  if (word.find(kContinuationMarker) != std::string::npos) {
    throw ValidationError("word '" + word + "' contains the reserved marker \"@@\"");
  }
}

inline std::vector<std::string> segment_bpe(const MergeTable& table,
                                            const std::vector<std::string>& cps) {
  std::vector<std::string> symbols = cps;
  for (const auto& [left, right] : table.merges) {
    if (symbols.size() < 2) break;
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
  return symbols;
}

}  // namespace detail

// Splits one word into surface tokens whose concatenation reproduces
// the word. char: one token per codepoint. bpe: merge rules applied in
// rank order, one left-to-right pass each. unigram: Viterbi
// maximum-log-probability path; unknown codepoints are costed as rare
// singletons at half the smallest piece probability. morfessor/lmvr:
// the stored analysis for known words, otherwise a Viterbi pass over
// the morph lexicon with cost -log2(count/N) per morph and
// -log2(0.5/N) per unknown codepoint.
inline std::vector<std::string> segment_word(const SegmentationModel& model,
                                             const std::string& word) {
  detail::check_segmentable_word(word);
  const std::vector<std::string> cps = uni::codepoints(word);

  switch (model.method) {
    case Method::kChar:
      return cps;
    case Method::kBpe:
      return detail::segment_bpe(model.merges, cps);
    case Method::kUnigram: {
      const auto& pieces = model.unigram.pieces;
      if (pieces.empty()) throw ValidationError("unigram model has no pieces");
      const double unknown = model.unigram.min_logp() + std::log(0.5);
      return detail::viterbi_segment(
          cps, model.unigram.max_piece_cp_len(),
          [&](const std::string& piece) -> std::optional<double> {
            auto it = pieces.find(piece);
            if (it == pieces.end()) return std::nullopt;
            return it->second;
          },
          unknown);
    }
    case Method::kMorfessor:
    case Method::kLmvr: {
      const auto& lex = model.lexicon;
      auto known = lex.word_analyses.find(word);
      if (known != lex.word_analyses.end()) return known->second;
      if (lex.morphs.empty()) throw ValidationError("morph model has no lexicon");
      const double n_tokens = static_cast<double>(lex.total_morph_tokens());
      // Maximizing summed natural logs is the same ranking as minimizing
      // the -log2(count/N) morph costs.
      const double unknown = std::log(0.5 / n_tokens);
      return detail::viterbi_segment(
          cps, lex.max_morph_cp_len(),
          [&](const std::string& piece) -> std::optional<double> {
            auto it = lex.morphs.find(piece);
            if (it == lex.morphs.end()) return std::nullopt;
            return std::log(static_cast<double>(it->second) / n_tokens);
          },
          unknown);
    }
  }
  throw ValidationError("unknown segmentation method");
}

// segment_word mapped over a corpus; sentence and word order preserved.
// Errors are reported with the sentence/word position.
inline SegmentedCorpus segment_corpus(const SegmentationModel& model,
                                      const Corpus& corpus) {
  SegmentedCorpus out;
  out.sentences.reserve(corpus.sentences.size());
  for (size_t s = 0; s < corpus.sentences.size(); ++s) {
    SegmentedSentence seg;
    seg.word_tokens.reserve(corpus.sentences[s].size());
    for (size_t w = 0; w < corpus.sentences[s].size(); ++w) {
      try {
        seg.word_tokens.push_back(segment_word(model, corpus.sentences[s][w]));
      } catch (const ValidationError& e) {
        throw ValidationError("sentence " + std::to_string(s + 1) + ", word " +
                              std::to_string(w + 1) + ": " + e.what());
      }
    }
    out.sentences.push_back(std::move(seg));
  }
  return out;
}

// Joins tokens with spaces, suffixing "@@" to every non-final token of
// each word.
inline std::string render(const SegmentedSentence& sentence) {
  std::string out;
  for (size_t w = 0; w < sentence.word_tokens.size(); ++w) {
    const auto& tokens = sentence.word_tokens[w];
    if (w > 0) out += ' ';
    for (size_t t = 0; t < tokens.size(); ++t) {
      if (t > 0) out += ' ';
      out += tokens[t];
      if (t + 1 < tokens.size()) out += kContinuationMarker;
    }
  }
  return out;
}

inline std::vector<std::string> render(const SegmentedCorpus& corpus) {
  std::vector<std::string> lines;
  lines.reserve(corpus.sentences.size());
  for (const auto& s : corpus.sentences) lines.push_back(render(s));
  return lines;
}

// Inverse of the rendered convention: removes every "@@ " occurrence.
// A line ending in "@@" has a dangling continuation marker and is
// rejected.
inline std::string desegment(std::string_view line) {
  if (line.size() >= 2 && line.substr(line.size() - 2) == kContinuationMarker) {
    throw ValidationError("dangling continuation marker at end of line");
  }
  std::string out;
  out.reserve(line.size());
  size_t i = 0;
  while (i < line.size()) {
    if (i + 3 <= line.size() && line[i] == '@' && line[i + 1] == '@' &&
        line[i + 2] == ' ') {
      i += 3;
    } else {
      out += line[i];
      ++i;
    }
  }
  return out;
}

struct VocabReport {
  Method method = Method::kChar;
  uint64_t size = 0;
  std::vector<std::string> entries;
};

// Vocabulary size and entry listing. size: |alphabet| for char,
// |alphabet| + |distinct merged pieces| for bpe, |pieces| for unigram,
// |morphs| for morfessor/lmvr. Entries are ordered by descending
// count/probability where one exists, then lexicographically.
inline VocabReport vocab_report(const SegmentationModel& model) {
  VocabReport report;
  report.method = model.method;
  switch (model.method) {
    case Method::kChar: {
      report.entries.assign(model.alphabet.begin(), model.alphabet.end());
      break;
    }
    case Method::kBpe: {
      report.entries.assign(model.alphabet.begin(), model.alphabet.end());
      std::set<std::string> seen;
      for (const auto& [left, right] : model.merges.merges) {
        std::string piece = left + right;
        if (seen.insert(piece).second) report.entries.push_back(std::move(piece));
      }
      break;
    }
    case Method::kUnigram: {
      std::vector<std::pair<double, std::string>> order;
      order.reserve(model.unigram.pieces.size());
      for (const auto& [piece, logp] : model.unigram.pieces) {
        order.emplace_back(-logp, piece);
      }
      std::sort(order.begin(), order.end());
      for (auto& [neg_logp, piece] : order) report.entries.push_back(std::move(piece));
      break;
    }
    case Method::kMorfessor:
    case Method::kLmvr: {
      std::vector<std::pair<std::pair<int64_t, std::string>, const std::string*>> order;
      for (const auto& [morph, count] : model.lexicon.morphs) {
        order.push_back({{-static_cast<int64_t>(count), morph}, &morph});
      }
      std::sort(order.begin(), order.end());
      for (const auto& item : order) report.entries.push_back(*item.second);
      break;
    }
  }
  report.size = report.entries.size();
  return report;
}

}  // namespace segbias
