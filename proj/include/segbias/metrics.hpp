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
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "segbias/benchmark.hpp"
#include "segbias/corpus.hpp"
#include "segbias/error.hpp"
#include "segbias/model.hpp"
#include "segbias/unicode.hpp"

namespace segbias {

// ---------------------------------------------------------------------------
// Gender accuracy
// ---------------------------------------------------------------------------

struct CategoryStats {
  uint64_t correct = 0;
  uint64_t wrong = 0;
  uint64_t not_found = 0;

  uint64_t total() const { return correct + wrong + not_found; }

  // 100 * correct / (correct + wrong); undefined when nothing matched.
  std::optional<double> accuracy_pct() const {
    const uint64_t found = correct + wrong;
    if (found == 0) return std::nullopt;
    return 100.0 * static_cast<double>(correct) / static_cast<double>(found);
  }

  std::optional<double> coverage_pct() const {
    if (total() == 0) return std::nullopt;
    return 100.0 * static_cast<double>(correct + wrong) /
           static_cast<double>(total());
  }
};

struct AccuracyReport {
  CategoryStats all;  // micro-aggregation over every term
  std::map<Category, CategoryStats> per_category;

  const CategoryStats& category(Category c) const { return per_category.at(c); }
};

namespace detail {

inline std::vector<std::string> match_tokens(const std::string& text) {
  std::vector<std::string> tokens =
      tokenize(uni::nfc(text), TokenizeMode::kPretok);
  for (auto& t : tokens) t = uni::fold_case(t);
  return tokens;
}

// Leftmost contiguous match of `form` over unconsumed positions.
inline bool match_and_consume(const std::vector<std::string>& tokens,
                              std::vector<bool>& consumed,
                              const std::vector<std::string>& form) {
  if (form.empty() || form.size() > tokens.size()) return false;
  for (size_t start = 0; start + form.size() <= tokens.size(); ++start) {
    bool ok = true;
    for (size_t k = 0; k < form.size(); ++k) {
      if (consumed[start + k] || tokens[start + k] != form[k]) {
        ok = false;
        break;
      }
    }
    if (ok) {
      for (size_t k = 0; k < form.size(); ++k) consumed[start + k] = true;
      return true;
    }
  }
  return false;
}

}  // namespace detail

// Scores one hypothesis line per benchmark entry (same order). Each
// hypothesis is desegmented, case-folded and whitespace-tokenized; term
// pairs are matched in order, the correct form first, and matched token
// positions are consumed so no position is credited twice.
inline AccuracyReport gender_accuracy(const Benchmark& benchmark,
                                      const std::vector<std::string>& hypotheses) {
  if (hypotheses.size() != benchmark.entries.size()) {
    throw ValidationError(
        "hypothesis count (" + std::to_string(hypotheses.size()) +
        ") does not match benchmark entry count (" +
        std::to_string(benchmark.entries.size()) + ")");
  }

  AccuracyReport report;
  for (Category c : kAllCategories) report.per_category[c];

  for (size_t i = 0; i < benchmark.entries.size(); ++i) {
    const BenchmarkEntry& entry = benchmark.entries[i];
    std::vector<std::string> tokens;
    try {
      tokens = detail::match_tokens(desegment(hypotheses[i]));
    } catch (const ValidationError& e) {
      throw ValidationError("hypothesis for entry " + entry.id + ": " + e.what());
    }
    std::vector<bool> consumed(tokens.size(), false);

    CategoryStats& cat = report.per_category[entry.category];
    for (const TermPair& term : entry.terms) {
      const auto correct_toks = detail::match_tokens(term.correct_form);
      const auto wrong_toks = detail::match_tokens(term.wrong_form);
      if (detail::match_and_consume(tokens, consumed, correct_toks)) {
        ++cat.correct;
        ++report.all.correct;
      } else if (detail::match_and_consume(tokens, consumed, wrong_toks)) {
        ++cat.wrong;
        ++report.all.wrong;
      } else {
        ++cat.not_found;
        ++report.all.not_found;
      }
    }
  }
  return report;
}

// ---------------------------------------------------------------------------
// Lexical diversity
// ---------------------------------------------------------------------------

struct DiversityReport {
  double ttr_pct = 0.0;
  double mattr_pct = 0.0;
  size_t window = 0;
  size_t token_count = 0;
  size_t type_count = 0;
};

inline double ttr(const std::vector<std::string>& tokens) {
  if (tokens.empty()) throw ValidationError("ttr over an empty token list");
  std::set<std::string> types(tokens.begin(), tokens.end());
  return 100.0 * static_cast<double>(types.size()) /
         static_cast<double>(tokens.size());
}

// Moving-average TTR over all contiguous windows, sliding by one token;
// falls back to plain TTR when the text fits in one window.
inline double mattr(const std::vector<std::string>& tokens, size_t window = 1000) {
  if (tokens.empty()) throw ValidationError("mattr over an empty token list");
  if (window < 1) throw ValidationError("mattr window must be >= 1");
  if (tokens.size() <= window) return ttr(tokens);

  std::map<std::string, size_t> in_window;
  size_t distinct = 0;
  double sum = 0.0;
  for (size_t i = 0; i < tokens.size(); ++i) {
    if (++in_window[tokens[i]] == 1) ++distinct;
    if (i + 1 >= window) {
      sum += 100.0 * static_cast<double>(distinct) / static_cast<double>(window);
      const std::string& out = tokens[i + 1 - window];
      auto it = in_window.find(out);
      if (--it->second == 0) {
        in_window.erase(it);
        --distinct;
      }
    }
  }
  return sum / static_cast<double>(tokens.size() - window + 1);
}

inline DiversityReport diversity(const std::vector<std::string>& tokens,
                                 size_t window = 1000) {
  DiversityReport report;
  report.ttr_pct = ttr(tokens);
  report.mattr_pct = mattr(tokens, window);
  report.window = window;
  report.token_count = tokens.size();
  report.type_count = std::set<std::string>(tokens.begin(), tokens.end()).size();
  return report;
}

// Token stream for diversity scoring: desegment, case-fold, tokenize;
// optionally drop tokens made only of punctuation.
inline std::vector<std::string> diversity_tokens(
    const std::vector<std::string>& lines,
    TokenizeMode mode = TokenizeMode::kPretok, bool strip_punct = false) {
  std::vector<std::string> tokens;
  for (const auto& line : lines) {
    for (auto& t : tokenize(uni::fold_case(uni::nfc(desegment(line))), mode)) {
      if (strip_punct) {
        auto cps = uni::try_decode_utf8(t);
        bool all_punct = cps && !cps->empty();
        if (cps) {
          for (char32_t cp : *cps) all_punct = all_punct && uni::is_punct(cp);
        }
        if (all_punct) continue;
      }
      tokens.push_back(std::move(t));
    }
  }
  return tokens;
}

// ---------------------------------------------------------------------------
// Token-length increment
// ---------------------------------------------------------------------------

enum class Averaging { kMacro, kMicro };

struct IncrementEntry {
  std::string id;
  size_t len_feminine = 0;
  size_t len_masculine = 0;
  double increment_pct = 0.0;
};

struct IncrementReport {
  double mean_increment_pct = 0.0;
  Averaging averaging = Averaging::kMacro;
  std::vector<IncrementEntry> entries;

  size_t n_pairs() const { return entries.size(); }
};

// Per entry, the feminine reference is ref_correct for *F categories
// and ref_wrong otherwise; both references are segmented and compared
// in rendered-token counts: 100 * (len_F - len_M) / len_M. The mean is
// the arithmetic mean of per-entry increments (macro) or the ratio of
// summed lengths (micro).
inline IncrementReport length_increment(const Benchmark& benchmark,
                                        const SegmentationModel& model,
                                        Averaging averaging = Averaging::kMacro) {
  IncrementReport report;
  report.averaging = averaging;

  auto rendered_len = [&](const std::string& text) {
    size_t n = 0;
    for (const auto& word : tokenize(uni::nfc(text), TokenizeMode::kPretok)) {
      n += segment_word(model, word).size();
    }
    return n;
  };

  double sum_pct = 0.0;
  uint64_t sum_f = 0;
  uint64_t sum_m = 0;
  for (const BenchmarkEntry& entry : benchmark.entries) {
    const bool fem_correct = is_feminine_correct(entry.category);
    IncrementEntry row;
    row.id = entry.id;
    row.len_feminine = rendered_len(fem_correct ? entry.ref_correct : entry.ref_wrong);
    row.len_masculine = rendered_len(fem_correct ? entry.ref_wrong : entry.ref_correct);
    if (row.len_masculine == 0) {
      throw ValidationError("entry " + entry.id +
                            ": masculine reference renders to zero tokens");
    }
    row.increment_pct = 100.0 *
                        (static_cast<double>(row.len_feminine) -
                         static_cast<double>(row.len_masculine)) /
                        static_cast<double>(row.len_masculine);
    sum_pct += row.increment_pct;
    sum_f += row.len_feminine;
    sum_m += row.len_masculine;
    report.entries.push_back(std::move(row));
  }
  if (report.entries.empty()) {
    throw ValidationError("length_increment over an empty benchmark");
  }

  if (averaging == Averaging::kMacro) {
    report.mean_increment_pct = sum_pct / static_cast<double>(report.entries.size());
  } else {
    report.mean_increment_pct =
        100.0 * (static_cast<double>(sum_f) - static_cast<double>(sum_m)) /
        static_cast<double>(sum_m);
  }
  return report;
}

// ---------------------------------------------------------------------------
// Gender isolation
// ---------------------------------------------------------------------------

// Length of the longest common prefix, in codepoints after NFC.
inline size_t divergence_index(const std::string& form_f, const std::string& form_m) {
  if (form_f.empty() || form_m.empty()) {
    throw ValidationError("divergence_index over an empty form");
  }
  if (form_f == form_m) {
    throw ValidationError("divergence_index over equal forms");
  }
  const auto f = uni::codepoints(uni::nfc(form_f));
  const auto m = uni::codepoints(uni::nfc(form_m));
  size_t i = 0;
  while (i < f.size() && i < m.size() && f[i] == m[i]) ++i;
  return i;
}

struct IsolationVerdict {
  std::string feminine;
  std::string masculine;
  size_t divergence = 0;
  bool isolated = false;
};

struct IsolationReport {
  uint64_t isolated_count = 0;
  uint64_t total_pairs = 0;  // evaluable single-word pairs
  uint64_t skipped_multiword = 0;
  std::vector<IsolationVerdict> verdicts;

  std::optional<double> isolation_rate_pct() const {
    if (total_pairs == 0) return std::nullopt;
    return 100.0 * static_cast<double>(isolated_count) /
           static_cast<double>(total_pairs);
  }
};

// A pair is isolated when the feminine segmentation has a token
// boundary exactly at the divergence index, i.e. the index equals the
// cumulative codepoint length of some token prefix. Multi-word forms
// are skipped and counted separately.
inline IsolationReport gender_isolation(
    const std::vector<std::pair<std::string, std::string>>& pairs,
    const SegmentationModel& model) {
  IsolationReport report;
  for (const auto& [form_f, form_m] : pairs) {
    if (form_f.find(' ') != std::string::npos ||
        form_m.find(' ') != std::string::npos) {
      ++report.skipped_multiword;
      continue;
    }
    IsolationVerdict verdict;
    verdict.feminine = uni::nfc(form_f);
    verdict.masculine = uni::nfc(form_m);
    verdict.divergence = divergence_index(form_f, form_m);

    std::set<size_t> boundaries;
    size_t cum = 0;
    boundaries.insert(cum);
    for (const auto& token : segment_word(model, verdict.feminine)) {
      cum += uni::codepoint_count(token);
      boundaries.insert(cum);
    }
    verdict.isolated = boundaries.count(verdict.divergence) > 0;

    ++report.total_pairs;
    if (verdict.isolated) ++report.isolated_count;
    report.verdicts.push_back(std::move(verdict));
  }
  return report;
}

// ---------------------------------------------------------------------------
// Frequency / length asymmetry
// ---------------------------------------------------------------------------

struct AsymmetryException {
  std::string feminine;
  std::string masculine;
  uint64_t count_feminine = 0;
  uint64_t count_masculine = 0;
};

struct AsymmetryReport {
  double pct_feminine_rarer = 0.0;
  double pct_feminine_longer = 0.0;
  size_t n_pairs = 0;
  std::vector<AsymmetryException> exceptions;  // count(F) >= count(M)
};

// Share of pairs whose feminine form is strictly rarer (missing words
// count 0; ties are not rarer) and strictly longer in codepoints.
inline AsymmetryReport asymmetry(
    const std::vector<std::pair<std::string, std::string>>& pairs,
    const FrequencyTable& freq) {
  if (pairs.empty()) throw ValidationError("asymmetry over an empty pair list");

  AsymmetryReport report;
  report.n_pairs = pairs.size();
  uint64_t rarer = 0;
  uint64_t longer = 0;
  for (const auto& [form_f, form_m] : pairs) {
    const std::string f = uni::nfc(form_f);
    const std::string m = uni::nfc(form_m);
    const uint64_t count_f = freq.count(f);
    const uint64_t count_m = freq.count(m);
    if (count_f < count_m) {
      ++rarer;
    } else {
      report.exceptions.push_back({f, m, count_f, count_m});
    }
    if (uni::codepoint_count(f) > uni::codepoint_count(m)) ++longer;
  }
  report.pct_feminine_rarer =
      100.0 * static_cast<double>(rarer) / static_cast<double>(pairs.size());
  report.pct_feminine_longer =
      100.0 * static_cast<double>(longer) / static_cast<double>(pairs.size());
  return report;
}

// Orients a benchmark's term pairs as (feminine, masculine).
inline std::vector<std::pair<std::string, std::string>> benchmark_term_pairs(
    const Benchmark& benchmark) {
  std::vector<std::pair<std::string, std::string>> pairs;
  for (const BenchmarkEntry& entry : benchmark.entries) {
    const bool fem_correct = is_feminine_correct(entry.category);
    for (const TermPair& term : entry.terms) {
      if (fem_correct) {
        pairs.emplace_back(term.correct_form, term.wrong_form);
      } else {
        pairs.emplace_back(term.wrong_form, term.correct_form);
      }
    }
  }
  return pairs;
}

}  // namespace segbias
