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

#include <fstream>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "segbias/corpus.hpp"
#include "segbias/error.hpp"
#include "segbias/unicode.hpp"

namespace segbias {

// Gender categories: 1 = first-person reference, 2 = sentence-cued;
// the letter names the gender carried by the correct reference.
enum class Category { k1F, k1M, k2F, k2M };

inline constexpr Category kAllCategories[] = {Category::k1F, Category::k1M,
                                              Category::k2F, Category::k2M};

inline std::string to_string(Category c) {
  switch (c) {
    case Category::k1F: return "1F";
    case Category::k1M: return "1M";
    case Category::k2F: return "2F";
    case Category::k2M: return "2M";
  }
  return "?";
}

inline bool is_feminine_correct(Category c) {
  return c == Category::k1F || c == Category::k2F;
}

struct TermPair {
  std::string correct_form;
  std::string wrong_form;
};

// One paired correct/wrong reference with its annotated gender terms.
struct BenchmarkEntry {
  std::string id;
  Category category = Category::k1F;
  std::string src;
  std::string ref_correct;
  std::string ref_wrong;
  std::vector<TermPair> terms;
};

struct Benchmark {
  std::vector<BenchmarkEntry> entries;
  std::string language_tag;
};

namespace detail {

inline bool parse_category(const std::string& token, Category* out) {
  if (token == "1F") *out = Category::k1F;
  else if (token == "1M") *out = Category::k1M;
  else if (token == "2F") *out = Category::k2F;
  else if (token == "2M") *out = Category::k2M;
  else return false;
  return true;
}

inline size_t whitespace_word_count(const std::string& text) {
  return tokenize(text, TokenizeMode::kPretok).size();
}

}  // namespace detail

inline constexpr std::string_view kBenchmarkHeader =
    "ID\tCATEGORY\tSRC\tREF_CORRECT\tREF_WRONG\tTERMS";

// Loads a benchmark TSV (header `ID CATEGORY SRC REF_CORRECT REF_WRONG
// TERMS`; TERMS = semicolon-separated `correct>wrong` pairs). Every
// entry invariant is checked; all violations are collected and reported
// together with row number and entry id.
inline Benchmark load_benchmark(const std::string& path,
                                const std::string& language_tag = "") {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open benchmark file: " + path);

  Benchmark bench;
  bench.language_tag = language_tag;
  std::vector<std::string> violations;
  std::set<std::string> seen_ids;

  auto fail = [&](size_t row, const std::string& id, const std::string& what) {
    std::string where = path + ":" + std::to_string(row);
    if (!id.empty()) where += " (id " + id + ")";
    violations.push_back(where + ": " + what);
  };

  std::string line;
  size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!uni::try_decode_utf8(line)) {
      fail(lineno, "", "invalid UTF-8");
      continue;
    }
    line = uni::nfc(line);
    if (lineno == 1) {
      if (line != kBenchmarkHeader) fail(lineno, "", "missing or malformed header line");
      continue;
    }
    if (line.empty()) continue;

    auto fields = detail::split_tabs(line);
    if (fields.size() != 6) {
      fail(lineno, "", "expected 6 tab-separated fields, got " +
                           std::to_string(fields.size()));
      continue;
    }

    BenchmarkEntry entry;
    entry.id = fields[0];
    entry.src = fields[2];
    entry.ref_correct = fields[3];
    entry.ref_wrong = fields[4];

    bool ok = true;
    if (entry.id.empty()) {
      fail(lineno, "", "empty id");
      ok = false;
    } else if (!seen_ids.insert(entry.id).second) {
      fail(lineno, entry.id, "duplicate id");
      ok = false;
    }
    if (!detail::parse_category(fields[1], &entry.category)) {
      fail(lineno, entry.id, "unknown category \"" + fields[1] + "\"");
      ok = false;
    }
    for (const auto* text : {&entry.src, &entry.ref_correct, &entry.ref_wrong}) {
      if (text->find(kContinuationMarker) != std::string::npos) {
        fail(lineno, entry.id, "sentence contains the reserved marker \"@@\"");
        ok = false;
      }
    }
    if (ok && detail::whitespace_word_count(entry.ref_correct) !=
                  detail::whitespace_word_count(entry.ref_wrong)) {
      fail(lineno, entry.id, "ref_correct and ref_wrong have different word counts");
      ok = false;
    }

    // TERMS: `correct>wrong` pairs separated by ';'.
    size_t start = 0;
    const std::string& terms_field = fields[5];
    while (ok && start <= terms_field.size() && !terms_field.empty()) {
      size_t semi = terms_field.find(';', start);
      std::string item = terms_field.substr(
          start, semi == std::string::npos ? std::string::npos : semi - start);
      size_t gt = item.find('>');
      if (gt == std::string::npos) {
        fail(lineno, entry.id, "term pair \"" + item + "\" lacks '>'");
        ok = false;
        break;
      }
      TermPair pair{item.substr(0, gt), item.substr(gt + 1)};
      if (pair.correct_form.empty() || pair.wrong_form.empty()) {
        fail(lineno, entry.id, "empty form in term pair \"" + item + "\"");
        ok = false;
        break;
      }
      if (pair.correct_form == pair.wrong_form) {
        fail(lineno, entry.id, "equal forms in term pair \"" + item + "\"");
        ok = false;
        break;
      }
      if (item.find(kContinuationMarker) != std::string::npos) {
        fail(lineno, entry.id, "term pair contains the reserved marker \"@@\"");
        ok = false;
        break;
      }
      entry.terms.push_back(std::move(pair));
      if (semi == std::string::npos) break;
      start = semi + 1;
    }
    if (ok && entry.terms.empty()) {
      fail(lineno, entry.id, "entry has no term pairs");
      ok = false;
    }

    if (ok) bench.entries.push_back(std::move(entry));
  }
  if (in.bad()) throw IoError("read failure on benchmark file: " + path);
  if (lineno == 0) throw ValidationError(path + ": empty benchmark file");

  if (!violations.empty()) {
    std::string msg = "benchmark validation failed:";
    for (const auto& v : violations) msg += "\n  " + v;
    throw ValidationError(msg);
  }
  if (bench.entries.empty()) {
    throw ValidationError(path + ": benchmark has no entries");
  }
  return bench;
}

// Loads a `FEM\tMASC` term-pair file (one pair per line, no header).
inline std::vector<TermPair> load_term_pairs(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open term-pair file: " + path);

  std::vector<TermPair> pairs;
  std::string line;
  size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (!uni::try_decode_utf8(line)) {
      throw ValidationError(path + ":" + std::to_string(lineno) + ": invalid UTF-8");
    }
    line = uni::nfc(line);
    auto fields = detail::split_tabs(line);
    if (fields.size() != 2 || fields[0].empty() || fields[1].empty()) {
      throw ValidationError(path + ":" + std::to_string(lineno) +
                            ": expected FEM<TAB>MASC");
    }
    if (fields[0] == fields[1]) {
      throw ValidationError(path + ":" + std::to_string(lineno) +
                            ": equal forms in term pair");
    }
    // Stored as (correct=feminine, wrong=masculine); metrics that take
    // raw pairs read them in that orientation.
    pairs.push_back({fields[0], fields[1]});
  }
  if (in.bad()) throw IoError("read failure on term-pair file: " + path);
  if (pairs.empty()) throw ValidationError(path + ": no term pairs");
  return pairs;
}

}  // namespace segbias
