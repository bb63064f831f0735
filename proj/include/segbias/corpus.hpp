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
#include <fstream>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "segbias/error.hpp"
#include "segbias/unicode.hpp"

namespace segbias {

// "@@" is reserved as the subword continuation marker; no corpus word
// may contain it.
inline constexpr std::string_view kContinuationMarker = "@@";

enum class TokenizeMode {
  kPretok,  // split on Unicode whitespace only
  kBasic,   // additionally detach punctuation at word edges
};

using Sentence = std::vector<std::string>;

namespace detail {

inline std::vector<std::string> split_tabs(const std::string& line) {
  std::vector<std::string> fields;
  size_t start = 0;
  while (true) {
    size_t tab = line.find('\t', start);
    if (tab == std::string::npos) {
      fields.push_back(line.substr(start));
      break;
    }
    fields.push_back(line.substr(start, tab - start));
    start = tab + 1;
  }
  return fields;
}

}  // namespace detail

struct Corpus {
  std::vector<Sentence> sentences;

  size_t word_count() const {
    size_t n = 0;
    for (const auto& s : sentences) n += s.size();
    return n;
  }
};

struct FrequencyTable {
  std::map<std::string, uint64_t> entries;
  uint64_t total_tokens = 0;

  size_t total_types() const { return entries.size(); }

  uint64_t count(const std::string& word) const {
    auto it = entries.find(word);
    return it == entries.end() ? 0 : it->second;
  }
};

inline TokenizeMode parse_tokenize_mode(std::string_view name) {
  if (name == "pretok") return TokenizeMode::kPretok;
  if (name == "basic") return TokenizeMode::kBasic;
  throw ValidationError("unknown tokenize mode: " + std::string(name));
}

// Splits a line into words. "pretok" splits on Unicode whitespace;
// "basic" additionally detaches leading/trailing punctuation codepoints
// as separate one-character words. Joining the result with single
// spaces and re-tokenizing is idempotent. Any resulting word that
// contains "@@" is rejected.
inline std::vector<std::string> tokenize(std::string_view line,
                                         TokenizeMode mode = TokenizeMode::kPretok) {
  auto decoded = uni::try_decode_utf8(line);
  if (!decoded) throw ValidationError("invalid UTF-8 input");
  const std::u32string& cps = *decoded;

  std::vector<std::u32string> raw;
  std::u32string cur;
  for (char32_t cp : cps) {
    if (uni::is_space(cp)) {
      if (!cur.empty()) raw.push_back(std::move(cur)), cur.clear();
    } else {
      cur.push_back(cp);
    }
  }
  if (!cur.empty()) raw.push_back(std::move(cur));

  std::vector<std::u32string> words;
  if (mode == TokenizeMode::kPretok) {
    words = std::move(raw);
  } else {
    for (auto& w : raw) {
      size_t lo = 0;
      size_t hi = w.size();
      std::vector<char32_t> leading;
      std::vector<char32_t> trailing;
      while (lo < hi && uni::is_punct(w[lo])) leading.push_back(w[lo++]);
      while (hi > lo && uni::is_punct(w[hi - 1])) trailing.push_back(w[--hi]);
      for (char32_t cp : leading) words.emplace_back(1, cp);
      if (hi > lo) words.push_back(w.substr(lo, hi - lo));
      for (auto it = trailing.rbegin(); it != trailing.rend(); ++it) {
        words.emplace_back(1, *it);
      }
    }
  }

  std::vector<std::string> out;
  out.reserve(words.size());
  for (const auto& w : words) {
    std::string bytes = uni::encode_utf8(w);
    if (bytes.find(kContinuationMarker) != std::string::npos) {
      throw ValidationError("word '" + bytes + "' contains the reserved marker \"@@\"");
    }
    out.push_back(std::move(bytes));
  }
  return out;
}

// Loads a one-sentence-per-line UTF-8 text file. Lines are
// NFC-normalized and tokenized; blank lines are dropped. Errors carry
// the offending line number.
inline Corpus load_corpus(const std::string& path,
                          TokenizeMode mode = TokenizeMode::kPretok) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open corpus file: " + path);

  Corpus corpus;
  std::string line;
  size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!uni::try_decode_utf8(line)) {
      throw ValidationError(path + ":" + std::to_string(lineno) + ": invalid UTF-8");
    }
    std::vector<std::string> words;
    try {
      words = tokenize(uni::nfc(line), mode);
    } catch (const ValidationError& e) {
      throw ValidationError(path + ":" + std::to_string(lineno) + ": " + e.what());
    }
    if (!words.empty()) corpus.sentences.push_back(std::move(words));
  }
  if (in.bad()) throw IoError("read failure on corpus file: " + path);
  if (corpus.sentences.empty()) {
    throw ValidationError(path + ": corpus is empty after loading");
  }
  return corpus;
}

// Exact per-type occurrence counts; independent of sentence order.
inline FrequencyTable word_counts(const Corpus& corpus) {
  FrequencyTable table;
  for (const auto& sentence : corpus.sentences) {
    for (const auto& word : sentence) {
      ++table.entries[word];
      ++table.total_tokens;
    }
  }
  return table;
}

}  // namespace segbias
