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

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "segbias/error.hpp"
#include "segbias/model.hpp"

namespace segbias {

inline constexpr int kModelFormatVersion = 1;

namespace detail {

inline std::string format_logprob(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

inline std::string serialize_model(const SegmentationModel& model) {
  std::string out = "SEGBIAS " + std::to_string(kModelFormatVersion) + " " +
                    to_string(model.method) + "\n";
  switch (model.method) {
    case Method::kChar:
      for (const auto& sym : model.alphabet) out += "SYM\t" + sym + "\n";
      break;
    case Method::kBpe:
      for (const auto& sym : model.alphabet) out += "SYM\t" + sym + "\n";
      for (const auto& [left, right] : model.merges.merges) {
        out += "MERGE\t" + left + "\t" + right + "\n";
      }
      break;
    case Method::kUnigram: {
      // Canonical order: descending log-probability, then lexicographic.
      std::vector<std::pair<double, std::string>> order;
      for (const auto& [piece, logp] : model.unigram.pieces) {
        order.emplace_back(-logp, piece);
      }
      std::sort(order.begin(), order.end());
      for (const auto& [neg_logp, piece] : order) {
        out += "PIECE\t" + piece + "\t" + format_logprob(-neg_logp) + "\n";
      }
      break;
    }
    case Method::kMorfessor:
    case Method::kLmvr: {
      if (model.lexicon.cap) {
        out += "CAP\t" + std::to_string(*model.lexicon.cap) + "\n";
      }
      for (const auto& [morph, count] : model.lexicon.morphs) {
        out += "MORPH\t" + morph + "\t" + std::to_string(count) + "\n";
      }
      for (const auto& [word, analysis] : model.lexicon.word_analyses) {
        out += "WORD\t" + word + "\t";
        for (size_t i = 0; i < analysis.size(); ++i) {
          if (i > 0) out += ' ';
          out += analysis[i];
        }
        out += "\n";
      }
      break;
    }
  }
  return out;
}

}  // namespace detail

inline void save_model(const SegmentationModel& model, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open model file for writing: " + path);
  out << detail::serialize_model(model);
  out.flush();
  if (!out) throw IoError("write failure on model file: " + path);
}

// Parses a model file, validating structure line by line and the
// method-specific invariants (merge derivability, probability mass,
// analysis consistency, lexicon cap). A loaded model segments
// identically to the saved one and re-serializes byte-identically.
inline SegmentationModel load_model(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open model file: " + path);

  auto malformed = [&](size_t lineno, const std::string& what) {
    return ValidationError(path + ":" + std::to_string(lineno) +
                           ": malformed line: " + what);
  };

  std::string line;
  if (!std::getline(in, line)) throw ValidationError(path + ": empty model file");
  if (!line.empty() && line.back() == '\r') line.pop_back();

  std::istringstream header(line);
  std::string magic, version_token, method_token;
  header >> magic >> version_token >> method_token;
  if (magic != "SEGBIAS" || version_token.empty() || method_token.empty()) {
    throw ValidationError(path + ":1: not a SEGBIAS model file");
  }
  if (version_token != std::to_string(kModelFormatVersion)) {
    throw ValidationError(path + ":1: model format version mismatch (have " +
                          version_token + ", support " +
                          std::to_string(kModelFormatVersion) + ")");
  }
  auto method = parse_method(method_token);
  if (!method) {
    throw ValidationError(path + ":1: unknown method tag \"" + method_token + "\"");
  }

  SegmentationModel model;
  model.method = *method;

  size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (!uni::try_decode_utf8(line)) throw malformed(lineno, "invalid UTF-8");

    auto fields = detail::split_tabs(line);
    const std::string& tag = fields[0];

    if (tag == "SYM") {
      if (model.method != Method::kChar && model.method != Method::kBpe) {
        throw malformed(lineno, "SYM record not valid for this method");
      }
      if (fields.size() != 2 || fields[1].empty()) {
        throw malformed(lineno, "SYM expects one symbol field");
      }
      if (uni::codepoint_count(fields[1]) != 1) {
        throw malformed(lineno, "SYM symbol must be a single character");
      }
      model.alphabet.insert(fields[1]);
    } else if (tag == "MERGE") {
      if (model.method != Method::kBpe) {
        throw malformed(lineno, "MERGE record not valid for this method");
      }
      if (fields.size() != 3 || fields[1].empty() || fields[2].empty()) {
        throw malformed(lineno, "MERGE expects left and right fields");
      }
      model.merges.merges.emplace_back(fields[1], fields[2]);
    } else if (tag == "PIECE") {
      if (model.method != Method::kUnigram) {
        throw malformed(lineno, "PIECE record not valid for this method");
      }
      if (fields.size() != 3 || fields[1].empty()) {
        throw malformed(lineno, "PIECE expects piece and logprob fields");
      }
      char* end = nullptr;
      const double logp = std::strtod(fields[2].c_str(), &end);
      if (end == fields[2].c_str() || *end != '\0') {
        throw malformed(lineno, "unparseable log-probability");
      }
      if (!std::isfinite(logp) || logp > 0.0) {
        throw malformed(lineno, "log-probability must be finite and <= 0");
      }
      if (!model.unigram.pieces.emplace(fields[1], logp).second) {
        throw malformed(lineno, "duplicate piece \"" + fields[1] + "\"");
      }
    } else if (tag == "CAP") {
      if (model.method != Method::kLmvr) {
        throw malformed(lineno, "CAP record not valid for this method");
      }
      if (fields.size() != 2) throw malformed(lineno, "CAP expects one field");
      char* end = nullptr;
      const unsigned long long cap = std::strtoull(fields[1].c_str(), &end, 10);
      if (end == fields[1].c_str() || *end != '\0' || cap == 0) {
        throw malformed(lineno, "CAP must be a positive integer");
      }
      model.lexicon.cap = cap;
    } else if (tag == "MORPH") {
      if (model.method != Method::kMorfessor && model.method != Method::kLmvr) {
        throw malformed(lineno, "MORPH record not valid for this method");
      }
      if (fields.size() != 3 || fields[1].empty()) {
        throw malformed(lineno, "MORPH expects morph and count fields");
      }
      char* end = nullptr;
      const unsigned long long count = std::strtoull(fields[2].c_str(), &end, 10);
      if (end == fields[2].c_str() || *end != '\0' || count == 0) {
        throw malformed(lineno, "MORPH count must be a positive integer");
      }
      if (!model.lexicon.morphs.emplace(fields[1], count).second) {
        throw malformed(lineno, "duplicate morph \"" + fields[1] + "\"");
      }
    } else if (tag == "WORD") {
      if (model.method != Method::kMorfessor && model.method != Method::kLmvr) {
        throw malformed(lineno, "WORD record not valid for this method");
      }
      if (fields.size() != 3 || fields[1].empty() || fields[2].empty()) {
        throw malformed(lineno, "WORD expects word and analysis fields");
      }
      std::vector<std::string> analysis;
      std::string concat;
      std::istringstream morphs(fields[2]);
      std::string morph;
      while (morphs >> morph) {
        if (model.lexicon.morphs.find(morph) == model.lexicon.morphs.end()) {
          throw malformed(lineno, "analysis uses unknown morph \"" + morph + "\"");
        }
        concat += morph;
        analysis.push_back(std::move(morph));
      }
      if (concat != fields[1]) {
        throw malformed(lineno, "analysis does not concatenate to \"" +
                                    fields[1] + "\"");
      }
      if (!model.lexicon.word_analyses.emplace(fields[1], std::move(analysis))
               .second) {
        throw malformed(lineno, "duplicate word \"" + fields[1] + "\"");
      }
    } else {
      throw malformed(lineno, "unknown record tag \"" + tag + "\"");
    }
  }
  if (in.bad()) throw IoError("read failure on model file: " + path);

  // Method-level invariants.
  switch (model.method) {
    case Method::kChar:
      if (model.alphabet.empty()) {
        throw ValidationError(path + ": char model has no symbols");
      }
      break;
    case Method::kBpe: {
      if (model.alphabet.empty()) {
        throw ValidationError(path + ": bpe model has no symbols");
      }
      std::set<std::pair<std::string, std::string>> seen;
      std::set<std::string> derivable(model.alphabet.begin(), model.alphabet.end());
      for (const auto& [left, right] : model.merges.merges) {
        if (!seen.insert({left, right}).second) {
          throw ValidationError(path + ": duplicate merge pair (" + left + ", " +
                                right + ")");
        }
        if (derivable.find(left) == derivable.end() ||
            derivable.find(right) == derivable.end()) {
          throw ValidationError(path + ": merge (" + left + ", " + right +
                                ") uses an underivable piece");
        }
        derivable.insert(left + right);
      }
      break;
    }
    case Method::kUnigram: {
      if (model.unigram.pieces.empty()) {
        throw ValidationError(path + ": unigram model has no pieces");
      }
      double mass = 0.0;
      for (const auto& [piece, logp] : model.unigram.pieces) {
        mass += std::exp(logp);
        if (uni::codepoint_count(piece) == 1) model.alphabet.insert(piece);
      }
      if (std::abs(mass - 1.0) > 1e-6) {
        throw ValidationError(path + ": piece probabilities sum to " +
                              detail::format_logprob(mass) + ", expected 1");
      }
      break;
    }
    case Method::kMorfessor:
    case Method::kLmvr: {
      if (model.lexicon.morphs.empty() || model.lexicon.word_analyses.empty()) {
        throw ValidationError(path + ": morph model has no lexicon or analyses");
      }
      if (model.lexicon.cap &&
          model.lexicon.morphs.size() > *model.lexicon.cap) {
        throw ValidationError(path + ": lexicon exceeds its cap");
      }
      std::set<std::string> used;
      for (const auto& [word, analysis] : model.lexicon.word_analyses) {
        for (const auto& morph : analysis) used.insert(morph);
        for (const auto& cp : uni::codepoints(word)) model.alphabet.insert(cp);
      }
      for (const auto& [morph, count] : model.lexicon.morphs) {
        if (used.find(morph) == used.end()) {
          throw ValidationError(path + ": morph \"" + morph +
                                "\" appears in no analysis");
        }
      }
      break;
    }
  }
  return model;
}

}  // namespace segbias
