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
#include <cfenv>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "segbias/error.hpp"
#include "segbias/metrics.hpp"
#include "segbias/model.hpp"

namespace segbias {

enum class ExportFormat { kTsv, kJsonLines };

inline std::optional<ExportFormat> parse_export_format(std::string_view name) {
  if (name == "tsv") return ExportFormat::kTsv;
  if (name == "json-lines" || name == "jsonl") return ExportFormat::kJsonLines;
  return std::nullopt;
}

struct VocabRow {
  std::string method;
  uint64_t size = 0;
};

struct ReportMeta {
  std::string tool_version;
  std::map<std::string, std::string> config;
  std::map<std::string, std::string> input_digests;
};

struct ReportBundle {
  ReportMeta meta;
  std::optional<std::vector<VocabRow>> vocab;
  std::optional<AccuracyReport> accuracy;
  std::optional<DiversityReport> diversity;
  std::optional<IncrementReport> increment;
  std::optional<IsolationReport> isolation;
  std::optional<AsymmetryReport> asymmetry;

  bool empty() const {
    return !vocab && !accuracy && !diversity && !increment && !isolation &&
           !asymmetry;
  }
};

namespace detail {

// FNV-1a 64-bit, used to fingerprint input files in report metadata.
inline uint64_t fnv1a64(std::string_view data) {
  uint64_t hash = 0xcbf29ce484222325ULL;
  for (unsigned char c : data) {
    hash ^= c;
    hash *= 0x100000001b3ULL;
  }
  return hash;
}

inline std::string file_digest(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open file for digest: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  char hex[32];
  std::snprintf(hex, sizeof(hex), "fnv1a64:%016llx",
                static_cast<unsigned long long>(fnv1a64(buf.str())));
  return hex;
}

// Two decimals, ties to even; text tables only.
inline std::string format_fixed2(double v) {
  const int saved = std::fegetround();
  std::fesetround(FE_TONEAREST);
  const double rounded = std::nearbyint(v * 100.0) / 100.0;
  std::fesetround(saved);
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.2f", rounded);
  return buf;
}

inline std::string format_full(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

inline constexpr const char* kUndefinedCell = "—";  // em dash

inline std::string format_opt2(const std::optional<double>& v) {
  return v ? format_fixed2(*v) : kUndefinedCell;
}

inline std::string format_opt_full(const std::optional<double>& v) {
  return v ? format_full(*v) : "null";
}

// Column-aligned table: first column left-aligned, the rest
// right-aligned; widths measured in codepoints.
inline std::string align_table(const std::vector<std::vector<std::string>>& rows) {
  std::vector<size_t> widths;
  for (const auto& row : rows) {
    if (widths.size() < row.size()) widths.resize(row.size(), 0);
    for (size_t c = 0; c < row.size(); ++c) {
      widths[c] = std::max(widths[c], uni::codepoint_count(row[c]));
    }
  }
  std::string out;
  for (const auto& row : rows) {
    for (size_t c = 0; c < row.size(); ++c) {
      const size_t pad = widths[c] - uni::codepoint_count(row[c]);
      if (c == 0) {
        out += row[c];
        if (c + 1 < row.size()) out += std::string(pad, ' ');
      } else {
        out += "  " + std::string(pad, ' ') + row[c];
      }
    }
    out += '\n';
  }
  return out;
}

inline std::string averaging_name(Averaging a) {
  return a == Averaging::kMacro ? "macro" : "micro";
}

inline Averaging parse_averaging_or_throw(const std::string& name) {
  if (name == "macro") return Averaging::kMacro;
  if (name == "micro") return Averaging::kMicro;
  throw ValidationError("unknown averaging mode: " + name);
}

}  // namespace detail

// Deterministic aligned-text rendering; the accuracy table carries the
// columns ALL, 1F, 1M, 2F, 2M and undefined ratios render as an em
// dash.
inline std::string render_text(const ReportBundle& bundle) {
  if (bundle.empty()) throw ValidationError("cannot render an empty report bundle");

  std::string out;
  out += "# " + bundle.meta.tool_version + "\n";
  for (const auto& [key, value] : bundle.meta.config) {
    out += "# config " + key + " = " + value + "\n";
  }
  for (const auto& [name, digest] : bundle.meta.input_digests) {
    out += "# input " + name + " = " + digest + "\n";
  }

  if (bundle.vocab) {
    out += "\n[vocab]\n";
    std::vector<std::vector<std::string>> rows{{"method", "size"}};
    for (const auto& row : *bundle.vocab) {
      rows.push_back({row.method, std::to_string(row.size)});
    }
    out += detail::align_table(rows);
  }

  if (bundle.accuracy) {
    const AccuracyReport& acc = *bundle.accuracy;
    out += "\n[accuracy]\n";
    std::vector<std::vector<std::string>> rows;
    rows.push_back({"", "ALL", "1F", "1M", "2F", "2M"});
    auto row_of = [&](const std::string& label, auto getter) {
      std::vector<std::string> row{label, getter(acc.all)};
      for (Category c : kAllCategories) row.push_back(getter(acc.category(c)));
      rows.push_back(std::move(row));
    };
    row_of("accuracy_pct", [](const CategoryStats& s) {
      return detail::format_opt2(s.accuracy_pct());
    });
    row_of("correct", [](const CategoryStats& s) { return std::to_string(s.correct); });
    row_of("wrong", [](const CategoryStats& s) { return std::to_string(s.wrong); });
    row_of("not_found",
           [](const CategoryStats& s) { return std::to_string(s.not_found); });
    row_of("coverage_pct", [](const CategoryStats& s) {
      return detail::format_opt2(s.coverage_pct());
    });
    out += detail::align_table(rows);
  }

  if (bundle.diversity) {
    const DiversityReport& d = *bundle.diversity;
    out += "\n[diversity]\n";
    out += detail::align_table({
        {"ttr_pct", "mattr_pct", "window", "tokens", "types"},
        {detail::format_fixed2(d.ttr_pct), detail::format_fixed2(d.mattr_pct),
         std::to_string(d.window), std::to_string(d.token_count),
         std::to_string(d.type_count)},
    });
  }

  if (bundle.increment) {
    const IncrementReport& inc = *bundle.increment;
    out += "\n[increment]\n";
    out += detail::align_table({
        {"averaging", "mean_increment_pct", "n_pairs"},
        {detail::averaging_name(inc.averaging),
         detail::format_fixed2(inc.mean_increment_pct),
         std::to_string(inc.n_pairs())},
    });
  }

  if (bundle.isolation) {
    const IsolationReport& iso = *bundle.isolation;
    out += "\n[isolation]\n";
    out += detail::align_table({
        {"isolation_rate_pct", "isolated", "total_pairs", "skipped_multiword"},
        {detail::format_opt2(iso.isolation_rate_pct()),
         std::to_string(iso.isolated_count), std::to_string(iso.total_pairs),
         std::to_string(iso.skipped_multiword)},
    });
  }

  if (bundle.asymmetry) {
    const AsymmetryReport& asym = *bundle.asymmetry;
    out += "\n[asymmetry]\n";
    out += detail::align_table({
        {"pct_feminine_rarer", "pct_feminine_longer", "n_pairs", "exceptions"},
        {detail::format_fixed2(asym.pct_feminine_rarer),
         detail::format_fixed2(asym.pct_feminine_longer),
         std::to_string(asym.n_pairs), std::to_string(asym.exceptions.size())},
    });
  }
  return out;
}

namespace detail {

inline std::string export_tsv(const ReportBundle& bundle) {
  std::string out;
  out += "#SEGBIAS " + bundle.meta.tool_version + "\n";
  for (const auto& [key, value] : bundle.meta.config) {
    out += "#CONFIG " + key + "=" + value + "\n";
  }
  for (const auto& [name, digest] : bundle.meta.input_digests) {
    out += "#INPUT " + name + "=" + digest + "\n";
  }
  auto emit_row = [&out](const std::vector<std::string>& cells) {
    for (size_t i = 0; i < cells.size(); ++i) {
      if (i > 0) out += '\t';
      out += cells[i];
    }
    out += '\n';
  };

  if (bundle.vocab) {
    out += "#SECTION vocab\n";
    emit_row({"method", "size"});
    for (const auto& row : *bundle.vocab) {
      emit_row({row.method, std::to_string(row.size)});
    }
  }
  if (bundle.accuracy) {
    out += "#SECTION accuracy\n";
    emit_row({"category", "correct", "wrong", "not_found", "accuracy_pct",
              "coverage_pct"});
    auto emit_stats = [&](const std::string& label, const CategoryStats& s) {
      emit_row({label, std::to_string(s.correct), std::to_string(s.wrong),
                std::to_string(s.not_found), format_opt_full(s.accuracy_pct()),
                format_opt_full(s.coverage_pct())});
    };
    emit_stats("ALL", bundle.accuracy->all);
    for (Category c : kAllCategories) {
      emit_stats(to_string(c), bundle.accuracy->category(c));
    }
  }
  if (bundle.diversity) {
    const DiversityReport& d = *bundle.diversity;
    out += "#SECTION diversity\n";
    emit_row({"ttr_pct", "mattr_pct", "window", "token_count", "type_count"});
    emit_row({format_full(d.ttr_pct), format_full(d.mattr_pct),
              std::to_string(d.window), std::to_string(d.token_count),
              std::to_string(d.type_count)});
  }
  if (bundle.increment) {
    const IncrementReport& inc = *bundle.increment;
    out += "#SECTION increment\n";
    emit_row({"averaging", "mean_increment_pct", "n_pairs"});
    emit_row({averaging_name(inc.averaging), format_full(inc.mean_increment_pct),
              std::to_string(inc.n_pairs())});
    out += "#SECTION increment_entries\n";
    emit_row({"id", "len_feminine", "len_masculine", "increment_pct"});
    for (const auto& e : inc.entries) {
      emit_row({e.id, std::to_string(e.len_feminine),
                std::to_string(e.len_masculine), format_full(e.increment_pct)});
    }
  }
  if (bundle.isolation) {
    const IsolationReport& iso = *bundle.isolation;
    out += "#SECTION isolation\n";
    emit_row({"isolated", "total_pairs", "skipped_multiword", "rate_pct"});
    emit_row({std::to_string(iso.isolated_count), std::to_string(iso.total_pairs),
              std::to_string(iso.skipped_multiword),
              format_opt_full(iso.isolation_rate_pct())});
    out += "#SECTION isolation_pairs\n";
    emit_row({"feminine", "masculine", "divergence", "isolated"});
    for (const auto& v : iso.verdicts) {
      emit_row({v.feminine, v.masculine, std::to_string(v.divergence),
                v.isolated ? "1" : "0"});
    }
  }
  if (bundle.asymmetry) {
    const AsymmetryReport& asym = *bundle.asymmetry;
    out += "#SECTION asymmetry\n";
    emit_row({"pct_feminine_rarer", "pct_feminine_longer", "n_pairs"});
    emit_row({format_full(asym.pct_feminine_rarer),
              format_full(asym.pct_feminine_longer),
              std::to_string(asym.n_pairs)});
    out += "#SECTION asymmetry_exceptions\n";
    emit_row({"feminine", "masculine", "count_feminine", "count_masculine"});
    for (const auto& e : asym.exceptions) {
      emit_row({e.feminine, e.masculine, std::to_string(e.count_feminine),
                std::to_string(e.count_masculine)});
    }
  }
  return out;
}

inline nlohmann::json stats_json(const std::string& label, const CategoryStats& s) {
  nlohmann::json j;
  j["category"] = label;
  j["correct"] = s.correct;
  j["wrong"] = s.wrong;
  j["not_found"] = s.not_found;
  if (auto a = s.accuracy_pct()) j["accuracy_pct"] = *a; else j["accuracy_pct"] = nullptr;
  if (auto c = s.coverage_pct()) j["coverage_pct"] = *c; else j["coverage_pct"] = nullptr;
  return j;
}

inline std::string export_json_lines(const ReportBundle& bundle) {
  std::string out;
  {
    nlohmann::json meta;
    meta["section"] = "meta";
    meta["tool"] = bundle.meta.tool_version;
    meta["config"] = bundle.meta.config;
    meta["inputs"] = bundle.meta.input_digests;
    out += meta.dump() + "\n";
  }
  if (bundle.vocab) {
    nlohmann::json j;
    j["section"] = "vocab";
    j["rows"] = nlohmann::json::array();
    for (const auto& row : *bundle.vocab) {
      j["rows"].push_back({{"method", row.method}, {"size", row.size}});
    }
    out += j.dump() + "\n";
  }
  if (bundle.accuracy) {
    nlohmann::json j;
    j["section"] = "accuracy";
    j["categories"] = nlohmann::json::array();
    j["categories"].push_back(stats_json("ALL", bundle.accuracy->all));
    for (Category c : kAllCategories) {
      j["categories"].push_back(stats_json(to_string(c), bundle.accuracy->category(c)));
    }
    out += j.dump() + "\n";
  }
  if (bundle.diversity) {
    const DiversityReport& d = *bundle.diversity;
    nlohmann::json j;
    j["section"] = "diversity";
    j["ttr_pct"] = d.ttr_pct;
    j["mattr_pct"] = d.mattr_pct;
    j["window"] = d.window;
    j["token_count"] = d.token_count;
    j["type_count"] = d.type_count;
    out += j.dump() + "\n";
  }
  if (bundle.increment) {
    const IncrementReport& inc = *bundle.increment;
    nlohmann::json j;
    j["section"] = "increment";
    j["averaging"] = averaging_name(inc.averaging);
    j["mean_increment_pct"] = inc.mean_increment_pct;
    j["n_pairs"] = inc.n_pairs();
    j["entries"] = nlohmann::json::array();
    for (const auto& e : inc.entries) {
      j["entries"].push_back({{"id", e.id},
                              {"len_feminine", e.len_feminine},
                              {"len_masculine", e.len_masculine},
                              {"increment_pct", e.increment_pct}});
    }
    out += j.dump() + "\n";
  }
  if (bundle.isolation) {
    const IsolationReport& iso = *bundle.isolation;
    nlohmann::json j;
    j["section"] = "isolation";
    j["isolated"] = iso.isolated_count;
    j["total_pairs"] = iso.total_pairs;
    j["skipped_multiword"] = iso.skipped_multiword;
    if (auto r = iso.isolation_rate_pct()) j["rate_pct"] = *r; else j["rate_pct"] = nullptr;
    j["pairs"] = nlohmann::json::array();
    for (const auto& v : iso.verdicts) {
      j["pairs"].push_back({{"feminine", v.feminine},
                            {"masculine", v.masculine},
                            {"divergence", v.divergence},
                            {"isolated", v.isolated}});
    }
    out += j.dump() + "\n";
  }
  if (bundle.asymmetry) {
    const AsymmetryReport& asym = *bundle.asymmetry;
    nlohmann::json j;
    j["section"] = "asymmetry";
    j["pct_feminine_rarer"] = asym.pct_feminine_rarer;
    j["pct_feminine_longer"] = asym.pct_feminine_longer;
    j["n_pairs"] = asym.n_pairs;
    j["exceptions"] = nlohmann::json::array();
    for (const auto& e : asym.exceptions) {
      j["exceptions"].push_back({{"feminine", e.feminine},
                                 {"masculine", e.masculine},
                                 {"count_feminine", e.count_feminine},
                                 {"count_masculine", e.count_masculine}});
    }
    out += j.dump() + "\n";
  }
  return out;
}

}  // namespace detail

inline std::string export_machine_string(const ReportBundle& bundle,
                                         ExportFormat format) {
  if (bundle.empty()) throw ValidationError("cannot export an empty report bundle");
  return format == ExportFormat::kTsv ? detail::export_tsv(bundle)
                                      : detail::export_json_lines(bundle);
}

inline void export_machine(const ReportBundle& bundle, const std::string& path,
                           ExportFormat format) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open report file for writing: " + path);
  out << export_machine_string(bundle, format);
  out.flush();
  if (!out) throw IoError("write failure on report file: " + path);
}

namespace detail {

inline double parse_double_or_throw(const std::string& s, const std::string& ctx) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end == s.c_str() || *end != '\0') {
    throw ValidationError(ctx + ": unparseable number \"" + s + "\"");
  }
  return v;
}

inline uint64_t parse_u64_or_throw(const std::string& s, const std::string& ctx) {
  char* end = nullptr;
  const unsigned long long v = std::strtoull(s.c_str(), &end, 10);
  if (end == s.c_str() || *end != '\0') {
    throw ValidationError(ctx + ": unparseable integer \"" + s + "\"");
  }
  return v;
}

inline ReportBundle import_tsv(const std::string& path, std::istream& in) {
  ReportBundle bundle;
  std::string line;
  size_t lineno = 0;
  std::string section;
  std::vector<std::string> header;

  auto ctx = [&]() { return path + ":" + std::to_string(lineno); };

  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;

    if (line.rfind("#SEGBIAS ", 0) == 0) {
      bundle.meta.tool_version = line.substr(9);
      continue;
    }
    if (line.rfind("#CONFIG ", 0) == 0 || line.rfind("#INPUT ", 0) == 0) {
      const bool config = line[1] == 'C';
      const std::string body = line.substr(config ? 8 : 7);
      const size_t eq = body.find('=');
      if (eq == std::string::npos) {
        throw ValidationError(ctx() + ": malformed metadata line");
      }
      auto& target = config ? bundle.meta.config : bundle.meta.input_digests;
      target[body.substr(0, eq)] = body.substr(eq + 1);
      continue;
    }
    if (line.rfind("#SECTION ", 0) == 0) {
      section = line.substr(9);
      header.clear();
      if (section == "accuracy") {
        bundle.accuracy.emplace();
        for (Category c : kAllCategories) bundle.accuracy->per_category[c];
      } else if (section == "vocab") {
        bundle.vocab.emplace();
      } else if (section == "increment") {
        bundle.increment.emplace();
      } else if (section == "isolation") {
        bundle.isolation.emplace();
      } else if (section == "asymmetry") {
        bundle.asymmetry.emplace();
      } else if (section != "diversity" && section != "increment_entries" &&
                 section != "isolation_pairs" && section != "asymmetry_exceptions") {
        throw ValidationError(ctx() + ": unknown section \"" + section + "\"");
      }
      continue;
    }
    if (section.empty()) {
      throw ValidationError(ctx() + ": data before any #SECTION line");
    }

    auto fields = split_tabs(line);
    if (header.empty()) {
      header = std::move(fields);
      continue;
    }
    if (fields.size() != header.size()) {
      throw ValidationError(ctx() + ": expected " + std::to_string(header.size()) +
                            " fields, got " + std::to_string(fields.size()));
    }
    std::map<std::string, std::string> row;
    for (size_t i = 0; i < header.size(); ++i) row[header[i]] = fields[i];

    if (section == "vocab") {
      bundle.vocab->push_back(
          {row.at("method"), parse_u64_or_throw(row.at("size"), ctx())});
    } else if (section == "accuracy") {
      CategoryStats stats;
      stats.correct = parse_u64_or_throw(row.at("correct"), ctx());
      stats.wrong = parse_u64_or_throw(row.at("wrong"), ctx());
      stats.not_found = parse_u64_or_throw(row.at("not_found"), ctx());
      const std::string& label = row.at("category");
      if (label == "ALL") {
        bundle.accuracy->all = stats;
      } else {
        Category c;
        if (!parse_category(label, &c)) {
          throw ValidationError(ctx() + ": unknown category \"" + label + "\"");
        }
        bundle.accuracy->per_category[c] = stats;
      }
    } else if (section == "diversity") {
      DiversityReport d;
      d.ttr_pct = parse_double_or_throw(row.at("ttr_pct"), ctx());
      d.mattr_pct = parse_double_or_throw(row.at("mattr_pct"), ctx());
      d.window = parse_u64_or_throw(row.at("window"), ctx());
      d.token_count = parse_u64_or_throw(row.at("token_count"), ctx());
      d.type_count = parse_u64_or_throw(row.at("type_count"), ctx());
      bundle.diversity = d;
    } else if (section == "increment") {
      bundle.increment->averaging = parse_averaging_or_throw(row.at("averaging"));
      bundle.increment->mean_increment_pct =
          parse_double_or_throw(row.at("mean_increment_pct"), ctx());
    } else if (section == "increment_entries") {
      if (!bundle.increment) {
        throw ValidationError(ctx() + ": increment_entries before increment");
      }
      IncrementEntry e;
      e.id = row.at("id");
      e.len_feminine = parse_u64_or_throw(row.at("len_feminine"), ctx());
      e.len_masculine = parse_u64_or_throw(row.at("len_masculine"), ctx());
      e.increment_pct = parse_double_or_throw(row.at("increment_pct"), ctx());
      bundle.increment->entries.push_back(std::move(e));
    } else if (section == "isolation") {
      bundle.isolation->isolated_count =
          parse_u64_or_throw(row.at("isolated"), ctx());
      bundle.isolation->total_pairs =
          parse_u64_or_throw(row.at("total_pairs"), ctx());
      bundle.isolation->skipped_multiword =
          parse_u64_or_throw(row.at("skipped_multiword"), ctx());
    } else if (section == "isolation_pairs") {
      if (!bundle.isolation) {
        throw ValidationError(ctx() + ": isolation_pairs before isolation");
      }
      IsolationVerdict v;
      v.feminine = row.at("feminine");
      v.masculine = row.at("masculine");
      v.divergence = parse_u64_or_throw(row.at("divergence"), ctx());
      v.isolated = row.at("isolated") == "1";
      bundle.isolation->verdicts.push_back(std::move(v));
    } else if (section == "asymmetry") {
      bundle.asymmetry->pct_feminine_rarer =
          parse_double_or_throw(row.at("pct_feminine_rarer"), ctx());
      bundle.asymmetry->pct_feminine_longer =
          parse_double_or_throw(row.at("pct_feminine_longer"), ctx());
      bundle.asymmetry->n_pairs = parse_u64_or_throw(row.at("n_pairs"), ctx());
    } else if (section == "asymmetry_exceptions") {
      if (!bundle.asymmetry) {
        throw ValidationError(ctx() + ": asymmetry_exceptions before asymmetry");
      }
      AsymmetryException e;
      e.feminine = row.at("feminine");
      e.masculine = row.at("masculine");
      e.count_feminine = parse_u64_or_throw(row.at("count_feminine"), ctx());
      e.count_masculine = parse_u64_or_throw(row.at("count_masculine"), ctx());
      bundle.asymmetry->exceptions.push_back(std::move(e));
    }
  }
  return bundle;
}

inline ReportBundle import_json_lines(const std::string& path, std::istream& in) {
  ReportBundle bundle;
  std::string line;
  size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw ValidationError(path + ":" + std::to_string(lineno) + ": " + e.what());
    }
    const std::string section = j.value("section", "");
    if (section == "meta") {
      bundle.meta.tool_version = j.value("tool", "");
      const nlohmann::json config = j.value("config", nlohmann::json::object());
      for (const auto& [key, value] : config.items()) {
        bundle.meta.config[key] = value.get<std::string>();
      }
      const nlohmann::json inputs = j.value("inputs", nlohmann::json::object());
      for (const auto& [key, value] : inputs.items()) {
        bundle.meta.input_digests[key] = value.get<std::string>();
      }
    } else if (section == "vocab") {
      bundle.vocab.emplace();
      for (const auto& row : j.at("rows")) {
        bundle.vocab->push_back(
            {row.at("method").get<std::string>(), row.at("size").get<uint64_t>()});
      }
    } else if (section == "accuracy") {
      bundle.accuracy.emplace();
      for (Category c : kAllCategories) bundle.accuracy->per_category[c];
      for (const auto& row : j.at("categories")) {
        CategoryStats stats;
        stats.correct = row.at("correct").get<uint64_t>();
        stats.wrong = row.at("wrong").get<uint64_t>();
        stats.not_found = row.at("not_found").get<uint64_t>();
        const std::string label = row.at("category").get<std::string>();
        if (label == "ALL") {
          bundle.accuracy->all = stats;
        } else {
          Category c;
          if (!parse_category(label, &c)) {
            throw ValidationError(path + ":" + std::to_string(lineno) +
                                  ": unknown category \"" + label + "\"");
          }
          bundle.accuracy->per_category[c] = stats;
        }
      }
    } else if (section == "diversity") {
      DiversityReport d;
      d.ttr_pct = j.at("ttr_pct").get<double>();
      d.mattr_pct = j.at("mattr_pct").get<double>();
      d.window = j.at("window").get<uint64_t>();
      d.token_count = j.at("token_count").get<uint64_t>();
      d.type_count = j.at("type_count").get<uint64_t>();
      bundle.diversity = d;
    } else if (section == "increment") {
      bundle.increment.emplace();
      bundle.increment->averaging =
          parse_averaging_or_throw(j.at("averaging").get<std::string>());
      bundle.increment->mean_increment_pct = j.at("mean_increment_pct").get<double>();
      for (const auto& row : j.at("entries")) {
        IncrementEntry e;
        e.id = row.at("id").get<std::string>();
        e.len_feminine = row.at("len_feminine").get<uint64_t>();
        e.len_masculine = row.at("len_masculine").get<uint64_t>();
        e.increment_pct = row.at("increment_pct").get<double>();
        bundle.increment->entries.push_back(std::move(e));
      }
    } else if (section == "isolation") {
      bundle.isolation.emplace();
      bundle.isolation->isolated_count = j.at("isolated").get<uint64_t>();
      bundle.isolation->total_pairs = j.at("total_pairs").get<uint64_t>();
      bundle.isolation->skipped_multiword = j.at("skipped_multiword").get<uint64_t>();
      for (const auto& row : j.at("pairs")) {
        IsolationVerdict v;
        v.feminine = row.at("feminine").get<std::string>();
        v.masculine = row.at("masculine").get<std::string>();
        v.divergence = row.at("divergence").get<uint64_t>();
        v.isolated = row.at("isolated").get<bool>();
        bundle.isolation->verdicts.push_back(std::move(v));
      }
    } else if (section == "asymmetry") {
      bundle.asymmetry.emplace();
      bundle.asymmetry->pct_feminine_rarer = j.at("pct_feminine_rarer").get<double>();
      bundle.asymmetry->pct_feminine_longer =
          j.at("pct_feminine_longer").get<double>();
      bundle.asymmetry->n_pairs = j.at("n_pairs").get<uint64_t>();
      for (const auto& row : j.at("exceptions")) {
        AsymmetryException e;
        e.feminine = row.at("feminine").get<std::string>();
        e.masculine = row.at("masculine").get<std::string>();
        e.count_feminine = row.at("count_feminine").get<uint64_t>();
        e.count_masculine = row.at("count_masculine").get<uint64_t>();
        bundle.asymmetry->exceptions.push_back(std::move(e));
      }
    } else {
      throw ValidationError(path + ":" + std::to_string(lineno) +
                            ": unknown section \"" + section + "\"");
    }
  }
  return bundle;
}

}  // namespace detail

// Reads back a machine export; the format is detected from the first
// byte ('{' means JSON-lines).
inline ReportBundle import_machine(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open report file: " + path);
  const int first = in.peek();
  if (first == '{') return detail::import_json_lines(path, in);
  return detail::import_tsv(path, in);
}

}  // namespace segbias
