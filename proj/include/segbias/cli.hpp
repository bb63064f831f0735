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

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "segbias/benchmark.hpp"
#include "segbias/bpe_trainer.hpp"
#include "segbias/char_trainer.hpp"
#include "segbias/corpus.hpp"
#include "segbias/error.hpp"
#include "segbias/metrics.hpp"
#include "segbias/model.hpp"
#include "segbias/model_io.hpp"
#include "segbias/morph_trainer.hpp"
#include "segbias/report.hpp"
#include "segbias/unigram_trainer.hpp"
#include "segbias/version.hpp"

namespace segbias {
namespace cli {

namespace detail {

inline std::vector<std::string> read_lines(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open file: " + path);
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(std::move(line));
  }
  if (in.bad()) throw IoError("read failure on file: " + path);
  return lines;
}

inline void write_text(const std::optional<std::string>& path,
                       const std::string& text) {
  if (!path) {
    std::cout << text;
    return;
  }
  std::ofstream out(*path, std::ios::binary);
  if (!out) throw IoError("cannot open output file: " + *path);
  out << text;
  out.flush();
  if (!out) throw IoError("write failure on output file: " + *path);
}

inline size_t thread_budget() {
  const char* env = std::getenv("SEGBIAS_THREADS");
  if (env == nullptr) return 1;
  char* end = nullptr;
  const long n = std::strtol(env, &end, 10);
  if (end == env || *end != '\0' || n <= 1) return 1;
  return static_cast<size_t>(n);
}

// Segments one raw text line; blank lines pass through empty.
inline std::string apply_line(const SegmentationModel& model,
                              const std::string& line, TokenizeMode mode) {
  if (!uni::try_decode_utf8(line)) throw ValidationError("invalid UTF-8");
  SegmentedSentence seg;
  for (const auto& word : tokenize(uni::nfc(line), mode)) {
    seg.word_tokens.push_back(segment_word(model, word));
  }
  return render(seg);
}

inline std::vector<std::string> apply_lines(const SegmentationModel& model,
                                            const std::vector<std::string>& lines,
                                            TokenizeMode mode) {
  const size_t threads = std::min(thread_budget(), lines.size());
  std::vector<std::string> out(lines.size());
  auto work = [&](size_t begin, size_t end) {
    for (size_t i = begin; i < end; ++i) {
      try {
        out[i] = apply_line(model, lines[i], mode);
      } catch (const ValidationError& e) {
        throw ValidationError("line " + std::to_string(i + 1) + ": " + e.what());
      }
    }
  };
  if (threads <= 1) {
    work(0, lines.size());
    return out;
  }
  // Chunked fan-out; output order is positional, so parallelism cannot
  // change the result.
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(threads);
  const size_t chunk = (lines.size() + threads - 1) / threads;
  for (size_t t = 0; t < threads; ++t) {
    pool.emplace_back([&, t]() {
      const size_t begin = t * chunk;
      const size_t end = std::min(lines.size(), begin + chunk);
      try {
        work(begin, end);
      } catch (...) {
        errors[t] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (const auto& err : errors) {
    if (err) std::rethrow_exception(err);
  }
  return out;
}

struct ExportOptions {
  std::string out_path;
  std::string format = "tsv";
};

inline void add_export_options(CLI::App* sub, ExportOptions* opts) {
  sub->add_option("--out", opts->out_path,
                  "write a machine-readable report here (default: text to stdout)");
  sub->add_option("--format", opts->format, "machine export format")
      ->check(CLI::IsMember({"tsv", "json-lines"}))
      ->capture_default_str();
}

inline void emit_bundle(const ReportBundle& bundle, const ExportOptions& opts) {
  if (opts.out_path.empty()) {
    std::cout << render_text(bundle);
  } else {
    export_machine(bundle, opts.out_path, *parse_export_format(opts.format));
  }
}

inline ReportMeta make_meta(
    const std::string& subcommand,
    const std::vector<std::pair<std::string, std::string>>& config,
    const std::vector<std::pair<std::string, std::string>>& inputs) {
  ReportMeta meta;
  meta.tool_version = kToolVersion;
  meta.config["subcommand"] = subcommand;
  for (const auto& [key, value] : config) meta.config[key] = value;
  for (const auto& [name, path] : inputs) {
    meta.input_digests[name] = segbias::detail::file_digest(path);
  }
  return meta;
}

inline std::string trim(const std::string& s) {
  size_t begin = s.find_first_not_of(" \t");
  if (begin == std::string::npos) return "";
  size_t end = s.find_last_not_of(" \t");
  return s.substr(begin, end - begin + 1);
}

// Expands `--config <path>` into `--key=value` tokens inserted after
// the subcommand. Config files are flat `key = value` lines with `#`
// comments; every key mirrors a flag name. Explicit command-line flags
// win: a config key is dropped when its flag was given directly.
inline std::vector<std::string> apply_config_file(
    const std::vector<std::string>& args) {
  std::string config_path;
  std::vector<std::string> out;
  for (size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config") {
      if (i + 1 >= args.size()) {
        throw ValidationError("--config expects a file path");
      }
      config_path = args[++i];
    } else if (args[i].rfind("--config=", 0) == 0) {
      config_path = args[i].substr(9);
    } else {
      out.push_back(args[i]);
    }
  }
  if (config_path.empty()) return out;
  if (out.empty() || out[0].rfind("-", 0) == 0) {
    throw ValidationError("--config requires a subcommand");
  }

  std::set<std::string> given;
  for (size_t i = 1; i < out.size(); ++i) {
    if (out[i].rfind("--", 0) == 0) {
      const size_t eq = out[i].find('=');
      given.insert(eq == std::string::npos ? out[i].substr(2)
                                           : out[i].substr(2, eq - 2));
    }
  }

  std::ifstream in(config_path, std::ios::binary);
  if (!in) throw IoError("cannot open config file: " + config_path);
  std::vector<std::string> from_config;
  std::string line;
  size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const std::string text = trim(line);
    if (text.empty() || text[0] == '#') continue;
    const size_t eq = text.find('=');
    if (eq == std::string::npos) {
      throw ValidationError(config_path + ":" + std::to_string(lineno) +
                            ": expected key = value");
    }
    const std::string key = trim(text.substr(0, eq));
    const std::string value = trim(text.substr(eq + 1));
    if (key.empty()) {
      throw ValidationError(config_path + ":" + std::to_string(lineno) +
                            ": empty key");
    }
    if (given.count(key) == 0) {
      from_config.push_back("--" + key + "=" + value);
    }
  }
  if (in.bad()) throw IoError("read failure on config file: " + config_path);

  std::vector<std::string> merged;
  merged.push_back(out[0]);
  merged.insert(merged.end(), from_config.begin(), from_config.end());
  merged.insert(merged.end(), out.begin() + 1, out.end());
  return merged;
}

}  // namespace detail

// Runs one subcommand. Returns 0 on success, 1 on validation errors and
// 2 on I/O errors; diagnostics go to stderr only.
inline int run(const std::vector<std::string>& args) {
  std::vector<std::string> expanded;
  try {
    expanded = detail::apply_config_file(args);
  } catch (const IoError& e) {
    std::cerr << "segbias: " << e.what() << "\n";
    return 2;
  } catch (const ValidationError& e) {
    std::cerr << "segbias: " << e.what() << "\n";
    return 1;
  }

  CLI::App app{"subword segmentation and gender-bias diagnostics"};
  app.require_subcommand(1);
  std::string config_file_sink;  // --config is expanded before parsing

  // ---- train ----
  auto* train = app.add_subcommand("train", "train a segmentation model");
  struct {
    std::string method;
    std::string input;
    std::string model;
    std::string mode = "pretok";
    size_t merges = 8000;
    size_t target_vocab = 8000;
    size_t max_piece_len = 8;
    size_t em_iterations = 4;
    double prune_fraction = 0.2;
    uint64_t cap = 32000;
    size_t epochs = 10;
    double eps = 1e-4;
  } train_opts;
  train->add_option("--method", train_opts.method, "char|bpe|unigram|morfessor|lmvr")
      ->required()
      ->check(CLI::IsMember({"char", "bpe", "unigram", "morfessor", "lmvr"}));
  train->add_option("--input", train_opts.input, "training corpus, one sentence per line")
      ->required();
  train->add_option("--model", train_opts.model, "output model path")->required();
  train->add_option("--mode", train_opts.mode, "tokenization mode")
      ->check(CLI::IsMember({"pretok", "basic"}))
      ->capture_default_str();
  train->add_option("--merges", train_opts.merges, "bpe merge rules")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  train->add_option("--target-vocab", train_opts.target_vocab, "unigram vocabulary target")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  train->add_option("--max-piece-len", train_opts.max_piece_len,
                    "unigram seed piece length bound")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  train->add_option("--em-iterations", train_opts.em_iterations,
                    "unigram EM iterations per round")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  train->add_option("--prune-fraction", train_opts.prune_fraction,
                    "unigram prune fraction per round")
      ->check(CLI::Range(1e-9, 0.999999))
      ->capture_default_str();
  train->add_option("--cap", train_opts.cap, "lmvr lexicon size bound")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  train->add_option("--epochs", train_opts.epochs, "morfessor/lmvr training epochs")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  train->add_option("--eps", train_opts.eps,
                    "morfessor/lmvr relative cost convergence threshold")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  train->add_option("--config", config_file_sink,
                    "key = value defaults (explicit flags win)");

  // ---- apply ----
  auto* apply = app.add_subcommand("apply", "segment raw text with a trained model");
  struct {
    std::string model;
    std::string input;
    std::string out;
    std::string mode = "pretok";
  } apply_opts;
  apply->add_option("--model", apply_opts.model, "model path")->required();
  apply->add_option("--input", apply_opts.input, "text to segment")->required();
  apply->add_option("--out", apply_opts.out, "output path (default stdout)");
  apply->add_option("--mode", apply_opts.mode, "tokenization mode")
      ->check(CLI::IsMember({"pretok", "basic"}))
      ->capture_default_str();
  apply->add_option("--config", config_file_sink,
                    "key = value defaults (explicit flags win)");

  // ---- deseg ----
  auto* deseg = app.add_subcommand("deseg", "undo \"@@ \" segmentation markers");
  struct {
    std::string input;
    std::string out;
  } deseg_opts;
  deseg->add_option("--input", deseg_opts.input, "segmented text")->required();
  deseg->add_option("--out", deseg_opts.out, "output path (default stdout)");
  deseg->add_option("--config", config_file_sink,
                    "key = value defaults (explicit flags win)");

  // ---- vocab ----
  auto* vocab = app.add_subcommand("vocab", "report a model's vocabulary size");
  struct {
    std::string model;
    bool dump_entries = false;
  } vocab_opts;
  detail::ExportOptions vocab_export;
  vocab->add_option("--model", vocab_opts.model, "model path")->required();
  vocab->add_flag("--dump-entries", vocab_opts.dump_entries,
                  "list vocabulary entries to stdout");
  detail::add_export_options(vocab, &vocab_export);
  vocab->add_option("--config", config_file_sink,
                    "key = value defaults (explicit flags win)");

  // ---- eval-gender ----
  auto* eval_gender = app.add_subcommand("eval-gender",
                                         "gender accuracy against a paired benchmark");
  struct {
    std::string benchmark;
    std::string hyp;
  } gender_opts;
  detail::ExportOptions gender_export;
  eval_gender->add_option("--benchmark", gender_opts.benchmark, "benchmark TSV")
      ->required();
  eval_gender->add_option("--hyp", gender_opts.hyp,
                          "hypothesis file, one line per benchmark entry")
      ->required();
  detail::add_export_options(eval_gender, &gender_export);
  eval_gender->add_option("--config", config_file_sink,
                    "key = value defaults (explicit flags win)");

  // ---- eval-diversity ----
  auto* eval_div = app.add_subcommand("eval-diversity", "TTR and MATTR of a text");
  struct {
    std::string input;
    size_t window = 1000;
    std::string mode = "pretok";
    bool strip_punct = false;
  } div_opts;
  detail::ExportOptions div_export;
  eval_div->add_option("--input", div_opts.input, "text file")->required();
  eval_div->add_option("--window", div_opts.window, "MATTR window size")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  eval_div->add_option("--mode", div_opts.mode, "tokenization mode")
      ->check(CLI::IsMember({"pretok", "basic"}))
      ->capture_default_str();
  eval_div->add_flag("--strip-punct", div_opts.strip_punct,
                     "drop punctuation-only tokens");
  detail::add_export_options(eval_div, &div_export);
  eval_div->add_option("--config", config_file_sink,
                    "key = value defaults (explicit flags win)");

  // ---- eval-length ----
  auto* eval_len = app.add_subcommand(
      "eval-length", "feminine-over-masculine token-length increment");
  struct {
    std::string benchmark;
    std::string model;
    std::string average = "macro";
  } len_opts;
  detail::ExportOptions len_export;
  eval_len->add_option("--benchmark", len_opts.benchmark, "benchmark TSV")->required();
  eval_len->add_option("--model", len_opts.model, "model path")->required();
  eval_len->add_option("--average", len_opts.average, "aggregation across entries")
      ->check(CLI::IsMember({"macro", "micro"}))
      ->capture_default_str();
  detail::add_export_options(eval_len, &len_export);
  eval_len->add_option("--config", config_file_sink,
                    "key = value defaults (explicit flags win)");

  // ---- eval-isolation ----
  auto* eval_iso = app.add_subcommand("eval-isolation",
                                      "gender-morpheme isolation rate");
  struct {
    std::string benchmark;
    std::string pairs;
    std::string model;
  } iso_opts;
  detail::ExportOptions iso_export;
  eval_iso->add_option("--benchmark", iso_opts.benchmark, "benchmark TSV");
  eval_iso->add_option("--pairs", iso_opts.pairs, "FEM<TAB>MASC pair file");
  eval_iso->add_option("--model", iso_opts.model, "model path")->required();
  detail::add_export_options(eval_iso, &iso_export);
  eval_iso->add_option("--config", config_file_sink,
                    "key = value defaults (explicit flags win)");

  // ---- analyze-asymmetry ----
  auto* asym = app.add_subcommand("analyze-asymmetry",
                                  "frequency/length asymmetry of gender pairs");
  struct {
    std::string benchmark;
    std::string pairs;
    std::string corpus;
    std::string mode = "pretok";
  } asym_opts;
  detail::ExportOptions asym_export;
  asym->add_option("--benchmark", asym_opts.benchmark, "benchmark TSV");
  asym->add_option("--pairs", asym_opts.pairs, "FEM<TAB>MASC pair file");
  asym->add_option("--corpus", asym_opts.corpus, "corpus for frequency counts")
      ->required();
  asym->add_option("--mode", asym_opts.mode, "tokenization mode for the corpus")
      ->check(CLI::IsMember({"pretok", "basic"}))
      ->capture_default_str();
  detail::add_export_options(asym, &asym_export);
  asym->add_option("--config", config_file_sink,
                    "key = value defaults (explicit flags win)");

  // ---- report ----
  auto* report_cmd = app.add_subcommand("report",
                                        "merge and render machine reports");
  struct {
    std::vector<std::string> inputs;
    std::string format = "text";
    std::string out;
  } report_opts;
  report_cmd->add_option("--in", report_opts.inputs, "machine report file(s)")
      ->required();
  report_cmd->add_option("--format", report_opts.format, "output format")
      ->check(CLI::IsMember({"text", "tsv", "json-lines"}))
      ->capture_default_str();
  report_cmd->add_option("--out", report_opts.out, "output path (default stdout)");
  report_cmd->add_option("--config", config_file_sink,
                    "key = value defaults (explicit flags win)");

  std::vector<const char*> argv;
  argv.reserve(expanded.size() + 1);
  argv.push_back("segbias");
  for (const auto& a : expanded) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, std::cout, std::cerr);
    return code == 0 ? 0 : 1;
  }

  try {
    if (app.got_subcommand(train)) {
      const TokenizeMode mode = parse_tokenize_mode(train_opts.mode);
      const Corpus corpus = load_corpus(train_opts.input, mode);
      SegmentationModel model;
      if (train_opts.method == "char") {
        model = train_char(corpus);
      } else if (train_opts.method == "bpe") {
        model = train_bpe(corpus, train_opts.merges);
      } else if (train_opts.method == "unigram") {
        UnigramTrainParams params;
        params.target_vocab = train_opts.target_vocab;
        params.max_piece_len = train_opts.max_piece_len;
        params.em_iterations = train_opts.em_iterations;
        params.prune_fraction = train_opts.prune_fraction;
        model = train_unigram(corpus, params);
      } else {
        MorphTrainParams params;
        params.max_epochs = train_opts.epochs;
        params.convergence_eps = train_opts.eps;
        if (train_opts.method == "morfessor") {
          model = train_morfessor(corpus, params);
        } else {
          model = train_lmvr(corpus, train_opts.cap, params);
        }
      }
      save_model(model, train_opts.model);
      std::cerr << "trained " << train_opts.method << " model ("
                << vocab_report(model).size << " entries) -> "
                << train_opts.model << "\n";
      return 0;
    }

    if (app.got_subcommand(apply)) {
      const SegmentationModel model = load_model(apply_opts.model);
      const TokenizeMode mode = parse_tokenize_mode(apply_opts.mode);
      const auto lines = detail::read_lines(apply_opts.input);
      const auto segmented = detail::apply_lines(model, lines, mode);
      std::string text;
      for (const auto& line : segmented) text += line + "\n";
      detail::write_text(apply_opts.out.empty()
                             ? std::nullopt
                             : std::make_optional(apply_opts.out),
                         text);
      return 0;
    }

    if (app.got_subcommand(deseg)) {
      const auto lines = detail::read_lines(deseg_opts.input);
      std::string text;
      for (size_t i = 0; i < lines.size(); ++i) {
        try {
          text += desegment(lines[i]) + "\n";
        } catch (const ValidationError& e) {
          throw ValidationError("line " + std::to_string(i + 1) + ": " + e.what());
        }
      }
      detail::write_text(deseg_opts.out.empty()
                             ? std::nullopt
                             : std::make_optional(deseg_opts.out),
                         text);
      return 0;
    }

    if (app.got_subcommand(vocab)) {
      const SegmentationModel model = load_model(vocab_opts.model);
      const VocabReport vr = vocab_report(model);
      ReportBundle bundle;
      bundle.meta = detail::make_meta("vocab", {{"model", vocab_opts.model}},
                                      {{"model", vocab_opts.model}});
      bundle.vocab = std::vector<VocabRow>{{to_string(vr.method), vr.size}};
      if (!vocab_export.out_path.empty()) {
        detail::emit_bundle(bundle, vocab_export);
      } else if (!vocab_opts.dump_entries) {
        std::cout << render_text(bundle);
      }
      if (vocab_opts.dump_entries) {
        for (const auto& entry : vr.entries) std::cout << entry << "\n";
      }
      return 0;
    }

    if (app.got_subcommand(eval_gender)) {
      const Benchmark bench = load_benchmark(gender_opts.benchmark);
      const auto hyps = detail::read_lines(gender_opts.hyp);
      ReportBundle bundle;
      bundle.meta = detail::make_meta(
          "eval-gender",
          {{"benchmark", gender_opts.benchmark}, {"hyp", gender_opts.hyp}},
          {{"benchmark", gender_opts.benchmark}, {"hyp", gender_opts.hyp}});
      bundle.accuracy = gender_accuracy(bench, hyps);
      detail::emit_bundle(bundle, gender_export);
      return 0;
    }

    if (app.got_subcommand(eval_div)) {
      const auto lines = detail::read_lines(div_opts.input);
      const auto tokens = diversity_tokens(lines, parse_tokenize_mode(div_opts.mode),
                                           div_opts.strip_punct);
      if (tokens.empty()) {
        throw ValidationError(div_opts.input + ": no tokens to score");
      }
      ReportBundle bundle;
      bundle.meta = detail::make_meta(
          "eval-diversity",
          {{"input", div_opts.input},
           {"window", std::to_string(div_opts.window)},
           {"mode", div_opts.mode},
           {"strip_punct", div_opts.strip_punct ? "true" : "false"}},
          {{"input", div_opts.input}});
      bundle.diversity = diversity(tokens, div_opts.window);
      detail::emit_bundle(bundle, div_export);
      return 0;
    }

    if (app.got_subcommand(eval_len)) {
      const Benchmark bench = load_benchmark(len_opts.benchmark);
      const SegmentationModel model = load_model(len_opts.model);
      const Averaging averaging =
          segbias::detail::parse_averaging_or_throw(len_opts.average);
      ReportBundle bundle;
      bundle.meta = detail::make_meta(
          "eval-length",
          {{"benchmark", len_opts.benchmark},
           {"model", len_opts.model},
           {"average", len_opts.average}},
          {{"benchmark", len_opts.benchmark}, {"model", len_opts.model}});
      bundle.increment = length_increment(bench, model, averaging);
      detail::emit_bundle(bundle, len_export);
      return 0;
    }

    if (app.got_subcommand(eval_iso)) {
      if (iso_opts.benchmark.empty() == iso_opts.pairs.empty()) {
        throw ValidationError("provide exactly one of --benchmark or --pairs");
      }
      std::vector<std::pair<std::string, std::string>> pairs;
      if (!iso_opts.benchmark.empty()) {
        pairs = benchmark_term_pairs(load_benchmark(iso_opts.benchmark));
      } else {
        for (const auto& p : load_term_pairs(iso_opts.pairs)) {
          pairs.emplace_back(p.correct_form, p.wrong_form);
        }
      }
      const SegmentationModel model = load_model(iso_opts.model);
      const std::string source =
          !iso_opts.benchmark.empty() ? iso_opts.benchmark : iso_opts.pairs;
      ReportBundle bundle;
      bundle.meta = detail::make_meta(
          "eval-isolation",
          {{"pairs", source}, {"model", iso_opts.model}},
          {{"pairs", source}, {"model", iso_opts.model}});
      bundle.isolation = gender_isolation(pairs, model);
      detail::emit_bundle(bundle, iso_export);
      return 0;
    }

    if (app.got_subcommand(asym)) {
      if (asym_opts.benchmark.empty() == asym_opts.pairs.empty()) {
        throw ValidationError("provide exactly one of --benchmark or --pairs");
      }
      std::vector<std::pair<std::string, std::string>> pairs;
      if (!asym_opts.benchmark.empty()) {
        pairs = benchmark_term_pairs(load_benchmark(asym_opts.benchmark));
      } else {
        for (const auto& p : load_term_pairs(asym_opts.pairs)) {
          pairs.emplace_back(p.correct_form, p.wrong_form);
        }
      }
      const Corpus corpus =
          load_corpus(asym_opts.corpus, parse_tokenize_mode(asym_opts.mode));
      const std::string source =
          !asym_opts.benchmark.empty() ? asym_opts.benchmark : asym_opts.pairs;
      ReportBundle bundle;
      bundle.meta = detail::make_meta(
          "analyze-asymmetry",
          {{"pairs", source},
           {"corpus", asym_opts.corpus},
           {"mode", asym_opts.mode}},
          {{"pairs", source}, {"corpus", asym_opts.corpus}});
      bundle.asymmetry = asymmetry(pairs, word_counts(corpus));
      detail::emit_bundle(bundle, asym_export);
      return 0;
    }

    if (app.got_subcommand(report_cmd)) {
      // The merged bundle keeps the imported metadata so re-exporting a
      // single file is byte-identical to its source.
      ReportBundle merged;
      for (const auto& path : report_opts.inputs) {
        ReportBundle part = import_machine(path);
        merged.meta.tool_version = part.meta.tool_version.empty()
                                       ? merged.meta.tool_version
                                       : part.meta.tool_version;
        for (const auto& [k, v] : part.meta.config) merged.meta.config[k] = v;
        for (const auto& [k, v] : part.meta.input_digests) {
          merged.meta.input_digests[k] = v;
        }
        if (part.vocab) {
          if (!merged.vocab) merged.vocab.emplace();
          merged.vocab->insert(merged.vocab->end(), part.vocab->begin(),
                               part.vocab->end());
        }
        if (part.accuracy) merged.accuracy = std::move(part.accuracy);
        if (part.diversity) merged.diversity = std::move(part.diversity);
        if (part.increment) merged.increment = std::move(part.increment);
        if (part.isolation) merged.isolation = std::move(part.isolation);
        if (part.asymmetry) merged.asymmetry = std::move(part.asymmetry);
      }
      const auto out = report_opts.out.empty()
                           ? std::nullopt
                           : std::make_optional(report_opts.out);
      if (report_opts.format == "text") {
        detail::write_text(out, render_text(merged));
      } else {
        const std::string text = export_machine_string(
            merged, *parse_export_format(report_opts.format));
        detail::write_text(out, text);
      }
      return 0;
    }
  } catch (const IoError& e) {
    std::cerr << "segbias: " << e.what() << "\n";
    return 2;
  } catch (const ValidationError& e) {
    std::cerr << "segbias: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "segbias: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

}  // namespace cli
}  // namespace segbias
