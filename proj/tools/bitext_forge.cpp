// Copyright 2026 The bitext-forge Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or
// implied.  See the License for the specific language governing
// permissions and limitations under the License.

// bitext-forge: command line front end over the forge library.
//
// Every run writes a JSON manifest describing the run: beside the
// output file as <output>.manifest.json, or to stderr when the output
// streams to stdout.  Exit codes: 0 success, 1 operational error,
// 2 usage error.

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "forge/dataset.hpp"
#include "forge/error.hpp"
#include "forge/filter.hpp"
#include "forge/lang.hpp"
#include "forge/langid.hpp"
#include "forge/metrics.hpp"
#include "forge/normalize.hpp"
#include "forge/pipeline.hpp"
#include "forge/pivot.hpp"
#include "forge/utf8.hpp"
#include "forge/version.hpp"
#include "forge/vocab.hpp"

namespace {

using forge::Direction;
using forge::LanguageTag;

// ------------------------------------------------------------------
// Small I/O helpers
// ------------------------------------------------------------------

bool is_stream(const std::string& path) { return path.empty() || path == "-"; }

std::vector<std::string> read_lines(const std::string& path) {
  std::ifstream file;
  std::istream* in = &std::cin;
  if (!is_stream(path)) {
    file.open(path, std::ios::binary);
    if (!file) {
      throw forge::IoError("cannot open " + path);
    }
    in = &file;
  }
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(*in, line)) {
    if (!line.empty() && line.back() == '\r') {
      line.pop_back();
    }
    lines.push_back(line);
  }
  return lines;
}

class OutputFile {
 public:
  explicit OutputFile(const std::string& path) : path_(path) {
    if (!is_stream(path_)) {
      file_.open(path_, std::ios::binary);
      if (!file_) {
        throw forge::IoError("cannot write " + path_);
      }
    }
  }

  std::ostream& stream() { return is_stream(path_) ? std::cout : file_; }
  bool streams_to_stdout() const { return is_stream(path_); }
  const std::string& path() const { return path_; }

 private:
  std::string path_;
  std::ofstream file_;
};

class InputFile {
 public:
  explicit InputFile(const std::string& path) : path_(path) {
    if (!is_stream(path_)) {
      file_.open(path_, std::ios::binary);
      if (!file_) {
        throw forge::IoError("cannot open " + path_);
      }
    }
  }

  std::istream& stream() { return is_stream(path_) ? std::cin : file_; }

 private:
  std::string path_;
  std::ifstream file_;
};

// "code=path" flag values.
std::pair<LanguageTag, std::string> parse_lang_file(const std::string& spec) {
  auto eq = spec.find('=');
  if (eq == std::string::npos) {
    throw forge::FormatError("expected code=path, got: " + spec);
  }
  return {LanguageTag::parse(spec.substr(0, eq)), spec.substr(eq + 1)};
}

int resolve_threads(int flag_value) {
  if (flag_value > 0) {
    return flag_value;
  }
  if (const char* env = std::getenv("BITEXT_FORGE_THREADS")) {
    int parsed = std::atoi(env);
    if (parsed > 0) {
      return parsed;
    }
  }
  return 1;
}

// ------------------------------------------------------------------
// Manifests
// ------------------------------------------------------------------

class ManifestClock {
 public:
  ManifestClock() : start_(std::chrono::steady_clock::now()) {}

  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                         start_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

void emit_manifest(forge::pipeline::RunManifest manifest,
                   const ManifestClock& clock, const std::string& out_path) {
  manifest.wall_seconds = clock.seconds();
  const std::string json = manifest.to_json();
  if (is_stream(out_path)) {
    std::cerr << json;
    return;
  }
  const std::string path = out_path + ".manifest.json";
  std::ofstream file(path, std::ios::binary);
  if (!file) {
    throw forge::IoError("cannot write " + path);
  }
  file << json;
}

// ------------------------------------------------------------------
// Stage commands: normalize / filter / dedup / pipeline
// ------------------------------------------------------------------

struct StageArgs {
  std::string input;
  std::string output;
  std::string direction;
  std::string config_path;
  std::string langid_model;
  bool union_whitelist = false;
  int threads = 0;
  // pipeline-only toggles
  bool no_normalize = false;
  bool no_filter = false;
  bool no_dedup = false;
};

void add_stage_flags(CLI::App* cmd, StageArgs& args, bool with_filter_flags) {
  cmd->add_option("-i,--input", args.input, "Input TSV ('-' for stdin)");
  cmd->add_option("-o,--output", args.output, "Output TSV ('-' for stdout)");
  cmd->add_option("--direction", args.direction,
                  "Direction of two-column lines, e.g. pol-ces");
  cmd->add_option("--threads", args.threads,
                  "Worker threads (default: BITEXT_FORGE_THREADS or 1)");
  if (with_filter_flags) {
    cmd->add_option("--config", args.config_path,
                    "Filter thresholds file overriding the built-in defaults");
    cmd->add_option("--langid-model", args.langid_model,
                    "Language-identification model enabling the lang_id gate");
    cmd->add_flag("--union-whitelist", args.union_whitelist,
                  "Pool all registered alphabets into one whitelist");
  }
}

int run_stage_command(const std::string& name, const StageArgs& args,
                      bool normalize, bool filter, bool dedup) {
  ManifestClock clock;

  forge::pipeline::StageOptions opts;
  opts.normalize = normalize;
  opts.filter = filter;
  opts.dedup = dedup;
  opts.threads = resolve_threads(args.threads);
  if (!args.direction.empty()) {
    opts.default_direction = Direction::parse(args.direction);
  }

  std::optional<forge::langid::Model> model;
  forge::filter::Whitelist pooled =
      forge::filter::Whitelist::union_of(forge::registered_languages());
  if (filter) {
    if (!args.config_path.empty()) {
      opts.filter_context.config =
          forge::filter::FilterConfig::load(args.config_path);
    }
    if (!args.langid_model.empty()) {
      model = forge::langid::Model::load(args.langid_model);
      const forge::langid::Model* m = &*model;
      opts.filter_context.gate = [m](std::string_view text,
                                     LanguageTag expected) {
        return m->gate(text, expected);
      };
    }
    if (args.union_whitelist) {
      opts.filter_context.union_whitelist = &pooled;
    }
  }

  InputFile in(args.input);
  OutputFile out(args.output);
  forge::pipeline::Counts counts =
      forge::pipeline::run_pairs(in.stream(), out.stream(), opts);
  out.stream().flush();

  forge::pipeline::RunManifest manifest;
  manifest.subcommand = name;
  manifest.config["normalize"] = normalize ? "true" : "false";
  manifest.config["filter"] = filter ? "true" : "false";
  manifest.config["dedup"] = dedup ? "true" : "false";
  manifest.config["threads"] = std::to_string(opts.threads);
  if (!args.direction.empty()) {
    manifest.config["direction"] = args.direction;
  }
  if (filter) {
    manifest.config["filter_config"] =
        args.config_path.empty() ? "<builtin>" : args.config_path;
    manifest.config["langid_model"] = args.langid_model;
    manifest.config["union_whitelist"] =
        args.union_whitelist ? "true" : "false";
  }
  manifest.inputs = {is_stream(args.input) ? "<stdin>" : args.input};
  manifest.outputs = {is_stream(args.output) ? "<stdout>" : args.output};
  manifest.counts = counts;
  emit_manifest(std::move(manifest), clock, args.output);
  return 0;
}

// ------------------------------------------------------------------
// langid-train / langid-eval
// ------------------------------------------------------------------

struct LangidTrainArgs {
  std::vector<std::string> inputs;
  std::string output;
  int order = 3;
  double alpha = 0.1;
};

int run_langid_train(const LangidTrainArgs& args) {
  ManifestClock clock;
  std::map<LanguageTag, std::vector<std::string>> corpora;
  std::uint64_t total_lines = 0;
  for (const std::string& spec : args.inputs) {
    auto [lang, path] = parse_lang_file(spec);
    std::vector<std::string> lines = read_lines(path);
    total_lines += lines.size();
    auto& bucket = corpora[lang];
    bucket.insert(bucket.end(), lines.begin(), lines.end());
  }

  forge::langid::TrainOptions train_opts;
  train_opts.order = args.order;
  train_opts.alpha = args.alpha;
  forge::langid::Model model = forge::langid::Model::train(corpora, train_opts);
  model.save(args.output);

  forge::pipeline::RunManifest manifest;
  manifest.subcommand = "langid-train";
  manifest.config["order"] = std::to_string(args.order);
  manifest.config["alpha"] = std::to_string(args.alpha);
  manifest.inputs = args.inputs;
  manifest.outputs = {args.output};
  forge::pipeline::Counts counts;
  counts.read = total_lines;
  counts.kept = total_lines;
  manifest.counts = counts;
  emit_manifest(std::move(manifest), clock, args.output);
  return 0;
}

struct LangidEvalArgs {
  std::vector<std::string> inputs;
  std::string model_path;
  std::string output;
  std::size_t min_chars = 0;
};

int run_langid_eval(const LangidEvalArgs& args) {
  ManifestClock clock;
  forge::langid::Model model = forge::langid::Model::load(args.model_path);

  std::uint64_t total = 0;
  std::uint64_t correct = 0;
  std::map<std::string, std::pair<std::uint64_t, std::uint64_t>> per_lang;
  for (const std::string& spec : args.inputs) {
    auto [lang, path] = parse_lang_file(spec);
    auto& bucket = per_lang[std::string(lang.code())];
    for (const std::string& line : read_lines(path)) {
      if (line.empty() ||
          forge::utf8::count_points(line) < args.min_chars) {
        continue;
      }
      ++total;
      ++bucket.second;
      if (model.top1(line) == lang) {
        ++correct;
        ++bucket.first;
      }
    }
  }
  if (total == 0) {
    throw forge::EmptyEvalSetError("no evaluation lines after filtering");
  }

  std::ostringstream json;
  json.setf(std::ios::fixed);
  json.precision(6);
  json << "{\n  \"overall\": {\"correct\": " << correct
       << ", \"total\": " << total << ", \"accuracy_percent\": "
       << 100.0 * static_cast<double>(correct) / static_cast<double>(total)
       << "},\n  \"per_language\": {";
  bool first = true;
  for (const auto& [code, counts] : per_lang) {
    if (!first) {
      json << ", ";
    }
    first = false;
    double percent =
        counts.second == 0
            ? 0.0
            : 100.0 * static_cast<double>(counts.first) /
                  static_cast<double>(counts.second);
    json << "\"" << code << "\": {\"correct\": " << counts.first
         << ", \"total\": " << counts.second
         << ", \"accuracy_percent\": " << percent << "}";
  }
  json << "}\n}\n";

  OutputFile out(args.output);
  out.stream() << json.str();
  out.stream().flush();

  forge::pipeline::RunManifest manifest;
  manifest.subcommand = "langid-eval";
  manifest.config["model"] = args.model_path;
  manifest.config["min_chars"] = std::to_string(args.min_chars);
  manifest.inputs = args.inputs;
  manifest.outputs = {is_stream(args.output) ? "<stdout>" : args.output};
  forge::pipeline::Counts counts;
  counts.read = total;
  counts.kept = correct;
  counts.dropped = total - correct;
  counts.dropped_by_reason["misclassified"] = total - correct;
  manifest.counts = counts;
  emit_manifest(std::move(manifest), clock, args.output);
  return 0;
}

// ------------------------------------------------------------------
// sample
// ------------------------------------------------------------------

struct SampleArgs {
  std::vector<std::string> inputs;
  std::string output;
  std::string strategy = "equal";
  std::size_t total = 0;
  std::uint64_t seed = 42;
};

int run_sample(const SampleArgs& args) {
  ManifestClock clock;
  std::map<LanguageTag, std::vector<std::string>> corpora;
  std::uint64_t read = 0;
  for (const std::string& spec : args.inputs) {
    auto [lang, path] = parse_lang_file(spec);
    std::vector<std::string> lines = read_lines(path);
    read += lines.size();
    auto& bucket = corpora[lang];
    bucket.insert(bucket.end(), lines.begin(), lines.end());
  }

  forge::dataset::SamplingSpec spec;
  spec.strategy = args.strategy == "proportional"
                      ? forge::dataset::SamplingStrategy::kProportional
                      : forge::dataset::SamplingStrategy::kEqual;
  spec.total = args.total;
  spec.seed = args.seed;

  forge::dataset::SampleReport report;
  auto sampled = forge::dataset::sample_corpus(corpora, spec, &report);

  OutputFile out(args.output);
  std::uint64_t written = 0;
  for (const auto& [lang, lines] : sampled) {
    for (const std::string& line : lines) {
      out.stream() << line << '\n';
      ++written;
    }
  }
  out.stream().flush();
  for (const std::string& warning : report.warnings) {
    std::cerr << "warning: " << warning << '\n';
  }

  forge::pipeline::RunManifest manifest;
  manifest.subcommand = "sample";
  manifest.config["strategy"] = args.strategy;
  manifest.config["total"] = std::to_string(args.total);
  for (const auto& [code, taken] : report.taken) {
    manifest.config["taken_" + code] = std::to_string(taken);
  }
  manifest.inputs = args.inputs;
  manifest.outputs = {is_stream(args.output) ? "<stdout>" : args.output};
  manifest.seed = args.seed;
  forge::pipeline::Counts counts;
  counts.read = read;
  counts.kept = written;
  counts.dropped = read - written;
  counts.dropped_by_reason["not_sampled"] = read - written;
  manifest.counts = counts;
  emit_manifest(std::move(manifest), clock, args.output);
  return 0;
}

// ------------------------------------------------------------------
// vocab-train / vocab-stats / tokenize
// ------------------------------------------------------------------

struct VocabTrainArgs {
  std::vector<std::string> inputs;
  std::string output;
  std::size_t target_size = 0;
  std::size_t languages = 0;
  std::vector<std::string> lang_tokens;
  double seed_multiplier = 4.0;
  double prune_fraction = 0.2;
  std::size_t max_piece_len = 8;
};

int run_vocab_train(const VocabTrainArgs& args) {
  ManifestClock clock;
  if ((args.target_size == 0) == (args.languages == 0)) {
    throw forge::Error("give exactly one of --target-size and --languages");
  }

  std::vector<std::string> corpus;
  for (const std::string& path : args.inputs) {
    std::vector<std::string> lines = read_lines(path);
    corpus.insert(corpus.end(), lines.begin(), lines.end());
  }

  forge::vocab::TrainOptions opts;
  opts.target_size = args.target_size != 0
                         ? args.target_size
                         : forge::vocab::vocab_size_for(args.languages);
  for (const std::string& code : args.lang_tokens) {
    opts.specials.push_back(forge::pivot::make_lang_token(
        LanguageTag::parse(code)));
  }
  opts.seed_multiplier = args.seed_multiplier;
  opts.prune_fraction = args.prune_fraction;
  opts.max_piece_len = args.max_piece_len;

  forge::vocab::Vocab vocab = forge::vocab::Vocab::train(corpus, opts);
  vocab.save(args.output);

  forge::pipeline::RunManifest manifest;
  manifest.subcommand = "vocab-train";
  manifest.config["target_size"] = std::to_string(opts.target_size);
  manifest.config["pieces"] = std::to_string(vocab.size());
  manifest.config["seed_multiplier"] = std::to_string(args.seed_multiplier);
  manifest.config["prune_fraction"] = std::to_string(args.prune_fraction);
  manifest.config["max_piece_len"] = std::to_string(args.max_piece_len);
  manifest.inputs = args.inputs;
  manifest.outputs = {args.output};
  forge::pipeline::Counts counts;
  counts.read = corpus.size();
  counts.kept = corpus.size();
  manifest.counts = counts;
  emit_manifest(std::move(manifest), clock, args.output);
  return 0;
}

struct VocabStatsArgs {
  std::vector<std::string> vocabs;
  std::string input;
  std::string output;
};

int run_vocab_stats(const VocabStatsArgs& args) {
  ManifestClock clock;
  std::ostringstream json;
  json.setf(std::ios::fixed);
  json.precision(6);

  if (args.vocabs.size() == 2 && args.input.empty()) {
    forge::vocab::Vocab a = forge::vocab::Vocab::load(args.vocabs[0]);
    forge::vocab::Vocab b = forge::vocab::Vocab::load(args.vocabs[1]);
    json << "{\n  \"mode\": \"overlap\",\n  \"size_a\": " << a.size()
         << ",\n  \"size_b\": " << b.size() << ",\n  \"overlap_percent\": "
         << forge::vocab::overlap_percent(a, b) << "\n}\n";
  } else if (args.vocabs.size() == 1 && !args.input.empty()) {
    forge::vocab::Vocab vocab = forge::vocab::Vocab::load(args.vocabs[0]);
    forge::vocab::TokenStats stats =
        forge::vocab::tokenization_stats(vocab, read_lines(args.input));
    json << "{\n  \"mode\": \"tokenization\",\n  \"lines\": " << stats.lines
         << ",\n  \"total_pieces\": " << stats.total_pieces
         << ",\n  \"mean_pieces_per_line\": " << stats.mean_pieces_per_line
         << ",\n  \"std_pieces_per_line\": " << stats.std_pieces_per_line
         << "\n}\n";
  } else {
    throw forge::Error(
        "give two --vocab files for overlap, or one --vocab plus --input for "
        "tokenization statistics");
  }

  OutputFile out(args.output);
  out.stream() << json.str();
  out.stream().flush();

  forge::pipeline::RunManifest manifest;
  manifest.subcommand = "vocab-stats";
  manifest.inputs = args.vocabs;
  if (!args.input.empty()) {
    manifest.inputs.push_back(args.input);
  }
  manifest.outputs = {is_stream(args.output) ? "<stdout>" : args.output};
  emit_manifest(std::move(manifest), clock, args.output);
  return 0;
}

struct TokenizeArgs {
  std::string vocab_path;
  std::string input;
  std::string output;
  bool detokenize = false;
};

int run_tokenize(const TokenizeArgs& args) {
  ManifestClock clock;
  forge::vocab::Vocab vocab = forge::vocab::Vocab::load(args.vocab_path);

  InputFile in(args.input);
  OutputFile out(args.output);
  std::uint64_t lines = 0;
  std::string line;
  while (std::getline(in.stream(), line)) {
    if (!line.empty() && line.back() == '\r') {
      line.pop_back();
    }
    ++lines;
    if (args.detokenize) {
      std::vector<std::string> pieces;
      std::istringstream split(line);
      std::string piece;
      while (split >> piece) {
        pieces.push_back(piece);
      }
      out.stream() << vocab.detokenize(pieces) << '\n';
    } else {
      std::vector<std::string> pieces = vocab.tokenize(line);
      for (std::size_t i = 0; i < pieces.size(); ++i) {
        if (i > 0) {
          out.stream() << ' ';
        }
        out.stream() << pieces[i];
      }
      out.stream() << '\n';
    }
  }
  out.stream().flush();

  forge::pipeline::RunManifest manifest;
  manifest.subcommand = "tokenize";
  manifest.config["vocab"] = args.vocab_path;
  manifest.config["detokenize"] = args.detokenize ? "true" : "false";
  manifest.inputs = {is_stream(args.input) ? "<stdin>" : args.input};
  manifest.outputs = {is_stream(args.output) ? "<stdout>" : args.output};
  forge::pipeline::Counts counts;
  counts.read = lines;
  counts.kept = lines;
  manifest.counts = counts;
  emit_manifest(std::move(manifest), clock, args.output);
  return 0;
}

// ------------------------------------------------------------------
// route
// ------------------------------------------------------------------

struct RouteArgs {
  std::string source;
  std::string target;
  std::string bridge;
  bool direct = false;
  std::string backend_m2o;
  std::string backend_o2m;
  std::string backend_m2m;
  std::string input;
  std::string output;
  double timeout = 30.0;
  int retries = 2;
  bool no_normalize_between = false;
};

// "http://host:port" or "mock:<dir>" holding <code>.tsv dictionaries.
std::unique_ptr<forge::pivot::TranslationBackend> make_backend(
    const std::string& spec, const RouteArgs& args) {
  if (spec.rfind("mock:", 0) == 0) {
    const std::string dir = spec.substr(5);
    std::map<LanguageTag, forge::pivot::MockBackend::Dictionary> by_target;
    for (LanguageTag lang : forge::registered_languages()) {
      const std::string path =
          dir + "/" + std::string(lang.code()) + ".tsv";
      if (std::ifstream(path).good()) {
        by_target[lang] = forge::pivot::MockBackend::load_dictionary(path);
      }
    }
    if (by_target.empty()) {
      throw forge::IoError("no <code>.tsv dictionaries under " + dir);
    }
    return std::make_unique<forge::pivot::MockBackend>(spec,
                                                       std::move(by_target));
  }
  std::vector<LanguageTag> all(forge::registered_languages().begin(),
                               forge::registered_languages().end());
  return std::make_unique<forge::pivot::HttpBackend>(spec, all, args.timeout,
                                                     args.retries);
}

int run_route(const RouteArgs& args) {
  ManifestClock clock;
  const LanguageTag source = LanguageTag::parse(args.source);
  const LanguageTag target = LanguageTag::parse(args.target);

  forge::pivot::RoutePlan plan;
  if (args.direct) {
    plan = forge::pivot::plan_direct(source, target);
  } else {
    if (args.bridge.empty()) {
      throw forge::Error("route needs --bridge unless --direct is given");
    }
    plan = forge::pivot::plan_route(source, target,
                                    LanguageTag::parse(args.bridge));
  }

  std::map<forge::pivot::BackendRole,
           std::unique_ptr<forge::pivot::TranslationBackend>>
      owned;
  if (!args.backend_m2o.empty()) {
    owned[forge::pivot::BackendRole::kMany2One] =
        make_backend(args.backend_m2o, args);
  }
  if (!args.backend_o2m.empty()) {
    owned[forge::pivot::BackendRole::kOne2Many] =
        make_backend(args.backend_o2m, args);
  }
  if (!args.backend_m2m.empty()) {
    owned[forge::pivot::BackendRole::kMany2Many] =
        make_backend(args.backend_m2m, args);
  }
  std::map<forge::pivot::BackendRole, forge::pivot::TranslationBackend*>
      backends;
  for (const auto& [role, backend] : owned) {
    backends[role] = backend.get();
  }

  std::vector<std::string> texts = read_lines(args.input);
  forge::pivot::RouteOptions opts;
  opts.normalize_between_hops = !args.no_normalize_between;
  std::vector<std::string> translated =
      forge::pivot::translate_batch(plan, backends, texts, opts);

  OutputFile out(args.output);
  for (const std::string& text : translated) {
    out.stream() << text << '\n';
  }
  out.stream().flush();

  forge::pipeline::RunManifest manifest;
  manifest.subcommand = "route";
  manifest.config["source"] = args.source;
  manifest.config["target"] = args.target;
  manifest.config["bridge"] = args.direct ? "<direct>" : args.bridge;
  manifest.config["hops"] = std::to_string(plan.hops.size());
  manifest.config["normalize_between_hops"] =
      opts.normalize_between_hops ? "true" : "false";
  manifest.inputs = {is_stream(args.input) ? "<stdin>" : args.input};
  manifest.outputs = {is_stream(args.output) ? "<stdout>" : args.output};
  forge::pipeline::Counts counts;
  counts.read = texts.size();
  counts.kept = translated.size();
  manifest.counts = counts;
  emit_manifest(std::move(manifest), clock, args.output);
  return 0;
}

// ------------------------------------------------------------------
// score
// ------------------------------------------------------------------

struct ScoreArgs {
  std::string metric = "chrf";
  std::string hyp_path;
  std::string ref_path;
  std::string output;
};

int run_score(const ScoreArgs& args) {
  ManifestClock clock;
  forge::metrics::Metric metric = forge::metrics::parse_metric(args.metric);
  forge::metrics::ScoreReport report =
      forge::metrics::score_file(args.hyp_path, args.ref_path, metric);

  OutputFile out(args.output);
  out.stream() << report.to_json();
  out.stream().flush();

  forge::pipeline::RunManifest manifest;
  manifest.subcommand = "score";
  manifest.config["metric"] = args.metric;
  manifest.config["signature"] = report.signature;
  manifest.inputs = {args.hyp_path, args.ref_path};
  manifest.outputs = {is_stream(args.output) ? "<stdout>" : args.output};
  forge::pipeline::Counts counts;
  counts.read = report.segments.size();
  counts.kept = report.segments.size();
  manifest.counts = counts;
  emit_manifest(std::move(manifest), clock, args.output);
  return 0;
}

// ------------------------------------------------------------------
// ablate
// ------------------------------------------------------------------

struct AblateArgs {
  std::vector<std::string> excludes;
  std::string input;
  std::string output;
  std::string direction;
  bool single_direction = false;
  bool lang_tokens = false;
};

int run_ablate(const AblateArgs& args) {
  ManifestClock clock;
  std::optional<Direction> default_direction;
  if (!args.direction.empty()) {
    default_direction = Direction::parse(args.direction);
  }

  InputFile in(args.input);
  forge::dataset::TsvReader reader(in.stream(), default_direction);
  std::vector<forge::SentencePair> pairs;
  while (std::optional<forge::SentencePair> pair = reader.next()) {
    pairs.push_back(std::move(*pair));
  }

  std::vector<forge::dataset::DirectedExample> examples =
      forge::dataset::expand_directed(pairs, !args.single_direction);

  std::vector<Direction> excluded;
  excluded.reserve(args.excludes.size());
  for (const std::string& spec : args.excludes) {
    excluded.push_back(Direction::parse(spec));
  }

  forge::dataset::ExclusionReport report;
  std::vector<forge::dataset::DirectedExample> kept =
      forge::dataset::exclude_directions(examples, excluded, &report);

  OutputFile out(args.output);
  for (const forge::dataset::DirectedExample& example : kept) {
    if (args.lang_tokens) {
      out.stream() << forge::pivot::prepend_lang_token(
                          example.source, example.direction.target)
                   << '\t' << example.target << '\n';
    } else {
      out.stream() << example.direction.source.code() << '\t'
                   << example.direction.target.code() << '\t' << example.source
                   << '\t' << example.target << '\n';
    }
  }
  out.stream().flush();

  forge::pipeline::RunManifest manifest;
  manifest.subcommand = "ablate";
  for (const std::string& spec : args.excludes) {
    manifest.config["exclude_" + spec] = "true";
  }
  manifest.config["single_direction"] =
      args.single_direction ? "true" : "false";
  manifest.config["lang_tokens"] = args.lang_tokens ? "true" : "false";
  manifest.inputs = {is_stream(args.input) ? "<stdin>" : args.input};
  manifest.outputs = {is_stream(args.output) ? "<stdout>" : args.output};
  forge::pipeline::Counts counts;
  counts.read = examples.size();
  counts.kept = report.kept;
  counts.malformed = reader.stats().malformed;
  for (const auto& [direction, removed] : report.removed) {
    counts.dropped += removed;
    counts.dropped_by_reason["excluded:" + direction] = removed;
  }
  counts.read = counts.kept + counts.dropped + counts.malformed;
  manifest.counts = counts;
  emit_manifest(std::move(manifest), clock, args.output);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  std::ios::sync_with_stdio(false);

  CLI::App app{"bitext-forge: parallel corpus engineering toolkit"};
  app.set_version_flag("--version", std::string(forge::kVersion));
  app.require_subcommand(1);

  StageArgs normalize_args;
  CLI::App* cmd_normalize =
      app.add_subcommand("normalize", "Unicode-normalize a TSV pair stream");
  add_stage_flags(cmd_normalize, normalize_args, /*with_filter_flags=*/false);

  StageArgs filter_args;
  CLI::App* cmd_filter =
      app.add_subcommand("filter", "Drop pairs violating feature thresholds");
  add_stage_flags(cmd_filter, filter_args, /*with_filter_flags=*/true);

  StageArgs dedup_args;
  CLI::App* cmd_dedup =
      app.add_subcommand("dedup", "Drop pairs repeating either side");
  add_stage_flags(cmd_dedup, dedup_args, /*with_filter_flags=*/false);

  StageArgs pipeline_args;
  CLI::App* cmd_pipeline = app.add_subcommand(
      "pipeline", "normalize + filter + dedup in one pass");
  add_stage_flags(cmd_pipeline, pipeline_args, /*with_filter_flags=*/true);
  cmd_pipeline->add_flag("--no-normalize", pipeline_args.no_normalize,
                         "Skip the normalize stage");
  cmd_pipeline->add_flag("--no-filter", pipeline_args.no_filter,
                         "Skip the filter stage");
  cmd_pipeline->add_flag("--no-dedup", pipeline_args.no_dedup,
                         "Skip the dedup stage");

  LangidTrainArgs langid_train_args;
  CLI::App* cmd_langid_train = app.add_subcommand(
      "langid-train", "Train a character n-gram language identifier");
  cmd_langid_train
      ->add_option("--input", langid_train_args.inputs,
                   "code=path text file, one sentence per line (repeatable)")
      ->required();
  cmd_langid_train->add_option("-o,--output", langid_train_args.output)
      ->required();
  cmd_langid_train->add_option("--order", langid_train_args.order,
                               "n-gram order (default 3)");
  cmd_langid_train->add_option("--alpha", langid_train_args.alpha,
                               "additive smoothing (default 0.1)");

  LangidEvalArgs langid_eval_args;
  CLI::App* cmd_langid_eval = app.add_subcommand(
      "langid-eval", "Top-1 accuracy of a language identifier");
  cmd_langid_eval->add_option("--model", langid_eval_args.model_path)
      ->required();
  cmd_langid_eval
      ->add_option("--input", langid_eval_args.inputs,
                   "code=path labeled evaluation file (repeatable)")
      ->required();
  cmd_langid_eval->add_option("-o,--output", langid_eval_args.output);
  cmd_langid_eval->add_option("--min-chars", langid_eval_args.min_chars,
                              "Skip lines shorter than this many code points");

  SampleArgs sample_args;
  CLI::App* cmd_sample = app.add_subcommand(
      "sample", "Sample a tokenizer corpus across languages");
  cmd_sample
      ->add_option("--input", sample_args.inputs,
                   "code=path text file (repeatable)")
      ->required();
  cmd_sample->add_option("-o,--output", sample_args.output);
  cmd_sample->add_option("--strategy", sample_args.strategy)
      ->check(CLI::IsMember({"equal", "proportional"}));
  cmd_sample->add_option("--total", sample_args.total, "Total lines to draw")
      ->required();
  cmd_sample->add_option("--seed", sample_args.seed, "RNG seed (default 42)");

  VocabTrainArgs vocab_train_args;
  CLI::App* cmd_vocab_train =
      app.add_subcommand("vocab-train", "Train a unigram vocabulary");
  cmd_vocab_train
      ->add_option("--input", vocab_train_args.inputs,
                   "Training text file (repeatable)")
      ->required();
  cmd_vocab_train->add_option("-o,--output", vocab_train_args.output)
      ->required();
  cmd_vocab_train->add_option("--target-size", vocab_train_args.target_size,
                              "Vocabulary size");
  cmd_vocab_train->add_option(
      "--languages", vocab_train_args.languages,
      "Derive the size from a language count (16k per language)");
  cmd_vocab_train->add_option("--lang-token", vocab_train_args.lang_tokens,
                              "Reserve >>code<< as a control piece "
                              "(repeatable)");
  cmd_vocab_train->add_option("--seed-multiplier",
                              vocab_train_args.seed_multiplier);
  cmd_vocab_train->add_option("--prune-fraction",
                              vocab_train_args.prune_fraction);
  cmd_vocab_train->add_option("--max-piece-len",
                              vocab_train_args.max_piece_len);

  VocabStatsArgs vocab_stats_args;
  CLI::App* cmd_vocab_stats = app.add_subcommand(
      "vocab-stats", "Vocabulary overlap or tokenization statistics");
  cmd_vocab_stats
      ->add_option("--vocab", vocab_stats_args.vocabs,
                   "Vocabulary file (once or twice)")
      ->required();
  cmd_vocab_stats->add_option("--input", vocab_stats_args.input,
                              "Text file for tokenization statistics");
  cmd_vocab_stats->add_option("-o,--output", vocab_stats_args.output);

  TokenizeArgs tokenize_args;
  CLI::App* cmd_tokenize =
      app.add_subcommand("tokenize", "Segment text lines with a vocabulary");
  cmd_tokenize->add_option("--vocab", tokenize_args.vocab_path)->required();
  cmd_tokenize->add_option("-i,--input", tokenize_args.input);
  cmd_tokenize->add_option("-o,--output", tokenize_args.output);
  cmd_tokenize->add_flag("--detokenize", tokenize_args.detokenize,
                         "Join piece lines back into text");

  RouteArgs route_args;
  CLI::App* cmd_route =
      app.add_subcommand("route", "Translate lines through a pivot plan");
  cmd_route->add_option("--source", route_args.source)->required();
  cmd_route->add_option("--target", route_args.target)->required();
  cmd_route->add_option("--bridge", route_args.bridge);
  cmd_route->add_flag("--direct", route_args.direct,
                      "Use a single many-to-many hop");
  cmd_route->add_option("--backend-m2o", route_args.backend_m2o,
                        "many-to-one backend: http://host:port or mock:<dir>");
  cmd_route->add_option("--backend-o2m", route_args.backend_o2m,
                        "one-to-many backend");
  cmd_route->add_option("--backend-m2m", route_args.backend_m2m,
                        "many-to-many backend");
  cmd_route->add_option("-i,--input", route_args.input);
  cmd_route->add_option("-o,--output", route_args.output);
  cmd_route->add_option("--timeout", route_args.timeout,
                        "HTTP timeout in seconds");
  cmd_route->add_option("--retries", route_args.retries);
  cmd_route->add_flag("--no-normalize-between", route_args.no_normalize_between,
                      "Skip normalization between hops");

  ScoreArgs score_args;
  CLI::App* cmd_score =
      app.add_subcommand("score", "chrF or BLEU over hypothesis/reference files");
  cmd_score->add_option("--metric", score_args.metric)
      ->check(CLI::IsMember({"chrf", "bleu"}));
  cmd_score->add_option("--hyp", score_args.hyp_path)->required();
  cmd_score->add_option("--ref", score_args.ref_path)->required();
  cmd_score->add_option("-o,--output", score_args.output);

  AblateArgs ablate_args;
  CLI::App* cmd_ablate = app.add_subcommand(
      "ablate", "Build a directed dataset with directions excluded");
  cmd_ablate->add_option("--exclude", ablate_args.excludes,
                         "Direction to drop, e.g. slk-slv (repeatable)");
  cmd_ablate->add_option("-i,--input", ablate_args.input);
  cmd_ablate->add_option("-o,--output", ablate_args.output);
  cmd_ablate->add_option("--direction", ablate_args.direction,
                         "Direction of two-column input lines");
  cmd_ablate->add_flag("--single-direction", ablate_args.single_direction,
                       "Do not add reversed examples");
  cmd_ablate->add_flag("--lang-tokens", ablate_args.lang_tokens,
                       "Write two columns with >>code<< prepended");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (app.got_subcommand(cmd_normalize)) {
      return run_stage_command("normalize", normalize_args, true, false,
                               false);
    }
    if (app.got_subcommand(cmd_filter)) {
      return run_stage_command("filter", filter_args, false, true, false);
    }
    if (app.got_subcommand(cmd_dedup)) {
      return run_stage_command("dedup", dedup_args, false, false, true);
    }
    if (app.got_subcommand(cmd_pipeline)) {
      return run_stage_command("pipeline", pipeline_args,
                               !pipeline_args.no_normalize,
                               !pipeline_args.no_filter,
                               !pipeline_args.no_dedup);
    }
    if (app.got_subcommand(cmd_langid_train)) {
      return run_langid_train(langid_train_args);
    }
    if (app.got_subcommand(cmd_langid_eval)) {
      return run_langid_eval(langid_eval_args);
    }
    if (app.got_subcommand(cmd_sample)) {
      return run_sample(sample_args);
    }
    if (app.got_subcommand(cmd_vocab_train)) {
      return run_vocab_train(vocab_train_args);
    }
    if (app.got_subcommand(cmd_vocab_stats)) {
      return run_vocab_stats(vocab_stats_args);
    }
    if (app.got_subcommand(cmd_tokenize)) {
      return run_tokenize(tokenize_args);
    }
    if (app.got_subcommand(cmd_route)) {
      return run_route(route_args);
    }
    if (app.got_subcommand(cmd_score)) {
      return run_score(score_args);
    }
    if (app.got_subcommand(cmd_ablate)) {
      return run_ablate(ablate_args);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
