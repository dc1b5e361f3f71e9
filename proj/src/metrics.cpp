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

#include "forge/metrics.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <unordered_map>
#include <utility>

#include "forge/error.hpp"
#include "forge/utf8.hpp"
#include "forge/version.hpp"

namespace forge::metrics {

namespace {

// The reference scorers treat a zero precision as this constant
// instead of letting log(0) poison the sum.
constexpr double kLogZero = -9999999999.0;

double my_log(double x) {
  if (x == 0.0) {
    return kLogZero;
  }
  return std::log(x);
}

void replace_all(std::string& s, std::string_view from, std::string_view to) {
  std::size_t pos = 0;
  while ((pos = s.find(from, pos)) != std::string::npos) {
    s.replace(pos, from.size(), to);
    pos += to.size();
  }
}

bool is_ascii_digit(unsigned char b) { return b >= '0' && b <= '9'; }

// ASCII punctuation isolated by the first 13a rule: everything
// printable except letters, digits, apostrophe, comma, hyphen and
// period.  Space is included, which is harmless because whitespace
// collapses at the end.
bool is_13a_punct(unsigned char b) {
  return (b >= 0x20 && b <= 0x26) || (b >= 0x28 && b <= 0x2B) || b == 0x2F ||
         (b >= 0x3A && b <= 0x40) || (b >= 0x5B && b <= 0x60) ||
         (b >= 0x7B && b <= 0x7E);
}

// One left-to-right non-overlapping pass over byte pairs.  When
// match(a, b) holds, both bytes are consumed and rewritten as
// "[space?] a SP b [space?]"; otherwise a single byte is copied.
// Byte-level scanning is sound here: every byte the matchers test
// for is ASCII, and UTF-8 never embeds ASCII bytes inside multi-byte
// sequences.
template <typename Match>
std::string pair_pass(const std::string& s, Match match, bool space_before,
                      bool space_after) {
  std::string out;
  out.reserve(s.size() + s.size() / 2);
  std::size_t i = 0;
  while (i < s.size()) {
    if (i + 1 < s.size() && match(static_cast<unsigned char>(s[i]),
                                  static_cast<unsigned char>(s[i + 1]))) {
      if (space_before) {
        out += ' ';
      }
      out += s[i];
      out += ' ';
      out += s[i + 1];
      if (space_after) {
        out += ' ';
      }
      i += 2;
    } else {
      out += s[i];
      ++i;
    }
  }
  return out;
}

// FNV-1a over code points, with heterogeneous string_view lookup.
struct U32SpanHash {
  using is_transparent = void;
  std::size_t operator()(std::u32string_view s) const noexcept {
    std::size_t h = 1469598103934665603ull;
    for (char32_t cp : s) {
      h ^= static_cast<std::size_t>(cp);
      h *= 1099511628211ull;
    }
    return h;
  }
  std::size_t operator()(const std::u32string& s) const noexcept {
    return (*this)(std::u32string_view(s));
  }
};

struct U32SpanEq {
  using is_transparent = void;
  bool operator()(std::u32string_view a, std::u32string_view b) const noexcept {
    return a == b;
  }
};

using CharGramCounts =
    std::unordered_map<std::u32string, long long, U32SpanHash, U32SpanEq>;

CharGramCounts char_ngrams(const std::u32string& s, int n) {
  CharGramCounts counts;
  if (static_cast<std::size_t>(n) <= s.size()) {
    counts.reserve(s.size() - n + 1);
    for (std::size_t i = 0; i + n <= s.size(); ++i) {
      auto [it, fresh] = counts.try_emplace(s.substr(i, n), 0);
      ++it->second;
    }
  }
  return counts;
}

// Code points with split-space characters removed.
std::u32string strip_spaces(std::string_view text) {
  std::u32string out;
  out.reserve(text.size());
  std::size_t i = 0;
  while (i < text.size()) {
    char32_t cp = utf8::decode_one(text, i);
    if (!is_split_space(cp)) {
      out.push_back(cp);
    }
  }
  return out;
}

using WordGramCounts = std::unordered_map<std::string, long long>;

// Counts per order; the key joins tokens with '\n', a byte that can
// never appear inside a token.
std::vector<WordGramCounts> word_ngrams(const std::vector<std::string>& tokens,
                                        int max_order) {
  std::vector<WordGramCounts> by_order(max_order);
  for (int n = 1; n <= max_order; ++n) {
    WordGramCounts& counts = by_order[n - 1];
    if (tokens.size() < static_cast<std::size_t>(n)) {
      continue;
    }
    counts.reserve(tokens.size() - n + 1);
    for (std::size_t i = 0; i + n <= tokens.size(); ++i) {
      std::string key = tokens[i];
      for (int k = 1; k < n; ++k) {
        key += '\n';
        key += tokens[i + k];
      }
      ++counts[std::move(key)];
    }
  }
  return by_order;
}

long long closest_ref_len(long long hyp_len,
                          const std::vector<long long>& ref_lens) {
  long long closest_diff = -1;
  long long closest_len = -1;
  for (long long ref_len : ref_lens) {
    long long diff = std::llabs(hyp_len - ref_len);
    if (closest_diff == -1 || diff < closest_diff) {
      closest_diff = diff;
      closest_len = ref_len;
    } else if (diff == closest_diff && ref_len < closest_len) {
      closest_len = ref_len;
    }
  }
  return closest_len;
}

std::string format_fixed(double value) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6f", value);
  return buf;
}

std::string json_escape(std::string_view s) {
  std::string out;
  out.reserve(s.size() + 2);
  for (char c : s) {
    switch (c) {
      case '"':
        out += "\\\"";
        break;
      case '\\':
        out += "\\\\";
        break;
      case '\n':
        out += "\\n";
        break;
      case '\r':
        out += "\\r";
        break;
      case '\t':
        out += "\\t";
        break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof(buf), "\\u%04x",
                        static_cast<unsigned>(static_cast<unsigned char>(c)));
          out += buf;
        } else {
          out += c;
        }
    }
  }
  return out;
}

std::vector<std::string> read_lines(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IoError("cannot open " + path);
  }
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') {
      line.pop_back();
    }
    lines.push_back(line);
  }
  return lines;
}

}  // namespace

// ------------------------------------------------------------------
// Tokenization
// ------------------------------------------------------------------

bool is_split_space(char32_t cp) {
  switch (cp) {
    case 0x09:
    case 0x0A:
    case 0x0B:
    case 0x0C:
    case 0x0D:
    case 0x1C:
    case 0x1D:
    case 0x1E:
    case 0x1F:
    case 0x20:
    case 0x85:
    case 0xA0:
    case 0x1680:
    case 0x2028:
    case 0x2029:
    case 0x202F:
    case 0x205F:
    case 0x3000:
      return true;
    default:
      return cp >= 0x2000 && cp <= 0x200A;
  }
}

std::vector<std::string> split_tokens(std::string_view text) {
  std::vector<std::string> tokens;
  std::string current;
  std::size_t i = 0;
  while (i < text.size()) {
    const std::size_t start = i;
    char32_t cp = utf8::decode_one(text, i);
    if (is_split_space(cp)) {
      if (!current.empty()) {
        tokens.push_back(std::move(current));
        current.clear();
      }
    } else {
      current.append(text.substr(start, i - start));
    }
  }
  if (!current.empty()) {
    tokens.push_back(std::move(current));
  }
  return tokens;
}

std::string tokenize_13a(std::string_view line_in) {
  std::string line(line_in);
  replace_all(line, "<skipped>", "");
  replace_all(line, "-\n", "");
  replace_all(line, "\n", " ");
  if (line.find('&') != std::string::npos) {
    replace_all(line, "&quot;", "\"");
    replace_all(line, "&amp;", "&");
    replace_all(line, "&lt;", "<");
    replace_all(line, "&gt;", ">");
  }

  std::string padded;
  padded.reserve(line.size() + 2);
  padded += ' ';
  padded += line;
  padded += ' ';

  // Isolate punctuation.
  std::string stage;
  stage.reserve(padded.size() * 2);
  for (char c : padded) {
    if (is_13a_punct(static_cast<unsigned char>(c))) {
      stage += ' ';
      stage += c;
      stage += ' ';
    } else {
      stage += c;
    }
  }

  // Period or comma after a non-digit.
  stage = pair_pass(
      stage,
      [](unsigned char a, unsigned char b) {
        return !is_ascii_digit(a) && (b == '.' || b == ',');
      },
      /*space_before=*/false, /*space_after=*/true);

  // Period or comma before a non-digit.
  stage = pair_pass(
      stage,
      [](unsigned char a, unsigned char b) {
        return (a == '.' || a == ',') && !is_ascii_digit(b);
      },
      /*space_before=*/true, /*space_after=*/false);

  // Hyphen after a digit.
  stage = pair_pass(
      stage,
      [](unsigned char a, unsigned char b) {
        return is_ascii_digit(a) && b == '-';
      },
      /*space_before=*/false, /*space_after=*/true);

  std::vector<std::string> tokens = split_tokens(stage);
  std::string out;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (i > 0) {
      out += ' ';
    }
    out += tokens[i];
  }
  return out;
}

// ------------------------------------------------------------------
// Configurations
// ------------------------------------------------------------------

std::string ChrfConfig::signature() const {
  char beta_buf[32];
  std::snprintf(beta_buf, sizeof(beta_buf), "%g", beta);
  std::string sig = "chrF";
  sig += beta_buf;
  sig += "|nrefs:1|case:mixed|eff:";
  sig += effective_order ? "yes" : "no";
  sig += "|nc:" + std::to_string(char_order);
  sig += "|nw:" + std::to_string(word_order);
  sig += "|space:";
  sig += remove_whitespace ? "no" : "yes";
  sig += "|version:";
  sig += kVersion;
  return sig;
}

std::string BleuConfig::signature(std::size_t nrefs) const {
  std::string sig = "BLEU|nrefs:" + std::to_string(nrefs);
  sig += "|case:mixed|eff:";
  sig += effective_order ? "yes" : "no";
  sig += "|tok:13a|smooth:exp|version:";
  sig += kVersion;
  return sig;
}

// ------------------------------------------------------------------
// chrF
// ------------------------------------------------------------------

MetricScore chrf(std::string_view hypothesis, std::string_view reference,
                 const ChrfConfig& cfg) {
  if (cfg.word_order != 0) {
    throw Error("chrf word_order other than 0 is not supported");
  }
  if (cfg.char_order < 1) {
    throw Error("chrf char_order must be at least 1");
  }

  std::u32string hyp;
  std::u32string ref;
  if (cfg.remove_whitespace) {
    hyp = strip_spaces(hypothesis);
    ref = strip_spaces(reference);
  } else {
    hyp = utf8::decode(hypothesis);
    ref = utf8::decode(reference);
  }
  if (ref.empty()) {
    throw EmptyReferenceError("chrf reference is empty");
  }

  const double factor = cfg.beta * cfg.beta;
  double score = 0.0;
  int effective = 0;
  for (int n = 1; n <= cfg.char_order; ++n) {
    CharGramCounts hyp_grams = char_ngrams(hyp, n);
    CharGramCounts ref_grams = char_ngrams(ref, n);
    long long n_hyp = 0;
    for (const auto& [gram, count] : hyp_grams) {
      n_hyp += count;
    }
    long long n_ref = 0;
    for (const auto& [gram, count] : ref_grams) {
      n_ref += count;
    }
    long long n_match = 0;
    for (const auto& [gram, count] : hyp_grams) {
      auto it = ref_grams.find(std::u32string_view(gram));
      if (it != ref_grams.end()) {
        n_match += std::min(count, it->second);
      }
    }
    if (n_hyp > 0 && n_ref > 0) {
      ++effective;
      double prec = static_cast<double>(n_match) / static_cast<double>(n_hyp);
      double rec = static_cast<double>(n_match) / static_cast<double>(n_ref);
      double denom = factor * prec + rec;
      if (denom > 0.0) {
        score += (1.0 + factor) * prec * rec / denom;
      }
    }
  }

  int divisor = cfg.effective_order ? effective : cfg.char_order;
  MetricScore result;
  result.signature = cfg.signature();
  result.value = divisor == 0 ? 0.0 : 100.0 * score / divisor;
  return result;
}

// ------------------------------------------------------------------
// BLEU
// ------------------------------------------------------------------

BleuStats::BleuStats(int max_order)
    : correct(static_cast<std::size_t>(max_order), 0),
      total(static_cast<std::size_t>(max_order), 0) {}

BleuStats& BleuStats::operator+=(const BleuStats& other) {
  if (other.correct.size() != correct.size()) {
    throw Error("cannot combine BLEU statistics of different orders");
  }
  for (std::size_t i = 0; i < correct.size(); ++i) {
    correct[i] += other.correct[i];
    total[i] += other.total[i];
  }
  sys_len += other.sys_len;
  ref_len += other.ref_len;
  return *this;
}

BleuStats bleu_segment_stats(std::string_view hypothesis,
                             const std::vector<std::string>& references,
                             const BleuConfig& cfg) {
  if (references.empty()) {
    throw EmptyReferenceSetError("bleu needs at least one reference");
  }
  if (cfg.max_order < 1) {
    throw Error("bleu max_order must be at least 1");
  }

  std::vector<std::string> hyp_tokens = split_tokens(tokenize_13a(hypothesis));
  std::vector<WordGramCounts> hyp_grams = word_ngrams(hyp_tokens, cfg.max_order);

  std::vector<WordGramCounts> ref_grams(cfg.max_order);
  std::vector<long long> ref_lens;
  ref_lens.reserve(references.size());
  for (const std::string& reference : references) {
    std::vector<std::string> tokens = split_tokens(tokenize_13a(reference));
    ref_lens.push_back(static_cast<long long>(tokens.size()));
    std::vector<WordGramCounts> grams = word_ngrams(tokens, cfg.max_order);
    for (int n = 0; n < cfg.max_order; ++n) {
      for (auto& [gram, count] : grams[n]) {
        auto [it, fresh] = ref_grams[n].try_emplace(gram, count);
        if (!fresh && count > it->second) {
          it->second = count;
        }
      }
    }
  }

  BleuStats stats(cfg.max_order);
  stats.sys_len = static_cast<long long>(hyp_tokens.size());
  stats.ref_len = closest_ref_len(stats.sys_len, ref_lens);
  for (int n = 0; n < cfg.max_order; ++n) {
    for (const auto& [gram, count] : hyp_grams[n]) {
      stats.total[n] += count;
      auto it = ref_grams[n].find(gram);
      if (it != ref_grams[n].end()) {
        stats.correct[n] += std::min(count, it->second);
      }
    }
  }
  return stats;
}

double bleu_from_stats(const BleuStats& stats, const BleuConfig& cfg) {
  double bp = 1.0;
  if (stats.sys_len < stats.ref_len) {
    bp = stats.sys_len > 0
             ? std::exp(1.0 - static_cast<double>(stats.ref_len) /
                                  static_cast<double>(stats.sys_len))
             : 0.0;
  }

  std::vector<double> prec_n;
  prec_n.reserve(stats.total.size());
  double smooth_mteval = 1.0;
  for (std::size_t n = 0; n < stats.total.size(); ++n) {
    if (stats.total[n] == 0) {
      break;
    }
    if (stats.correct[n] == 0) {
      smooth_mteval *= 2.0;
      prec_n.push_back(100.0 /
                       (smooth_mteval * static_cast<double>(stats.total[n])));
    } else {
      prec_n.push_back(100.0 * static_cast<double>(stats.correct[n]) /
                       static_cast<double>(stats.total[n]));
    }
  }

  if (prec_n.empty()) {
    return 0.0;
  }
  int divisor = cfg.effective_order ? static_cast<int>(prec_n.size())
                                    : static_cast<int>(stats.total.size());
  double log_sum = 0.0;
  for (double p : prec_n) {
    log_sum += my_log(p);
  }
  return bp * std::exp(log_sum / static_cast<double>(divisor));
}

MetricScore bleu(std::string_view hypothesis,
                 const std::vector<std::string>& references,
                 const BleuConfig& cfg) {
  MetricScore result;
  result.signature = cfg.signature(references.size());
  result.value = bleu_from_stats(bleu_segment_stats(hypothesis, references, cfg), cfg);
  return result;
}

// ------------------------------------------------------------------
// File scoring
// ------------------------------------------------------------------

Metric parse_metric(std::string_view name) {
  if (name == "chrf") {
    return Metric::kChrf;
  }
  if (name == "bleu") {
    return Metric::kBleu;
  }
  throw FormatError("unknown metric: " + std::string(name));
}

std::string_view metric_name(Metric metric) {
  return metric == Metric::kChrf ? "chrf" : "bleu";
}

std::string ScoreReport::to_json() const {
  std::string out = "{\n";
  out += "  \"metric\": \"";
  out += json_escape(metric_name(metric));
  out += "\",\n";
  out += "  \"config\": \"";
  out += json_escape(signature);
  out += "\",\n";
  out += "  \"corpus\": ";
  out += format_fixed(corpus);
  out += ",\n  \"segments\": [";
  for (std::size_t i = 0; i < segments.size(); ++i) {
    if (i > 0) {
      out += ", ";
    }
    out += format_fixed(segments[i]);
  }
  out += "],\n  \"external\": {}\n}\n";
  return out;
}

ScoreReport score_lines(const std::vector<std::string>& hypotheses,
                        const std::vector<std::string>& references,
                        Metric metric, const ChrfConfig& chrf_cfg,
                        const BleuConfig& bleu_cfg) {
  if (hypotheses.size() != references.size()) {
    throw LineCountMismatchError(
        std::to_string(hypotheses.size()) + " hypothesis lines vs " +
        std::to_string(references.size()) + " reference lines");
  }
  if (hypotheses.empty()) {
    throw EmptyReferenceSetError("nothing to score: zero lines");
  }

  ScoreReport report;
  report.metric = metric;
  report.segments.reserve(hypotheses.size());

  if (metric == Metric::kChrf) {
    report.signature = chrf_cfg.signature();
    double sum = 0.0;
    for (std::size_t i = 0; i < hypotheses.size(); ++i) {
      double value = chrf(hypotheses[i], references[i], chrf_cfg).value;
      report.segments.push_back(value);
      sum += value;
    }
    report.corpus = sum / static_cast<double>(hypotheses.size());
  } else {
    report.signature = bleu_cfg.signature(1);
    BleuStats corpus_stats(bleu_cfg.max_order);
    for (std::size_t i = 0; i < hypotheses.size(); ++i) {
      BleuStats stats =
          bleu_segment_stats(hypotheses[i], {references[i]}, bleu_cfg);
      report.segments.push_back(bleu_from_stats(stats, bleu_cfg));
      corpus_stats += stats;
    }
    report.corpus = bleu_from_stats(corpus_stats, bleu_cfg);
  }
  return report;
}

ScoreReport score_file(const std::string& hyp_path,
                       const std::string& ref_path, Metric metric,
                       const ChrfConfig& chrf_cfg, const BleuConfig& bleu_cfg) {
  return score_lines(read_lines(hyp_path), read_lines(ref_path), metric,
                     chrf_cfg, bleu_cfg);
}

}  // namespace forge::metrics
