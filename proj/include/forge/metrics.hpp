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

#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace forge::metrics {

// ------------------------------------------------------------------
// Tokenization
// ------------------------------------------------------------------

// Whitespace as the reference scorer stack splits it: the Unicode
// White_Space set plus U+001C..U+001F.  This is wider than ASCII
// space, so NBSP and ideographic space also separate tokens.
bool is_split_space(char32_t cp);

// Splits on runs of split-space characters; no empty tokens.
std::vector<std::string> split_tokens(std::string_view text);

// mteval-13a tokenization.  Drops "<skipped>" markers, unwraps
// hyphenated line breaks, unescapes the four HTML entities when an
// '&' is present, isolates ASCII punctuation except for apostrophe,
// hyphen, comma and period, splits period/comma off when not between
// digits, splits a hyphen after a digit, and squeezes whitespace to
// single spaces.
std::string tokenize_13a(std::string_view line);

// ------------------------------------------------------------------
// Configurations
// ------------------------------------------------------------------

struct ChrfConfig {
  int char_order = 6;
  // Word n-grams are not implemented; any value other than 0 is
  // rejected when scoring.
  int word_order = 0;
  double beta = 2.0;
  // Average F over the orders where both sides have n-grams instead
  // of a fixed divisor.
  bool effective_order = true;
  // Drop all whitespace before extracting character n-grams.
  bool remove_whitespace = true;

  // "chrF2|nrefs:1|case:mixed|eff:yes|nc:6|nw:0|space:no|version:..."
  std::string signature() const;
};

struct BleuConfig {
  int max_order = 4;
  // Divide summed log-precisions by the number of non-empty orders
  // instead of max_order.  The default keeps the fixed divisor.
  bool effective_order = false;

  // "BLEU|nrefs:1|case:mixed|eff:no|tok:13a|smooth:exp|version:..."
  std::string signature(std::size_t nrefs = 1) const;
};

struct MetricScore {
  double value = 0.0;
  std::string signature;
};

// ------------------------------------------------------------------
// chrF
// ------------------------------------------------------------------

// Character n-gram F-score in [0, 100].  Case-sensitive.  A
// hypothesis that is empty after whitespace removal scores 0.  A
// reference that is empty after whitespace removal raises
// EmptyReferenceError.
MetricScore chrf(std::string_view hypothesis, std::string_view reference,
                 const ChrfConfig& cfg = {});

// ------------------------------------------------------------------
// BLEU
// ------------------------------------------------------------------

// Sufficient statistics of one or more segments; additive, so corpus
// scores come from summed segment stats.
struct BleuStats {
  std::vector<long long> correct;  // clipped n-gram matches per order
  std::vector<long long> total;    // hypothesis n-grams per order
  long long sys_len = 0;
  long long ref_len = 0;

  explicit BleuStats(int max_order = 4);
  BleuStats& operator+=(const BleuStats& other);
};

// Tokenizes with 13a, counts n-grams up to cfg.max_order, clips
// against the per-n-gram maximum across references, and picks the
// reference length closest to the hypothesis length (ties go to the
// shorter reference).  References must be non-empty as a list;
// raises EmptyReferenceSetError otherwise.
BleuStats bleu_segment_stats(std::string_view hypothesis,
                             const std::vector<std::string>& references,
                             const BleuConfig& cfg = {});

// Exponentially smoothed precision geometric mean times brevity
// penalty, in [0, 100].  Orders after the first with zero hypothesis
// n-grams are ignored; a zero-match order halves a running smoothing
// factor and contributes 100/(factor*total).
double bleu_from_stats(const BleuStats& stats, const BleuConfig& cfg = {});

MetricScore bleu(std::string_view hypothesis,
                 const std::vector<std::string>& references,
                 const BleuConfig& cfg = {});

// ------------------------------------------------------------------
// File scoring
// ------------------------------------------------------------------

enum class Metric { kChrf, kBleu };

// "chrf" or "bleu"; anything else raises FormatError.
Metric parse_metric(std::string_view name);
std::string_view metric_name(Metric metric);

struct ScoreReport {
  Metric metric = Metric::kChrf;
  std::string signature;
  double corpus = 0.0;
  std::vector<double> segments;

  // {"metric": ..., "config": ..., "corpus": ..., "segments": [...],
  //  "external": {}} with 6-decimal numbers.  "external" stays empty
  // here; downstream tooling merges scores from services (for
  // example neural metrics) into it.
  std::string to_json() const;
};

// Scores parallel line vectors.  Corpus chrF is the arithmetic mean
// of segment scores; corpus BLEU is computed from summed statistics.
// Unequal sizes raise LineCountMismatchError, zero lines raise
// EmptyReferenceSetError.
ScoreReport score_lines(const std::vector<std::string>& hypotheses,
                        const std::vector<std::string>& references,
                        Metric metric, const ChrfConfig& chrf_cfg = {},
                        const BleuConfig& bleu_cfg = {});

// Reads both files (one segment per line, trailing CR stripped) and
// scores them with score_lines.  Unreadable files raise IoError.
ScoreReport score_file(const std::string& hyp_path,
                       const std::string& ref_path, Metric metric,
                       const ChrfConfig& chrf_cfg = {},
                       const BleuConfig& bleu_cfg = {});

}  // namespace forge::metrics
