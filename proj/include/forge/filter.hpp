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

#include <bitset>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "forge/lang.hpp"

namespace forge::filter {

// ------------------------------------------------------------------
// Character whitelists
// ------------------------------------------------------------------

// Per-language allowed alphabet: the whole Basic Latin block plus the
// language's accented letters.  Anything else (Cyrillic, emoji, stray
// Latin Extended letters from the wrong language) counts against the
// non-whitelist budget.
class Whitelist {
 public:
  static const Whitelist& for_language(LanguageTag lang);
  // Pooled alphabet across several languages, for pipelines that share
  // one multilingual model and do not want per-side alphabets.
  static Whitelist union_of(const std::vector<LanguageTag>& langs);

  bool contains(char32_t cp) const {
    return cp < kTableSize && allowed_[cp];
  }

  // An empty whitelist admits nothing; use for_language or union_of
  // for the real alphabets.
  Whitelist() = default;

 private:
  // All listed alphabets live below U+0180 (Latin Extended-A).
  static constexpr std::size_t kTableSize = 0x180;
  void add_utf8(std::string_view chars);
  std::bitset<kTableSize> allowed_;
};

// ------------------------------------------------------------------
// Feature extraction
// ------------------------------------------------------------------

struct SideFeatures {
  std::size_t char_len = 0;    // code points, spaces included
  std::size_t word_count = 0;  // whitespace-delimited tokens
  double avg_word_len = 0.0;   // mean word length in code points
  std::size_t max_word_len = 0;
  double digit_ratio = 0.0;    // ASCII digits / non-space characters
  std::size_t non_whitelist = 0;  // non-space characters off the list
};

SideFeatures side_features(std::u32string_view text, const Whitelist& wl);

std::vector<std::u32string_view> split_words(std::u32string_view text);

// A word counts as a number when it contains at least one ASCII
// digit.  Returns the size of the multiset symmetric difference
// between the two sides' number words, compared as exact strings, so
// "007" and "7" mismatch and "3,14" never matches "3.14"; 0 means the
// numbers mirror exactly.
std::size_t mismatched_numbers(
    const std::vector<std::u32string_view>& source_words,
    const std::vector<std::u32string_view>& target_words);

// Symmetric Poisson length compatibility:
//     min( lpmf(b; lambda=a), lpmf(a; lambda=b) )
// with lpmf(k; lambda) = k*ln(lambda) - lambda - ln(k!).  Scores how
// plausible each length is as a draw around the other; the min keeps
// it symmetric.  Throws DegenerateLengthError when a length is zero.
double poisson_length_logprob(std::size_t a, std::size_t b);

// ------------------------------------------------------------------
// Filter configuration and engine
// ------------------------------------------------------------------

// Pair-cleaning thresholds.  Min bounds are strict lower bounds and
// max bounds strict upper bounds, except the two *_max counters that
// read "at most" (non-whitelist, mismatched numbers).  Defaults are
// the production cleaning profile.
struct FilterConfig {
  std::int64_t min_char_len = 5;           // char_len > 5
  std::int64_t max_char_len = 500;         // char_len < 500
  std::int64_t min_words = 1;              // word_count > 1
  std::int64_t max_words = 100;            // word_count < 100
  double max_avg_word_len = 12.0;          // avg_word_len < 12
  std::int64_t max_max_word_len = 28;      // max_word_len < 28
  double max_digit_ratio = 0.15;           // digit_ratio < 0.15
  std::int64_t max_non_whitelist = 0;      // non_whitelist <= 0
  std::int64_t min_levenshtein = 2;        // levenshtein > 2
  double min_poisson_logprob = -15.0;      // poisson > -15.0
  std::int64_t max_mismatched_numbers = 0;  // mismatched <= 0

  // Plain-text "key value" file; '#' comments and blank lines are
  // skipped, keys missing keep their defaults, unknown keys raise
  // FormatError.
  static FilterConfig load(const std::string& path);
  static FilterConfig parse(std::string_view text);
};

enum class Side : std::uint8_t { kSource, kTarget };

enum class Feature : std::uint8_t {
  kEmpty,
  kCharLen,
  kWordCount,
  kAvgWordLen,
  kMaxWordLen,
  kDigitRatio,
  kNonWhitelist,
  kLangId,
  kLevenshtein,
  kPoisson,
  kMismatchedNumbers,
};

std::string_view feature_name(Feature f);

struct Violation {
  Feature feature;
  std::optional<Side> side;  // set for per-side features only

  friend bool operator==(const Violation&, const Violation&) = default;
};

// Everything measured for a pair.  An empty side keeps its
// default-constructed SideFeatures; the pair-level values stay 0 when
// they could not be evaluated (see Verdict).
struct PairFeatures {
  SideFeatures source;
  SideFeatures target;
  std::size_t levenshtein = 0;
  double poisson_logprob = 0.0;
  std::size_t mismatched_numbers = 0;
};

// Complete verdict: every evaluable check runs (no short-circuit), so
// `violations` holds every failing feature, ordered by the feature
// table with source before target.  An empty side contributes one
// "empty" violation in place of its per-side checks; pair-level
// checks run when both sides have text, except the Poisson score,
// which also needs at least one word on each side.
struct Verdict {
  bool keep = true;
  std::vector<Violation> violations;
  PairFeatures features;
};

// Language gate: true if `text` reads as `expected`.  Typically bound
// to langid::Model::gate; any deterministic predicate works.
using LangGate =
    std::function<bool(std::string_view text, LanguageTag expected)>;

struct FilterContext {
  FilterConfig config;
  // No gate means the language-identification feature is skipped.
  LangGate gate;
  // When set, both sides are checked against this pooled whitelist
  // instead of their per-language alphabets.
  const Whitelist* union_whitelist = nullptr;
};

// Evaluates the features in table order (each per-side feature checks
// source before target) and reports the first violation.  Expects
// normalized text; pair-level features run only when both sides pass
// their side-level checks.
Verdict apply_filters(const SentencePair& pair, const FilterContext& ctx);

}  // namespace forge::filter
