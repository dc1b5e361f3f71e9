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

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "forge/lang.hpp"

namespace forge::dataset {

// ------------------------------------------------------------------
// TSV ingestion
// ------------------------------------------------------------------

struct ReadStats {
  std::size_t read = 0;       // physical lines consumed
  std::size_t malformed = 0;  // skipped lines
};

// Streams sentence pairs out of UTF-8, LF-terminated TSV.  Two layouts:
//
//   source<TAB>target                       (needs a default direction)
//   src_lang<TAB>tgt_lang<TAB>source<TAB>target
//
// Anything else (wrong arity, unknown codes, identical languages, or a
// two-column line without a default direction) is malformed: counted
// and skipped.  If most of the head of the file is malformed the input
// is presumed not to be TSV at all and FormatError is thrown; isolated
// bad lines in small files only bump the counter.  A trailing \r is
// tolerated so CRLF files degrade gracefully.
class TsvReader {
 public:
  TsvReader(std::istream& in, std::optional<Direction> default_direction);

  // Next well-formed pair, or nullopt at end of input.
  std::optional<SentencePair> next();

  const ReadStats& stats() const { return stats_; }

 private:
  // The malformed-majority check fires at this many lines (or at EOF
  // once at least kFormatCheckMin lines were seen).
  static constexpr std::size_t kFormatCheckAt = 1000;
  static constexpr std::size_t kFormatCheckMin = 100;

  void check_format(bool at_eof);

  std::istream& in_;
  std::optional<Direction> default_direction_;
  ReadStats stats_;
  std::size_t malformed_in_head_ = 0;
  bool head_checked_ = false;
};

void write_tsv(std::ostream& out, const SentencePair& pair, bool four_column);

// ------------------------------------------------------------------
// Deduplication
// ------------------------------------------------------------------

// Either-side exact dedup, first occurrence wins: a pair is dropped
// when its source was already seen as some earlier source, or its
// target as some earlier target.  Sides are tracked separately, so a
// text appearing once as a source and once as a target survives both
// times.  Matching is exact on the bytes; run after normalization.
class Deduper {
 public:
  // True if the pair is new; records both sides.
  bool admit(const SentencePair& pair);

  std::size_t kept() const { return kept_; }
  std::size_t dropped() const { return dropped_; }

 private:
  std::unordered_set<std::string> sources_;
  std::unordered_set<std::string> targets_;
  std::size_t kept_ = 0;
  std::size_t dropped_ = 0;
};

std::vector<SentencePair> dedup(const std::vector<SentencePair>& pairs);

// ------------------------------------------------------------------
// Directed views and ablation
// ------------------------------------------------------------------

struct DirectedExample {
  Direction direction;
  std::string source;
  std::string target;

  friend bool operator==(const DirectedExample&,
                         const DirectedExample&) = default;
};

// Turns aligned pairs into directed training examples.  With
// both_directions each pair yields its forward example immediately
// followed by the reversed one.
std::vector<DirectedExample> expand_directed(
    const std::vector<SentencePair>& pairs, bool both_directions);

struct ExclusionReport {
  std::map<std::string, std::size_t> removed;  // direction string -> count
  std::size_t kept = 0;
};

// Drops every example whose direction appears in `excluded`; order of
// the survivors is untouched.  Supports zero-shot ablations where one
// or more directions are withheld from training.
std::vector<DirectedExample> exclude_directions(
    const std::vector<DirectedExample>& examples,
    const std::vector<Direction>& excluded, ExclusionReport* report = nullptr);

// ------------------------------------------------------------------
// Corpus sampling
// ------------------------------------------------------------------

// Deterministic RNG for sampling: the mt19937_64 stream is fixed by
// the standard, and bounded draws use rejection sampling instead of
// std::uniform_int_distribution (whose mapping is implementation
// defined), so results are identical across compilers.
class SplitRng {
 public:
  explicit SplitRng(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t next() { return gen_(); }

  // Unbiased draw from [0, bound).
  std::uint64_t below(std::uint64_t bound);

 private:
  std::mt19937_64 gen_;
};

enum class SamplingStrategy { kEqual, kProportional };

struct SamplingSpec {
  SamplingStrategy strategy = SamplingStrategy::kEqual;
  std::size_t total = 0;
  std::uint64_t seed = 42;
};

struct SampleReport {
  std::map<std::string, std::size_t> taken;  // language code -> lines
  std::vector<std::string> warnings;
};

// Samples `spec.total` lines across languages without replacement.
// Equal strategy gives each language floor(total/K); proportional
// splits by corpus size with largest-remainder rounding.  A language
// that cannot fill its quota contributes everything it has plus a
// warning.  Per-language draws are seeded from spec.seed xor a hash of
// the language code, so adding a language does not reshuffle the
// others.  Selected lines keep their original corpus order.
std::map<LanguageTag, std::vector<std::string>> sample_corpus(
    const std::map<LanguageTag, std::vector<std::string>>& corpora,
    const SamplingSpec& spec, SampleReport* report = nullptr);

}  // namespace forge::dataset
