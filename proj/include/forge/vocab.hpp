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

#include <cstddef>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace forge::vocab {

// Spaces become this marker inside pieces, so detokenization is a
// plain string substitution.
inline constexpr char32_t kSpaceMarker = U'▁';

// Log probability assigned to control pieces (<unk>, language tokens);
// they are never matched against text.
inline constexpr double kSpecialLogProb = -100.0;

// Subword budget scales with the number of languages sharing the
// model: 16k pieces per language.
std::size_t vocab_size_for(std::size_t num_languages);

struct TrainOptions {
  std::size_t target_size = 0;
  // Control pieces placed at the top of the vocabulary.  "<unk>" is
  // always included first; list language tokens (">>ces<<") here for
  // multilingual models.
  std::vector<std::string> specials;
  double seed_multiplier = 4.0;   // seed inventory cap, in target sizes
  double prune_fraction = 0.2;    // share of prunable pieces cut per round
  std::size_t max_piece_len = 8;  // in code points, marker included
};

struct Entry {
  std::string piece;
  double logprob;
  bool special;
};

// Transparent hashing so code-point views probe piece tables without
// allocating.
struct U32Hash {
  using is_transparent = void;
  std::size_t operator()(std::u32string_view s) const;
};
struct U32Eq {
  using is_transparent = void;
  bool operator()(std::u32string_view a, std::u32string_view b) const {
    return a == b;
  }
};

// Unigram language model subword vocabulary.
//
// Training seeds an inventory with every single character plus the
// most frequent substrings, then alternates Viterbi re-estimation with
// loss-based pruning until the target size is reached.  Tokenization
// is the Viterbi segmentation under the piece log probabilities, with
// ties broken toward fewer pieces and then longer leading pieces.
// Characters outside the vocabulary come through as single unknown
// pieces carrying their own text, so detokenize(tokenize(x)) == x for
// any x free of the space marker itself.
class Vocab {
 public:
  Vocab() = default;

  // corpus: normalized text lines.  Throws EmptyCorpusError on an
  // empty/blank corpus and TargetTooSmallError when target_size cannot
  // even hold the alphabet plus control pieces.
  static Vocab train(const std::vector<std::string>& corpus,
                     const TrainOptions& opts);

  // Two-column "piece<TAB>logprob" file, control pieces first, then
  // descending logprob.  Tabs, newlines and backslashes inside pieces
  // are escaped.
  static Vocab load(const std::string& path);
  void save(const std::string& path) const;
  std::string serialize() const;
  static Vocab deserialize(std::string_view data);

  std::vector<std::string> tokenize(std::string_view text) const;
  std::string detokenize(const std::vector<std::string>& pieces) const;

  std::size_t size() const { return entries_.size(); }
  bool contains(std::string_view piece) const;
  const std::vector<Entry>& entries() const { return entries_; }

 private:
  friend class Trainer;

  void index_entries();

  std::vector<Entry> entries_;  // file order
  // Matchable pieces only (specials excluded), keyed by code points;
  // values index entries_.  logprobs_ mirrors entries_ for the hot path.
  std::unordered_map<std::u32string, std::size_t, U32Hash, U32Eq> index_;
  std::vector<double> logprobs_;
  std::size_t max_match_len_ = 0;
};

// |A intersect B| / min(|A|, |B|) * 100, comparing piece strings.
double overlap_percent(const Vocab& a, const Vocab& b);

struct TokenStats {
  std::size_t lines = 0;
  std::size_t total_pieces = 0;
  double mean_pieces_per_line = 0.0;
  double std_pieces_per_line = 0.0;  // population standard deviation
};

// Throws EmptyEvalSetError when `lines` is empty.
TokenStats tokenization_stats(const Vocab& vocab,
                              const std::vector<std::string>& lines);

}  // namespace forge::vocab
