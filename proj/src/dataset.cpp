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

#include "forge/dataset.hpp"

#include <algorithm>
#include <istream>
#include <ostream>

#include "forge/error.hpp"

namespace forge::dataset {

// ------------------------------------------------------------------
// TSV ingestion
// ------------------------------------------------------------------

TsvReader::TsvReader(std::istream& in,
                     std::optional<Direction> default_direction)
    : in_(in), default_direction_(default_direction) {}

void TsvReader::check_format(bool at_eof) {
  if (head_checked_) return;
  if (stats_.read < kFormatCheckAt && !(at_eof && stats_.read >= kFormatCheckMin))
    return;
  head_checked_ = true;
  if (malformed_in_head_ * 2 > stats_.read)
    throw FormatError("input does not look like pair TSV: " +
                      std::to_string(malformed_in_head_) + " of the first " +
                      std::to_string(stats_.read) + " lines are malformed");
}

std::optional<SentencePair> TsvReader::next() {
  std::string line;
  while (std::getline(in_, line)) {
    ++stats_.read;
    if (!line.empty() && line.back() == '\r') line.pop_back();

    std::vector<std::string_view> fields;
    {
      std::string_view rest = line;
      while (true) {
        std::size_t tab = rest.find('\t');
        if (tab == std::string_view::npos) {
          fields.push_back(rest);
          break;
        }
        fields.push_back(rest.substr(0, tab));
        rest.remove_prefix(tab + 1);
      }
    }

    std::optional<SentencePair> pair;
    if (fields.size() == 2 && default_direction_) {
      pair = SentencePair{default_direction_->source, default_direction_->target,
                          std::string(fields[0]), std::string(fields[1])};
    } else if (fields.size() == 4) {
      auto src = LanguageTag::try_parse(fields[0]);
      auto tgt = LanguageTag::try_parse(fields[1]);
      if (src && tgt && *src != *tgt)
        pair = SentencePair{*src, *tgt, std::string(fields[2]),
                            std::string(fields[3])};
    }

    if (!pair) {
      ++stats_.malformed;
      if (!head_checked_) ++malformed_in_head_;
      check_format(false);
      continue;
    }
    check_format(false);
    return pair;
  }
  check_format(true);
  return std::nullopt;
}

void write_tsv(std::ostream& out, const SentencePair& pair, bool four_column) {
  if (four_column)
    out << pair.source_lang.code() << '\t' << pair.target_lang.code() << '\t';
  out << pair.source << '\t' << pair.target << '\n';
}

// ------------------------------------------------------------------
// Deduplication
// ------------------------------------------------------------------

bool Deduper::admit(const SentencePair& pair) {
  if (sources_.contains(pair.source) || targets_.contains(pair.target)) {
    ++dropped_;
    return false;
  }
  sources_.insert(pair.source);
  targets_.insert(pair.target);
  ++kept_;
  return true;
}

std::vector<SentencePair> dedup(const std::vector<SentencePair>& pairs) {
  Deduper state;
  std::vector<SentencePair> kept;
  kept.reserve(pairs.size());
  for (const auto& pair : pairs)
    if (state.admit(pair)) kept.push_back(pair);
  return kept;
}

// ------------------------------------------------------------------
// Directed views and ablation
// ------------------------------------------------------------------

std::vector<DirectedExample> expand_directed(
    const std::vector<SentencePair>& pairs, bool both_directions) {
  std::vector<DirectedExample> out;
  out.reserve(pairs.size() * (both_directions ? 2 : 1));
  for (const auto& pair : pairs) {
    out.push_back(DirectedExample{pair.direction(), pair.source, pair.target});
    if (both_directions)
      out.push_back(
          DirectedExample{pair.direction().reversed(), pair.target, pair.source});
  }
  return out;
}

std::vector<DirectedExample> exclude_directions(
    const std::vector<DirectedExample>& examples,
    const std::vector<Direction>& excluded, ExclusionReport* report) {
  std::vector<DirectedExample> kept;
  kept.reserve(examples.size());
  ExclusionReport local;
  for (const auto& ex : examples) {
    if (std::find(excluded.begin(), excluded.end(), ex.direction) !=
        excluded.end()) {
      ++local.removed[ex.direction.str()];
    } else {
      kept.push_back(ex);
      ++local.kept;
    }
  }
  if (report) *report = std::move(local);
  return kept;
}

// ------------------------------------------------------------------
// Corpus sampling
// ------------------------------------------------------------------

std::uint64_t SplitRng::below(std::uint64_t bound) {
  if (bound == 0) throw Error("SplitRng::below needs a positive bound");
  const std::uint64_t limit = (0 - bound) % bound;  // 2^64 mod bound
  std::uint64_t r;
  do {
    r = next();
  } while (r < limit);
  return r % bound;
}

namespace {

std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t hash = 1469598103934665603ULL;
  for (unsigned char c : s) {
    hash ^= c;
    hash *= 1099511628211ULL;
  }
  return hash;
}

// Floyd-style partial Fisher-Yates: permute only the first `take`
// slots, then restore index order among the chosen ones.
std::vector<std::size_t> choose_indices(std::size_t n, std::size_t take,
                                        SplitRng& rng) {
  std::vector<std::size_t> idx(n);
  for (std::size_t i = 0; i < n; ++i) idx[i] = i;
  for (std::size_t i = 0; i < take; ++i) {
    const std::size_t j =
        i + static_cast<std::size_t>(rng.below(static_cast<std::uint64_t>(n - i)));
    std::swap(idx[i], idx[j]);
  }
  idx.resize(take);
  std::sort(idx.begin(), idx.end());
  return idx;
}

}  // namespace

std::map<LanguageTag, std::vector<std::string>> sample_corpus(
    const std::map<LanguageTag, std::vector<std::string>>& corpora,
    const SamplingSpec& spec, SampleReport* report) {
  if (corpora.empty()) throw EmptyCorpusError("no corpora to sample from");
  for (const auto& [lang, lines] : corpora)
    if (lines.empty())
      throw EmptyCorpusError("corpus for '" + lang.code() + "' is empty");
  const std::size_t k = corpora.size();
  if (spec.total < k)
    throw Error("sample total " + std::to_string(spec.total) +
                " is below the number of languages (" + std::to_string(k) + ")");

  // Target quota per language.
  std::map<LanguageTag, std::size_t> quota;
  if (spec.strategy == SamplingStrategy::kEqual) {
    const std::size_t each = spec.total / k;
    for (const auto& [lang, lines] : corpora) quota[lang] = each;
  } else {
    // Largest-remainder rounding of total * n_i / sum(n).
    std::uint64_t sum = 0;
    for (const auto& [lang, lines] : corpora) sum += lines.size();
    std::uint64_t assigned = 0;
    std::vector<std::pair<std::uint64_t, LanguageTag>> remainders;
    for (const auto& [lang, lines] : corpora) {
      const std::uint64_t num =
          static_cast<std::uint64_t>(spec.total) * lines.size();
      quota[lang] = static_cast<std::size_t>(num / sum);
      assigned += num / sum;
      remainders.emplace_back(num % sum, lang);
    }
    std::sort(remainders.begin(), remainders.end(),
              [](const auto& a, const auto& b) {
                if (a.first != b.first) return a.first > b.first;
                return a.second < b.second;
              });
    for (std::size_t i = 0; assigned < spec.total; ++i, ++assigned)
      ++quota[remainders[i % remainders.size()].second];
  }

  SampleReport local;
  std::map<LanguageTag, std::vector<std::string>> out;
  for (const auto& [lang, lines] : corpora) {
    std::size_t want = quota[lang];
    if (want > lines.size()) {
      local.warnings.push_back("corpus for '" + lang.code() + "' has only " +
                               std::to_string(lines.size()) +
                               " lines, wanted " + std::to_string(want) +
                               "; taking all of them");
      want = lines.size();
    }
    SplitRng rng(spec.seed ^ fnv1a(lang.code()));
    std::vector<std::string> chosen;
    chosen.reserve(want);
    for (std::size_t i : choose_indices(lines.size(), want, rng))
      chosen.push_back(lines[i]);
    local.taken[lang.code()] = chosen.size();
    out[lang] = std::move(chosen);
  }
  if (report) *report = std::move(local);
  return out;
}

}  // namespace forge::dataset
