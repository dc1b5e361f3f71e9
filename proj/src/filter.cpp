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

#include "forge/filter.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "forge/edit_distance.hpp"
#include "forge/error.hpp"
#include "forge/normalize.hpp"
#include "forge/utf8.hpp"

namespace forge::filter {

namespace {

// Accented letters per language (lower + upper), Basic Latin implied.
constexpr std::string_view kCesExtra =
    "áčďéěíňóřšťúůýžÁČĎÉĚÍŇÓŘŠŤÚŮÝŽ";
constexpr std::string_view kEngExtra = "";
constexpr std::string_view kPolExtra = "ąćęłńóśźżĄĆĘŁŃÓŚŹŻ";
constexpr std::string_view kSlkExtra =
    "áäčďéíĺľňóôŕšťúýžÁÄČĎÉÍĹĽŇÓÔŔŠŤÚÝŽ";
constexpr std::string_view kSlvExtra = "čćđšžČĆĐŠŽ";

std::string_view extra_for(LanguageTag lang) {
  switch (lang.index()) {
    case 0: return kCesExtra;
    case 1: return kEngExtra;
    case 2: return kPolExtra;
    case 3: return kSlkExtra;
    case 4: return kSlvExtra;
  }
  return {};
}

inline bool is_ascii_digit(char32_t cp) { return cp >= U'0' && cp <= U'9'; }

}  // namespace

void Whitelist::add_utf8(std::string_view chars) {
  for (char32_t cp : utf8::decode(chars)) {
    if (cp < kTableSize) allowed_.set(cp);
  }
}

const Whitelist& Whitelist::for_language(LanguageTag lang) {
  static const std::array<Whitelist, 5> table = [] {
    std::array<Whitelist, 5> out;
    for (const auto& tag : registered_languages()) {
      Whitelist& wl = out[tag.index()];
      for (std::size_t cp = 0; cp < 0x80; ++cp) wl.allowed_.set(cp);
      wl.add_utf8(extra_for(tag));
    }
    return out;
  }();
  return table[lang.index()];
}

Whitelist Whitelist::union_of(const std::vector<LanguageTag>& langs) {
  Whitelist wl;
  for (std::size_t cp = 0; cp < 0x80; ++cp) wl.allowed_.set(cp);
  for (const auto& lang : langs) wl.add_utf8(extra_for(lang));
  return wl;
}

SideFeatures side_features(std::u32string_view text, const Whitelist& wl) {
  SideFeatures f;
  std::size_t digits = 0;
  std::size_t word_len = 0;
  std::size_t word_chars = 0;
  for (char32_t cp : text) {
    ++f.char_len;
    if (is_unicode_whitespace(cp)) {
      if (word_len > 0) {
        ++f.word_count;
        f.max_word_len = std::max(f.max_word_len, word_len);
        word_chars += word_len;
        word_len = 0;
      }
      continue;
    }
    ++word_len;
    if (is_ascii_digit(cp)) ++digits;
    if (!wl.contains(cp)) ++f.non_whitelist;
  }
  if (word_len > 0) {
    ++f.word_count;
    f.max_word_len = std::max(f.max_word_len, word_len);
    word_chars += word_len;
  }
  // word_chars doubles as the non-space character count.
  if (word_chars > 0)
    f.digit_ratio =
        static_cast<double>(digits) / static_cast<double>(word_chars);
  if (f.word_count > 0)
    f.avg_word_len =
        static_cast<double>(word_chars) / static_cast<double>(f.word_count);
  return f;
}

std::vector<std::u32string_view> split_words(std::u32string_view text) {
  std::vector<std::u32string_view> words;
  std::size_t start = 0;
  bool in_word = false;
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (is_unicode_whitespace(text[i])) {
      if (in_word) words.push_back(text.substr(start, i - start));
      in_word = false;
    } else if (!in_word) {
      start = i;
      in_word = true;
    }
  }
  if (in_word) words.push_back(text.substr(start));
  return words;
}

namespace {

bool is_number_word(std::u32string_view word) {
  for (char32_t cp : word) {
    if (is_ascii_digit(cp)) return true;
  }
  return false;
}

std::vector<std::u32string_view> number_words(
    const std::vector<std::u32string_view>& words) {
  std::vector<std::u32string_view> numbers;
  for (std::u32string_view word : words) {
    if (is_number_word(word)) numbers.push_back(word);
  }
  return numbers;
}

}  // namespace

std::size_t mismatched_numbers(
    const std::vector<std::u32string_view>& source_words,
    const std::vector<std::u32string_view>& target_words) {
  std::vector<std::u32string_view> a = number_words(source_words);
  std::vector<std::u32string_view> b = number_words(target_words);
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  std::size_t mismatched = 0;
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i] == b[j]) {
      ++i;
      ++j;
    } else if (a[i] < b[j]) {
      ++mismatched;
      ++i;
    } else {
      ++mismatched;
      ++j;
    }
  }
  return mismatched + (a.size() - i) + (b.size() - j);
}

double poisson_length_logprob(std::size_t a, std::size_t b) {
  if (a == 0 || b == 0)
    throw DegenerateLengthError("poisson length score needs positive lengths");

  // ln(n) and ln(n!) tables for the common range; sentences rarely
  // exceed a few hundred words.
  static constexpr std::size_t kTable = 512;
  static const std::array<double, kTable>& log_tab = []() -> const auto& {
    static std::array<double, kTable> t{};
    for (std::size_t i = 1; i < kTable; ++i)
      t[i] = std::log(static_cast<double>(i));
    return t;
  }();
  static const std::array<double, kTable>& lfact_tab = []() -> const auto& {
    static std::array<double, kTable> t{};
    for (std::size_t i = 0; i < kTable; ++i)
      t[i] = std::lgamma(static_cast<double>(i) + 1.0);
    return t;
  }();

  auto log_of = [&](std::size_t n) {
    return n < kTable ? log_tab[n] : std::log(static_cast<double>(n));
  };
  auto lfact_of = [&](std::size_t n) {
    return n < kTable ? lfact_tab[n]
                      : std::lgamma(static_cast<double>(n) + 1.0);
  };
  // lpmf(k; lambda) = k ln(lambda) - lambda - ln(k!)
  auto lpmf = [&](std::size_t k, std::size_t lambda) {
    return static_cast<double>(k) * log_of(lambda) -
           static_cast<double>(lambda) - lfact_of(k);
  };
  return std::min(lpmf(b, a), lpmf(a, b));
}

// ------------------------------------------------------------------
// Config
// ------------------------------------------------------------------

namespace {

template <typename T>
void parse_value(std::string_view key, std::string_view value, T& out) {
  const char* first = value.data();
  const char* last = value.data() + value.size();
  auto [ptr, ec] = std::from_chars(first, last, out);
  if (ec != std::errc() || ptr != last)
    throw FormatError("bad value '" + std::string(value) + "' for filter key '" +
                      std::string(key) + "'");
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
    s.remove_suffix(1);
  return s;
}

}  // namespace

FilterConfig FilterConfig::parse(std::string_view text) {
  FilterConfig cfg;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t eol = text.find('\n', pos);
    std::string_view line =
        text.substr(pos, eol == std::string_view::npos ? text.size() - pos
                                                       : eol - pos);
    pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;

    line = trim(line);
    if (line.empty() || line.front() == '#') continue;

    std::size_t sep = line.find_first_of(" \t=");
    if (sep == std::string_view::npos)
      throw FormatError("filter config line without value: '" +
                        std::string(line) + "'");
    std::string_view key = trim(line.substr(0, sep));
    std::string_view value = trim(line.substr(sep + 1));
    if (!value.empty() && value.front() == '=') value = trim(value.substr(1));

    if (key == "min_char_len") parse_value(key, value, cfg.min_char_len);
    else if (key == "max_char_len") parse_value(key, value, cfg.max_char_len);
    else if (key == "min_words") parse_value(key, value, cfg.min_words);
    else if (key == "max_words") parse_value(key, value, cfg.max_words);
    else if (key == "max_avg_word_len") parse_value(key, value, cfg.max_avg_word_len);
    else if (key == "max_max_word_len") parse_value(key, value, cfg.max_max_word_len);
    else if (key == "max_digit_ratio") parse_value(key, value, cfg.max_digit_ratio);
    else if (key == "max_non_whitelist") parse_value(key, value, cfg.max_non_whitelist);
    else if (key == "min_levenshtein") parse_value(key, value, cfg.min_levenshtein);
    else if (key == "min_poisson_logprob") parse_value(key, value, cfg.min_poisson_logprob);
    else if (key == "max_mismatched_numbers") parse_value(key, value, cfg.max_mismatched_numbers);
    else
      throw FormatError("unknown filter config key: '" + std::string(key) + "'");
  }
  return cfg;
}

FilterConfig FilterConfig::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open filter config: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse(buf.str());
}

// ------------------------------------------------------------------
// Engine
// ------------------------------------------------------------------

std::string_view feature_name(Feature f) {
  switch (f) {
    case Feature::kEmpty: return "empty";
    case Feature::kCharLen: return "char_len";
    case Feature::kWordCount: return "word_count";
    case Feature::kAvgWordLen: return "avg_word_len";
    case Feature::kMaxWordLen: return "max_word_len";
    case Feature::kDigitRatio: return "digit_ratio";
    case Feature::kNonWhitelist: return "non_whitelist";
    case Feature::kLangId: return "lang_id";
    case Feature::kLevenshtein: return "levenshtein";
    case Feature::kPoisson: return "poisson";
    case Feature::kMismatchedNumbers: return "mismatched_numbers";
  }
  return "unknown";
}

Verdict apply_filters(const SentencePair& pair, const FilterContext& ctx) {
  const FilterConfig& cfg = ctx.config;
  Verdict verdict;
  auto fail = [&verdict](Feature f, std::optional<Side> side = std::nullopt) {
    verdict.keep = false;
    verdict.violations.push_back(Violation{f, side});
  };

  const std::u32string src = utf8::decode(pair.source);
  const std::u32string tgt = utf8::decode(pair.target);
  const Whitelist& src_wl = ctx.union_whitelist
                                ? *ctx.union_whitelist
                                : Whitelist::for_language(pair.source_lang);
  const Whitelist& tgt_wl = ctx.union_whitelist
                                ? *ctx.union_whitelist
                                : Whitelist::for_language(pair.target_lang);

  const bool src_empty = src.empty();
  const bool tgt_empty = tgt.empty();
  if (src_empty) fail(Feature::kEmpty, Side::kSource);
  if (tgt_empty) fail(Feature::kEmpty, Side::kTarget);

  PairFeatures& f = verdict.features;
  if (!src_empty) f.source = side_features(src, src_wl);
  if (!tgt_empty) f.target = side_features(tgt, tgt_wl);

  struct Row {
    Side side;
    const SideFeatures* features;
    bool present;
  };
  const Row rows[2] = {{Side::kSource, &f.source, !src_empty},
                       {Side::kTarget, &f.target, !tgt_empty}};
  auto per_side = [&](Feature feature, auto&& ok) {
    for (const Row& row : rows) {
      if (row.present && !ok(*row.features)) fail(feature, row.side);
    }
  };

  per_side(Feature::kCharLen, [&](const SideFeatures& s) {
    const auto len = static_cast<std::int64_t>(s.char_len);
    return len > cfg.min_char_len && len < cfg.max_char_len;
  });
  per_side(Feature::kWordCount, [&](const SideFeatures& s) {
    const auto n = static_cast<std::int64_t>(s.word_count);
    return n > cfg.min_words && n < cfg.max_words;
  });
  per_side(Feature::kAvgWordLen, [&](const SideFeatures& s) {
    return s.avg_word_len < cfg.max_avg_word_len;
  });
  per_side(Feature::kMaxWordLen, [&](const SideFeatures& s) {
    return static_cast<std::int64_t>(s.max_word_len) < cfg.max_max_word_len;
  });
  per_side(Feature::kDigitRatio, [&](const SideFeatures& s) {
    return s.digit_ratio < cfg.max_digit_ratio;
  });
  per_side(Feature::kNonWhitelist, [&](const SideFeatures& s) {
    return static_cast<std::int64_t>(s.non_whitelist) <=
           cfg.max_non_whitelist;
  });

  if (ctx.gate) {
    if (!src_empty && !ctx.gate(pair.source, pair.source_lang))
      fail(Feature::kLangId, Side::kSource);
    if (!tgt_empty && !ctx.gate(pair.target, pair.target_lang))
      fail(Feature::kLangId, Side::kTarget);
  }

  if (!src_empty && !tgt_empty) {
    f.levenshtein = levenshtein(src, tgt);
    if (!(static_cast<std::int64_t>(f.levenshtein) > cfg.min_levenshtein))
      fail(Feature::kLevenshtein);

    if (f.source.word_count > 0 && f.target.word_count > 0) {
      f.poisson_logprob =
          poisson_length_logprob(f.source.word_count, f.target.word_count);
      if (!(f.poisson_logprob > cfg.min_poisson_logprob))
        fail(Feature::kPoisson);
    }

    f.mismatched_numbers = mismatched_numbers(split_words(src),
                                              split_words(tgt));
    if (!(static_cast<std::int64_t>(f.mismatched_numbers) <=
          cfg.max_mismatched_numbers))
      fail(Feature::kMismatchedNumbers);
  }

  return verdict;
}

}  // namespace forge::filter
