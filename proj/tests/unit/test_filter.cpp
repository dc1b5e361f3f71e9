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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "forge/edit_distance.hpp"
#include "forge/error.hpp"
#include "forge/filter.hpp"
#include "forge/lang.hpp"
#include "forge/utf8.hpp"

using namespace forge;
using namespace forge::filter;

namespace {

// Straightforward dynamic-programming edit distance used as an oracle
// for the bit-parallel implementation.
std::size_t dp_levenshtein(std::u32string_view a, std::u32string_view b) {
  std::vector<std::size_t> prev(b.size() + 1);
  std::vector<std::size_t> cur(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) prev[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    cur[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const std::size_t sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

std::u32string random_text(std::mt19937_64& gen, std::size_t len,
                           int alphabet) {
  std::u32string s;
  for (std::size_t k = 0; k < len; ++k) {
    s += static_cast<char32_t>(U'a' + gen() % alphabet);
  }
  return s;
}

SentencePair make_pair(const std::string& src, const std::string& tgt,
                       const std::string& sl = "ces",
                       const std::string& tl = "slv") {
  return SentencePair{LanguageTag::parse(sl), LanguageTag::parse(tl), src,
                      tgt};
}

}  // namespace

TEST_CASE("levenshtein matches the DP oracle across block boundaries") {
  std::mt19937_64 gen(123);
  // Lengths straddle the 64 and 128 code-point machine-word blocks.
  const std::size_t lens[] = {0, 1, 2, 7, 63, 64, 65, 127, 128, 130, 200};
  for (std::size_t la : lens) {
    for (std::size_t lb : lens) {
      const std::u32string a = random_text(gen, la, 4);
      const std::u32string b = random_text(gen, lb, 4);
      CHECK(levenshtein(a, b) == dp_levenshtein(a, b));
    }
  }
  for (int trial = 0; trial < 300; ++trial) {
    const std::u32string a = random_text(gen, gen() % 150, 3);
    const std::u32string b = random_text(gen, gen() % 150, 3);
    const std::size_t got = levenshtein(a, b);
    CHECK(got == dp_levenshtein(a, b));
    CHECK(got == levenshtein(b, a));
  }
}

TEST_CASE("levenshtein hand cases") {
  CHECK(levenshtein(U"", U"") == 0);
  CHECK(levenshtein(U"abc", U"") == 3);
  CHECK(levenshtein(U"kitten", U"sitting") == 3);
  CHECK(levenshtein(U"abcdef gh", U"abcdef xy") == 2);
  CHECK(levenshtein(U"abcdef gh", U"abcdef xyz") == 3);
  CHECK(levenshtein_utf8("řeka", "řeky") == 1);
  CHECK(levenshtein_utf8("máma", "mama") == 1);
}

TEST_CASE("poisson length score matches the high-precision grid") {
  std::ifstream grid(std::string(FORGE_TEST_DATA_DIR) + "/poisson_grid.tsv");
  REQUIRE(grid.good());
  std::string line;
  std::size_t checked = 0;
  while (std::getline(grid, line)) {
    std::istringstream row(line);
    std::size_t a = 0;
    std::size_t b = 0;
    double expected = 0.0;
    row >> a >> b >> expected;
    // Spot check a deterministic subset; the acceptance suite sweeps
    // the whole grid.
    if ((a * 100 + b) % 37 != 0) continue;
    CHECK(std::abs(poisson_length_logprob(a, b) - expected) < 1e-9);
    ++checked;
  }
  CHECK(checked > 200);
}

TEST_CASE("poisson length score is symmetric and peaks on the diagonal") {
  for (std::size_t a = 1; a <= 40; a += 3) {
    for (std::size_t b = 1; b <= 40; b += 5) {
      CHECK(poisson_length_logprob(a, b) ==
            doctest::Approx(poisson_length_logprob(b, a)));
      CHECK(poisson_length_logprob(a, b) <=
            poisson_length_logprob(a, a) + 1e-12);
    }
  }
  CHECK_THROWS_AS(poisson_length_logprob(0, 5), DegenerateLengthError);
  CHECK_THROWS_AS(poisson_length_logprob(5, 0), DegenerateLengthError);
}

TEST_CASE("side_features measures a sentence") {
  const Whitelist& ces = Whitelist::for_language(LanguageTag::parse("ces"));
  const std::u32string text = U"Vidím 12 psů u řeky.";
  const SideFeatures f = side_features(text, ces);
  CHECK(f.char_len == text.size());
  CHECK(f.word_count == 5);
  CHECK(f.max_word_len == 5);  // "Vidím"
  // The ratio denominator is the non-space character count.
  CHECK(f.digit_ratio == doctest::Approx(2.0 / (text.size() - 4)));
  CHECK(f.non_whitelist == 0);
  CHECK(f.avg_word_len ==
        doctest::Approx((5.0 + 2.0 + 3.0 + 1.0 + 5.0) / 5.0));
}

TEST_CASE("digit_ratio excludes spaces from the denominator") {
  const Whitelist& eng = Whitelist::for_language(LanguageTag::parse("eng"));
  const SideFeatures f = side_features(U"abc 123", eng);
  CHECK(f.char_len == 7);
  CHECK(f.digit_ratio == doctest::Approx(3.0 / 6.0));
}

TEST_CASE("side_features counts non-whitelist characters") {
  const Whitelist& eng = Whitelist::for_language(LanguageTag::parse("eng"));
  // Cyrillic, an emoji and a Polish letter all miss the English list.
  const SideFeatures f = side_features(U"soжe\U0001F600 ł", eng);
  CHECK(f.non_whitelist == 3);
  const SideFeatures empty = side_features(U"", eng);
  CHECK(empty.char_len == 0);
  CHECK(empty.word_count == 0);
  CHECK(empty.avg_word_len == 0.0);
  CHECK(empty.digit_ratio == 0.0);
}

TEST_CASE("whitelists admit own alphabet and reject foreign letters") {
  const auto ces = LanguageTag::parse("ces");
  const auto pol = LanguageTag::parse("pol");
  const auto slk = LanguageTag::parse("slk");
  CHECK(Whitelist::for_language(ces).contains(U'ř'));   // r caron
  CHECK_FALSE(Whitelist::for_language(pol).contains(U'ř'));
  CHECK(Whitelist::for_language(pol).contains(U'ł'));   // l stroke
  CHECK(Whitelist::for_language(slk).contains(U'ô'));   // o circumflex
  CHECK_FALSE(Whitelist::for_language(ces).contains(U'ô'));
  // ASCII is universal.
  for (char32_t cp = 0x20; cp < 0x7F; ++cp) {
    CHECK(Whitelist::for_language(ces).contains(cp));
  }
  const Whitelist pooled = Whitelist::union_of({ces, pol});
  CHECK(pooled.contains(U'ř'));
  CHECK(pooled.contains(U'ł'));
  CHECK_FALSE(pooled.contains(U'Ӓ'));
  const Whitelist nothing;
  CHECK_FALSE(nothing.contains(U'a'));
}

TEST_CASE("split_words drops empty segments") {
  const std::u32string text = U"  mám  5 koček ";
  const auto words = split_words(text);
  REQUIRE(words.size() == 3);
  CHECK(words[0] == U"mám");
  CHECK(words[1] == U"5");
  CHECK(words[2] == U"koček");
  CHECK(split_words(U"").empty());
  CHECK(split_words(U"   ").empty());
}

TEST_CASE("mismatched_numbers compares number words as multisets") {
  auto mm = [](std::u32string_view a, std::u32string_view b) {
    const std::u32string sa(a);
    const std::u32string sb(b);
    return mismatched_numbers(split_words(sa), split_words(sb));
  };
  CHECK(mm(U"mám 12 a 7", U"imam 7 in 12") == 0);
  CHECK(mm(U"mám 12", U"imam 13") == 2);
  CHECK(mm(U"mám 12 12", U"imam 12") == 1);
  CHECK(mm(U"agent 007", U"agent 7") == 2);
  CHECK(mm(U"žádná čísla", U"nobenih številk") == 0);
  // A word is a number as soon as it contains a digit, and matching
  // is on the full word string.
  CHECK(mm(U"ve 3.14 km", U"v 3.14 km") == 0);
  CHECK(mm(U"ve 3.14 km", U"v 3,14 km") == 2);
  CHECK(mm(U"roku 1905", U"leta 1905.") == 2);
}

TEST_CASE("FilterConfig parses key value text") {
  const FilterConfig cfg = FilterConfig::parse(
      "# cleaning profile\n"
      "min_char_len 8\n"
      "\n"
      "max_digit_ratio 0.25\n"
      "max_mismatched_numbers 2\n");
  CHECK(cfg.min_char_len == 8);
  CHECK(cfg.max_digit_ratio == doctest::Approx(0.25));
  CHECK(cfg.max_mismatched_numbers == 2);
  // Untouched keys keep defaults.
  CHECK(cfg.max_char_len == 500);
  CHECK(cfg.min_poisson_logprob == doctest::Approx(-15.0));

  CHECK_THROWS_AS(FilterConfig::parse("no_such_key 3\n"), FormatError);
  CHECK_THROWS_AS(FilterConfig::parse("min_char_len\n"), FormatError);
  CHECK_THROWS_AS(FilterConfig::parse("min_char_len abc\n"), FormatError);
}

TEST_CASE("FilterConfig loads from a file") {
  const std::string path = "filter_config_test.txt";
  {
    std::ofstream out(path);
    out << "max_words 50\n";
  }
  const FilterConfig cfg = FilterConfig::load(path);
  CHECK(cfg.max_words == 50);
  CHECK_THROWS_AS(FilterConfig::load("definitely_missing_file.txt"), IoError);
  std::remove(path.c_str());
}

TEST_CASE("apply_filters keeps a clean pair") {
  FilterContext ctx;
  const auto pair =
      make_pair("Vidím velkou řeku za lesem.",
                "Vidim veliko reko za gozdom.");
  const Verdict v = apply_filters(pair, ctx);
  CHECK(v.keep);
  CHECK(v.violations.empty());
  CHECK(v.features.source.word_count == 5);
  CHECK(v.features.target.word_count == 5);
  CHECK(v.features.levenshtein > 2);
  CHECK(v.features.poisson_logprob > -15.0);
  CHECK(v.features.mismatched_numbers == 0);
}

TEST_CASE("apply_filters names the violating feature") {
  FilterContext ctx;
  auto first = [](const Verdict& v) {
    REQUIRE_FALSE(v.keep);
    REQUIRE_FALSE(v.violations.empty());
    return v.violations.front();
  };

  SUBCASE("empty source") {
    const Verdict v = apply_filters(make_pair("", "Vidim reko."), ctx);
    CHECK(first(v) == Violation{Feature::kEmpty, Side::kSource});
  }
  SUBCASE("short target") {
    const Verdict v =
        apply_filters(make_pair("Vidím velkou řeku.", "Reka"), ctx);
    CHECK(first(v) == Violation{Feature::kCharLen, Side::kTarget});
  }
  SUBCASE("source listed before target") {
    const Verdict v = apply_filters(make_pair("Les", "Gozd"), ctx);
    CHECK(first(v) == Violation{Feature::kCharLen, Side::kSource});
    CHECK(v.violations[1] == Violation{Feature::kCharLen, Side::kTarget});
  }
  SUBCASE("single word fails word count") {
    const Verdict v =
        apply_filters(make_pair("Nejneobhospodařovanější",
                                "Vidim veliko reko."),
                      ctx);
    CHECK(first(v) == Violation{Feature::kWordCount, Side::kSource});
  }
  SUBCASE("digit ratio") {
    const Verdict v = apply_filters(
        make_pair("123 456 789 12 u", "Vidim veliko reko za gozdom."), ctx);
    CHECK(first(v) == Violation{Feature::kDigitRatio, Side::kSource});
  }
  SUBCASE("foreign character fails whitelist") {
    const Verdict v = apply_filters(
        make_pair("Vidím velkou жeku za lesem.",
                  "Vidim veliko reko za gozdom."),
        ctx);
    CHECK(first(v) == Violation{Feature::kNonWhitelist, Side::kSource});
  }
  SUBCASE("near-identical sides fail the edit distance floor") {
    const Verdict v = apply_filters(
        make_pair("Vidím velkou reku za lesem.",
                  "Vidim velkou reku za lesem."),
        ctx);
    CHECK(first(v) == Violation{Feature::kLevenshtein, std::nullopt});
  }
  SUBCASE("wild length mismatch fails the Poisson score") {
    const Verdict v = apply_filters(
        make_pair("Les a pole.",
                  "Vidim zelo veliko in zelo siroko reko, ki tece za nasim "
                  "starim gozdom proti morju in potem se naprej do velikih "
                  "mest na severu dezele, kjer se koncno izlije."),
        ctx);
    CHECK(first(v) == Violation{Feature::kPoisson, std::nullopt});
  }
  SUBCASE("different numbers fail") {
    const Verdict v = apply_filters(
        make_pair("Vidím 12 velkych rek za lesem.",
                  "Vidim 13 velikih rek za gozdom."),
        ctx);
    CHECK(first(v) == Violation{Feature::kMismatchedNumbers, std::nullopt});
  }
}

TEST_CASE("apply_filters reports every violation, not just the first") {
  FilterContext ctx;
  // "Reka"/"Reka": both sides too short, single words, and the pair
  // is identical, so the edit distance floor fails as well.
  const Verdict v = apply_filters(make_pair("Reka", "Reka"), ctx);
  CHECK_FALSE(v.keep);
  const std::vector<Violation> expected = {
      {Feature::kCharLen, Side::kSource},
      {Feature::kCharLen, Side::kTarget},
      {Feature::kWordCount, Side::kSource},
      {Feature::kWordCount, Side::kTarget},
      {Feature::kLevenshtein, std::nullopt},
  };
  CHECK(v.violations == expected);
  CHECK(v.features.levenshtein == 0);
  CHECK(v.features.poisson_logprob == doctest::Approx(-1.0));
}

TEST_CASE("apply_filters honors a language gate") {
  FilterContext ctx;
  int calls = 0;
  ctx.gate = [&calls](std::string_view text, LanguageTag expected) {
    ++calls;
    // Pretend everything reads as Czech.
    (void)text;
    return expected.code() == "ces";
  };
  const auto pair = make_pair("Vidím velkou řeku za lesem.",
                              "Vidim veliko reko za gozdom.");
  const Verdict v = apply_filters(pair, ctx);
  CHECK_FALSE(v.keep);
  REQUIRE(v.violations.size() == 1);
  CHECK(v.violations.front() == Violation{Feature::kLangId, Side::kTarget});
  CHECK(calls == 2);

  FilterContext no_gate;
  CHECK(apply_filters(pair, no_gate).keep);
}

TEST_CASE("apply_filters can use a pooled whitelist") {
  FilterContext ctx;
  // Polish letter on the Czech side fails per-language checks.
  const auto pair = make_pair("Vidím wielką rzekę za lasem.",
                              "Vidim veliko reko za gozdom.");
  CHECK_FALSE(apply_filters(pair, ctx).keep);

  const Whitelist pooled = Whitelist::union_of(registered_languages());
  ctx.union_whitelist = &pooled;
  CHECK(apply_filters(pair, ctx).keep);
}

TEST_CASE("feature_name covers the table") {
  CHECK(feature_name(Feature::kEmpty) == "empty");
  CHECK(feature_name(Feature::kCharLen) == "char_len");
  CHECK(feature_name(Feature::kLevenshtein) == "levenshtein");
  CHECK(feature_name(Feature::kPoisson) == "poisson");
  CHECK(feature_name(Feature::kMismatchedNumbers) == "mismatched_numbers");
}
