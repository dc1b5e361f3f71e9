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

#include <cmath>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "forge/error.hpp"
#include "forge/metrics.hpp"

using namespace forge;
using namespace forge::metrics;

TEST_CASE("13a tokenization separates punctuation") {
  CHECK(tokenize_13a("Hello, world!") == "Hello , world !");
  CHECK(tokenize_13a("End.") == "End .");
  CHECK(tokenize_13a(".start") == ". start");
  CHECK(tokenize_13a("(a) [b] {c}") == "( a ) [ b ] { c }");
  CHECK(tokenize_13a("a:b;c") == "a : b ; c");
}

TEST_CASE("13a tokenization keeps numeric punctuation attached") {
  CHECK(tokenize_13a("3.14 and 1,000") == "3.14 and 1,000");
  CHECK(tokenize_13a("v 3. sloupci") == "v 3 . sloupci");
  CHECK(tokenize_13a("9-5 ok") == "9 - 5 ok");
  CHECK(tokenize_13a("a-b") == "a-b");
}

TEST_CASE("13a tokenization applies the mteval replacements") {
  CHECK(tokenize_13a("one-\ntwo") == "onetwo");
  CHECK(tokenize_13a("a\nb") == "a b");
  CHECK(tokenize_13a("<skipped>stuff") == "stuff");
  CHECK(tokenize_13a("&quot;x&quot;") == "\" x \"");
  CHECK(tokenize_13a("a&amp;b") == "a & b");
  CHECK(tokenize_13a("&lt;tag&gt;") == "< tag >");
  // Entities survive untouched when no ampersand is present.
  CHECK(tokenize_13a("plain quot text") == "plain quot text");
}

TEST_CASE("13a tokenization splits on exotic whitespace") {
  CHECK(tokenize_13a("a b") == "a b");
  CHECK(tokenize_13a("a　b") == "a b");
  CHECK(tokenize_13a("  padded  ") == "padded");
  CHECK(tokenize_13a("") == "");
  // Non-ASCII letters pass through untouched.
  CHECK(tokenize_13a("řeka, moře.") ==
        "řeka , moře .");
}

TEST_CASE("split_tokens uses the full whitespace table") {
  CHECK(split_tokens("a b\tc d e") ==
        std::vector<std::string>{"a", "b", "c", "d", "e"});
  CHECK(split_tokens("   ").empty());
  CHECK(is_split_space(U' '));
  CHECK(is_split_space(U''));
  CHECK_FALSE(is_split_space(U'​'));
}

TEST_CASE("chrf hand-computed value") {
  // hyp "ab": 1-grams {a,b}, 2-grams {ab}; ref "abc" adds c and bc.
  // F1 = 5/7, F2 = 5/9, mean over 2 effective orders, times 100.
  const MetricScore s = chrf("ab", "abc");
  CHECK(s.value == doctest::Approx(100.0 * (5.0 / 7.0 + 5.0 / 9.0) / 2.0)
                       .epsilon(1e-9));
  CHECK(s.value == doctest::Approx(63.4920634921).epsilon(1e-6));
}

TEST_CASE("chrf basics") {
  CHECK(chrf("kratka veta", "kratka veta").value == doctest::Approx(100.0));
  CHECK(chrf("", "neco").value == 0.0);
  CHECK(chrf("AB", "ab").value == 0.0);
  // Whitespace is stripped before counting by default.
  CHECK(chrf("a b c", "abc").value == doctest::Approx(100.0));
  CHECK(chrf("veta prva", "vetaprva").value ==
        doctest::Approx(chrf("vetaprva", "vetaprva").value));
  CHECK_THROWS_AS(chrf("neco", ""), EmptyReferenceError);
  CHECK_THROWS_AS(chrf("neco", "   "), EmptyReferenceError);
}

TEST_CASE("chrf respects configuration") {
  ChrfConfig cfg;
  cfg.char_order = 2;
  const MetricScore s = chrf("ab", "abc", cfg);
  CHECK(s.value == doctest::Approx(100.0 * (5.0 / 7.0 + 5.0 / 9.0) / 2.0));

  cfg.char_order = 0;
  CHECK_THROWS_AS(chrf("ab", "abc", cfg), Error);

  ChrfConfig words;
  words.word_order = 2;
  CHECK_THROWS_AS(chrf("ab", "abc", words), Error);

  ChrfConfig keep_space;
  keep_space.remove_whitespace = false;
  CHECK(chrf("a b c", "abc", keep_space).value <
        chrf("a b c", "abc").value);
}

TEST_CASE("chrf signature names the parameters") {
  CHECK(chrf("ab", "abc").signature ==
        "chrF2|nrefs:1|case:mixed|eff:yes|nc:6|nw:0|space:no|version:0.1.0");
}

TEST_CASE("bleu of identical four-token lines is 100") {
  const MetricScore s = bleu("jedna dva tri styri", {"jedna dva tri styri"});
  CHECK(s.value == doctest::Approx(100.0).epsilon(1e-9));
}

TEST_CASE("bleu of identical three-token lines hits the smoothing ceiling") {
  // Only orders 1..3 have any n-grams; the divisor stays 4, so the
  // score is 100^(3/4).
  const MetricScore s = bleu("jedna dva tri", {"jedna dva tri"});
  CHECK(s.value == doctest::Approx(31.6227766017).epsilon(1e-9));
}

TEST_CASE("bleu smoothing keeps zero-match orders positive") {
  const MetricScore s = bleu("a b c d", {"a b c e"});
  CHECK(s.value > 0.0);
  CHECK(s.value < 100.0);
  // Entirely disjoint hypothesis: every order is smoothed with the
  // doubling denominator, so the score stays positive.
  const MetricScore none = bleu("x y z w", {"a b c d"});
  const double p1 = 100.0 / (2 * 4);
  const double p2 = 100.0 / (4 * 3);
  const double p3 = 100.0 / (8 * 2);
  const double p4 = 100.0 / (16 * 1);
  const double want = std::exp(
      (std::log(p1) + std::log(p2) + std::log(p3) + std::log(p4)) / 4.0);
  CHECK(none.value == doctest::Approx(want).epsilon(1e-9));
}

TEST_CASE("bleu clips counts against the best reference") {
  BleuConfig cfg;
  const BleuStats stats =
      bleu_segment_stats("the the the", {"the cat", "cat the"}, cfg);
  REQUIRE(stats.total.size() == 4);
  CHECK(stats.correct[0] == 1);  // "the" appears at most once per ref
  CHECK(stats.total[0] == 3);
  CHECK(stats.sys_len == 3);
}

TEST_CASE("bleu reference length ties break toward the shorter") {
  BleuConfig cfg;
  const BleuStats stats =
      bleu_segment_stats("a b", {"x", "p q r"}, cfg);
  CHECK(stats.ref_len == 1);
  const BleuStats rev =
      bleu_segment_stats("a b", {"p q r", "x"}, cfg);
  CHECK(rev.ref_len == 1);
}

TEST_CASE("bleu is invariant to reference order") {
  const std::vector<std::string> refs_a = {"velka reka tece", "reka tece"};
  const std::vector<std::string> refs_b = {"reka tece", "velka reka tece"};
  CHECK(bleu("velka reka tece", refs_a).value ==
        doctest::Approx(bleu("velka reka tece", refs_b).value));
}

TEST_CASE("bleu brevity penalty punishes short hypotheses") {
  const MetricScore full =
      bleu("jedna dva tri styri pet", {"jedna dva tri styri pet"});
  const MetricScore cut = bleu("jedna dva tri styri",
                               {"jedna dva tri styri pet"});
  CHECK(full.value == doctest::Approx(100.0));
  CHECK(cut.value < full.value);
  // sys_len 4 vs ref_len 5: bp = exp(1 - 5/4).
  const BleuStats stats = bleu_segment_stats(
      "jedna dva tri styri", {"jedna dva tri styri pet"}, BleuConfig{});
  const double bp = std::exp(1.0 - 5.0 / 4.0);
  CHECK(cut.value == doctest::Approx(100.0 * bp));
}

TEST_CASE("bleu validates inputs") {
  CHECK_THROWS_AS(bleu("x", {}), EmptyReferenceSetError);
  const MetricScore empty_hyp = bleu("", {"a b c"});
  CHECK(empty_hyp.value == 0.0);
}

TEST_CASE("bleu stats accumulate across segments") {
  BleuConfig cfg;
  BleuStats sum;
  sum += bleu_segment_stats("a b c d", {"a b c d"}, cfg);
  sum += bleu_segment_stats("e f g h", {"e f g h"}, cfg);
  CHECK(sum.sys_len == 8);
  CHECK(sum.ref_len == 8);
  CHECK(sum.correct[0] == 8);
  CHECK(bleu_from_stats(sum, cfg).value == doctest::Approx(100.0));
}

TEST_CASE("bleu signature names the parameters") {
  CHECK(bleu("a b c d", {"a b c d"}).signature ==
        "BLEU|nrefs:1|case:mixed|eff:no|tok:13a|smooth:exp|version:0.1.0");
}

TEST_CASE("metric names parse") {
  CHECK(parse_metric("chrf") == Metric::kChrf);
  CHECK(parse_metric("bleu") == Metric::kBleu);
  CHECK_THROWS_AS(parse_metric("ter"), FormatError);
  CHECK(metric_name(Metric::kChrf) == "chrf");
  CHECK(metric_name(Metric::kBleu) == "bleu");
}

TEST_CASE("score_lines aggregates chrf as a macro average") {
  const std::vector<std::string> hyps = {"ab", "kratka veta"};
  const std::vector<std::string> refs = {"abc", "kratka veta"};
  const ScoreReport report = score_lines(hyps, refs, Metric::kChrf);
  REQUIRE(report.segments.size() == 2);
  const double manual =
      (chrf("ab", "abc").value + chrf("kratka veta", "kratka veta").value) /
      2.0;
  CHECK(report.corpus == doctest::Approx(manual));
  CHECK(report.segments[0] == doctest::Approx(chrf("ab", "abc").value));
}

TEST_CASE("score_lines aggregates bleu over pooled statistics") {
  const std::vector<std::string> hyps = {"a b c d", "x y z w"};
  const std::vector<std::string> refs = {"a b c d", "a b c d"};
  const ScoreReport report = score_lines(hyps, refs, Metric::kBleu);
  REQUIRE(report.segments.size() == 2);

  BleuConfig cfg;
  BleuStats pooled;
  pooled += bleu_segment_stats("a b c d", {"a b c d"}, cfg);
  pooled += bleu_segment_stats("x y z w", {"a b c d"}, cfg);
  CHECK(report.corpus == doctest::Approx(bleu_from_stats(pooled, cfg).value));
  // Micro pooling is not the mean of the segment scores here.
  const double macro = (report.segments[0] + report.segments[1]) / 2.0;
  CHECK(report.corpus != doctest::Approx(macro));
}

TEST_CASE("score_lines validates shapes") {
  CHECK_THROWS_AS(score_lines({"a"}, {"x", "y"}, Metric::kChrf),
                  LineCountMismatchError);
  CHECK_THROWS_AS(score_lines({}, {}, Metric::kBleu),
                  EmptyReferenceSetError);
}

TEST_CASE("score report serializes to well-formed JSON") {
  const ScoreReport report =
      score_lines({"ab", "cd"}, {"abc", "cd"}, Metric::kChrf);
  const auto parsed = nlohmann::json::parse(report.to_json());
  CHECK(parsed.at("metric") == "chrf");
  CHECK(parsed.at("config").get<std::string>().find("chrF2") == 0);
  CHECK(parsed.at("corpus").is_number());
  REQUIRE(parsed.at("segments").is_array());
  CHECK(parsed.at("segments").size() == 2);
  CHECK(parsed.at("segments")[0].get<double>() ==
        doctest::Approx(report.segments[0]));
}

TEST_CASE("scores match the pinned reference fixture") {
  std::ifstream fixture(std::string(FORGE_TEST_DATA_DIR) +
                        "/metric_pairs.tsv");
  REQUIRE(fixture.good());
  std::string line;
  std::size_t row = 0;
  double worst_chrf = 0.0;
  double worst_bleu = 0.0;
  while (std::getline(fixture, line)) {
    ++row;
    // Unit runs spot-check a slice; the acceptance suite covers all.
    if (row % 5 != 0) continue;
    const std::size_t t1 = line.find('\t');
    const std::size_t t2 = line.find('\t', t1 + 1);
    const std::size_t t3 = line.find('\t', t2 + 1);
    REQUIRE(t3 != std::string::npos);
    const std::string hyp = line.substr(0, t1);
    const std::string ref = line.substr(t1 + 1, t2 - t1 - 1);
    const double want_chrf = std::stod(line.substr(t2 + 1, t3 - t2 - 1));
    const double want_bleu = std::stod(line.substr(t3 + 1));
    worst_chrf =
        std::max(worst_chrf, std::abs(chrf(hyp, ref).value - want_chrf));
    worst_bleu =
        std::max(worst_bleu, std::abs(bleu(hyp, {ref}).value - want_bleu));
  }
  CHECK(row == 100);
  CHECK(worst_chrf < 1e-4);
  CHECK(worst_bleu < 1e-4);
}
