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

#include "forge/normalize.hpp"

#include <unicode/bytestream.h>
#include <unicode/errorcode.h>
#include <unicode/normalizer2.h>
#include <unicode/stringpiece.h>

#include "forge/error.hpp"
#include "forge/utf8.hpp"

namespace forge {

namespace {

const icu::Normalizer2& nfkc() {
  static const icu::Normalizer2* instance = [] {
    UErrorCode status = U_ZERO_ERROR;
    const icu::Normalizer2* n = icu::Normalizer2::getNFKCInstance(status);
    if (U_FAILURE(status) || n == nullptr)
      throw Error("ICU NFKC normalizer unavailable");
    return n;
  }();
  return *instance;
}

std::string nfkc_normalize(std::string_view text) {
  UErrorCode status = U_ZERO_ERROR;
  std::string out;
  out.reserve(text.size());
  icu::StringByteSink<std::string> sink(&out);
  nfkc().normalizeUTF8(
      0, icu::StringPiece(text.data(), static_cast<int32_t>(text.size())),
      sink, nullptr, status);
  if (U_FAILURE(status))
    throw Error(std::string("NFKC normalization failed: ") +
                u_errorName(status));
  return out;
}

// Cc category is frozen in Unicode: C0, DEL and C1.
inline bool is_control(char32_t cp) {
  return cp <= 0x1F || (cp >= 0x7F && cp <= 0x9F);
}

inline bool is_zero_width(char32_t cp) {
  return (cp >= 0x200B && cp <= 0x200D) || cp == 0xFEFF;
}

// Folded to '"'.
inline bool is_double_quote_variant(char32_t cp) {
  return cp == 0x201C || cp == 0x201D || cp == 0x201E || cp == 0x00AB ||
         cp == 0x00BB;
}

// Folded to '\''.
inline bool is_single_quote_variant(char32_t cp) {
  return cp == 0x2018 || cp == 0x2019 || cp == 0x201A || cp == 0x2039 ||
         cp == 0x203A;
}

}  // namespace

bool is_unicode_whitespace(char32_t cp) {
  switch (cp) {
    case 0x09:
    case 0x0A:
    case 0x0B:
    case 0x0C:
    case 0x0D:
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

std::string normalize_text(std::string_view text) {
  NormalizationReport report;
  return normalize_text(text, report);
}

std::string normalize_text(std::string_view text, NormalizationReport& report) {
  report = NormalizationReport{};
  const std::string canon = nfkc_normalize(text);
  report.nfkc_changed = (canon != text);

  std::string out;
  out.reserve(canon.size());

  // Whitespace handling is folded into one pass: a pending space is
  // emitted only when a non-whitespace character follows it, which
  // collapses runs and trims both edges in the same motion.  Deleted
  // code points (controls, zero-width) do not break a whitespace run,
  // exactly as if they had been removed in a separate earlier pass.
  bool pending_ws = false;
  bool emitted_any = false;
  std::size_t ws_in = 0;      // whitespace code points seen
  std::size_t spaces_out = 0;  // spaces emitted

  std::size_t i = 0;
  while (i < canon.size()) {
    const char32_t cp = utf8::decode_one(canon, i);

    if (is_unicode_whitespace(cp)) {
      pending_ws = true;
      ++ws_in;
      continue;
    }
    if (is_zero_width(cp) || is_control(cp)) {
      ++report.removed_chars;
      continue;
    }

    if (pending_ws && emitted_any) {
      out.push_back(' ');
      ++spaces_out;
    }
    pending_ws = false;

    if (is_double_quote_variant(cp)) {
      out.push_back('"');
      ++report.mapped_quotes;
    } else if (is_single_quote_variant(cp)) {
      out.push_back('\'');
      ++report.mapped_quotes;
    } else {
      utf8::encode_one(cp, out);
    }
    emitted_any = true;
  }

  // Whitespace that did not make it out as a space was collapsed,
  // trimmed, or unified-and-collapsed; the delta captures all of it.
  report.collapsed_whitespace = ws_in - spaces_out;
  report.changed = (out != text);
  return out;
}

}  // namespace forge
