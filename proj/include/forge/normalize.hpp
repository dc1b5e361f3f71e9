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

namespace forge {

struct NormalizationReport {
  bool changed = false;        // output differs from input
  bool nfkc_changed = false;   // the NFKC pass alone already changed it
  std::size_t removed_chars = 0;  // deleted controls / zero-width marks
  std::size_t mapped_quotes = 0;  // quote variants folded to " or '
  // Whitespace code points read minus spaces written: everything that
  // was collapsed away or trimmed.  Unification of a lone exotic space
  // to U+0020 keeps the count at zero but still flips `changed`.
  std::size_t collapsed_whitespace = 0;
};

// Canonical text cleanup, applied in a fixed order:
//
//   1. Unicode NFKC
//   2. removal of control and zero-width code points
//   3. quote folding (curly/guillemet variants to ASCII " and ')
//   4. whitespace unification (every whitespace code point to U+0020)
//   5. run collapsing and edge trimming
//
// Control characters that are themselves whitespace (TAB, CR, LF, VT,
// FF, NEL) go through step 4 instead of step 2: deleting them would
// glue neighbouring words together, and the contract is that every
// whitespace character ends up as a plain space.  The output therefore
// never contains control characters, zero-width marks, non-ASCII
// quotes from the folding table, leading/trailing spaces or space
// runs.  Idempotent: normalize(normalize(x)) == normalize(x).
std::string normalize_text(std::string_view text);
std::string normalize_text(std::string_view text, NormalizationReport& report);

// True if the code point has the Unicode White_Space property.
bool is_unicode_whitespace(char32_t cp);

}  // namespace forge
