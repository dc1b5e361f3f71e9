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
#include <string_view>

namespace forge::filter {

// Levenshtein distance over Unicode scalar values.  No case folding,
// no diacritic folding: "žena" vs "zena" is distance 1.  Bit-parallel
// (Myers / Hyyro), so a ~100 char pair costs a few hundred word ops
// instead of a 10^4-cell DP matrix.
std::size_t levenshtein(std::u32string_view a, std::u32string_view b);

// Convenience overload decoding UTF-8 first.
std::size_t levenshtein_utf8(std::string_view a, std::string_view b);

}  // namespace forge::filter
