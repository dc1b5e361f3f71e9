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

#include "forge/edit_distance.hpp"

#include <cstdint>
#include <unordered_map>
#include <vector>

#include "forge/utf8.hpp"

namespace forge::filter {

namespace {

// One column step of the bit-parallel recurrence for a 64-row block.
// vp/vn are the vertical delta vectors, eq the match mask for the
// current text character, hin the horizontal delta entering the block
// (-1, 0 or +1).  ph_out/mh_out receive the pre-shift horizontal
// vectors so the caller can read the delta at any row of the block.
inline void advance_block(std::uint64_t& vp, std::uint64_t& vn,
                          std::uint64_t eq, int hin, std::uint64_t& ph_out,
                          std::uint64_t& mh_out) {
  const std::uint64_t xv = eq | vn;
  if (hin < 0) eq |= 1u;
  const std::uint64_t xh = (((eq & vp) + vp) ^ vp) | eq;
  std::uint64_t ph = vn | ~(xh | vp);
  std::uint64_t mh = vp & xh;
  ph_out = ph;
  mh_out = mh;
  ph <<= 1;
  mh <<= 1;
  if (hin < 0)
    mh |= 1u;
  else if (hin > 0)
    ph |= 1u;
  vp = mh | ~(xv | ph);
  vn = ph & xv;
}

}  // namespace

std::size_t levenshtein(std::u32string_view a, std::u32string_view b) {
  if (a == b) return 0;
  // The shorter string becomes the pattern (rows); fewer blocks.
  std::u32string_view pat = a.size() <= b.size() ? a : b;
  std::u32string_view txt = a.size() <= b.size() ? b : a;
  const std::size_t m = pat.size();
  if (m == 0) return txt.size();

  const std::size_t blocks = (m + 63) / 64;
  const unsigned last_row = static_cast<unsigned>((m - 1) % 64);

  // Match masks, one row of `blocks` words per distinct pattern char.
  std::unordered_map<char32_t, std::uint32_t> slot_of;
  slot_of.reserve(m * 2);
  std::vector<std::uint64_t> peq;
  peq.reserve((m + 1) * blocks);
  peq.insert(peq.end(), blocks, 0);  // slot 0: chars absent from pattern
  for (std::size_t i = 0; i < m; ++i) {
    auto [it, inserted] =
        slot_of.try_emplace(pat[i], static_cast<std::uint32_t>(slot_of.size() + 1));
    if (inserted) peq.insert(peq.end(), blocks, 0);
    peq[static_cast<std::size_t>(it->second) * blocks + i / 64] |=
        std::uint64_t(1) << (i % 64);
  }

  std::vector<std::uint64_t> vp(blocks, ~std::uint64_t(0));
  std::vector<std::uint64_t> vn(blocks, 0);
  std::size_t score = m;

  for (char32_t c : txt) {
    std::uint32_t slot = 0;
    if (auto it = slot_of.find(c); it != slot_of.end()) slot = it->second;
    const std::uint64_t* eq_row = &peq[static_cast<std::size_t>(slot) * blocks];

    int hin = 1;  // row 0 boundary: D[0][j] - D[0][j-1] = 1
    std::uint64_t ph = 0;
    std::uint64_t mh = 0;
    for (std::size_t b = 0; b < blocks; ++b) {
      advance_block(vp[b], vn[b], eq_row[b], hin, ph, mh);
      hin = static_cast<int>((ph >> 63) & 1) - static_cast<int>((mh >> 63) & 1);
    }
    // Track D[m][j] at the pattern's true last row, which sits inside
    // the final block when m is not a multiple of 64.
    score += (ph >> last_row) & 1;
    score -= (mh >> last_row) & 1;
  }
  return score;
}

std::size_t levenshtein_utf8(std::string_view a, std::string_view b) {
  return levenshtein(utf8::decode(a), utf8::decode(b));
}

}  // namespace forge::filter
