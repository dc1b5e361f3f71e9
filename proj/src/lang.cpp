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

#include "forge/lang.hpp"

#include <algorithm>
#include <array>

#include "forge/error.hpp"

namespace forge {

namespace {

// Ordered by code; LanguageTag::index() indexes into this.
constexpr std::array<std::string_view, 5> kCodes = {"ces", "eng", "pol",
                                                    "slk", "slv"};

}  // namespace

const std::string& LanguageTag::code() const {
  static const std::array<std::string, kCodes.size()> strings = [] {
    std::array<std::string, kCodes.size()> out;
    for (std::size_t i = 0; i < kCodes.size(); ++i)
      out[i] = std::string(kCodes[i]);
    return out;
  }();
  return strings[index_];
}

LanguageTag LanguageTag::parse(std::string_view code) {
  auto tag = try_parse(code);
  if (!tag)
    throw UnknownLanguageError("unknown language code: '" + std::string(code) +
                               "'");
  return *tag;
}

std::optional<LanguageTag> LanguageTag::try_parse(std::string_view code) {
  for (std::size_t i = 0; i < kCodes.size(); ++i)
    if (kCodes[i] == code) return LanguageTag(static_cast<std::uint8_t>(i));
  return std::nullopt;
}

const std::vector<LanguageTag>& registered_languages() {
  static const std::vector<LanguageTag> all = [] {
    std::vector<LanguageTag> out;
    for (std::size_t i = 0; i < kCodes.size(); ++i)
      out.push_back(LanguageTag(static_cast<std::uint8_t>(i)));
    return out;
  }();
  return all;
}

bool is_registered(std::string_view code) {
  return LanguageTag::try_parse(code).has_value();
}

Direction Direction::make(LanguageTag source, LanguageTag target) {
  if (source == target)
    throw SameLanguageError("direction needs two distinct languages, got '" +
                            source.code() + "-" + target.code() + "'");
  return Direction{source, target};
}

Direction Direction::parse(std::string_view spec) {
  auto dash = spec.find('-');
  if (dash == std::string_view::npos || dash == 0 || dash + 1 >= spec.size())
    throw FormatError("direction must look like 'src-tgt', got '" +
                      std::string(spec) + "'");
  return make(LanguageTag::parse(spec.substr(0, dash)),
              LanguageTag::parse(spec.substr(dash + 1)));
}

std::string Direction::str() const {
  return source.code() + "-" + target.code();
}

}  // namespace forge
