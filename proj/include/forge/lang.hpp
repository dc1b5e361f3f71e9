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

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace forge {

// A registered ISO 639-3 lowercase code.  Construction goes through
// parse()/try_parse() so an instance always refers to a known language;
// copies are a single byte.
class LanguageTag {
 public:
  // Throws UnknownLanguageError for anything not in the registry.
  static LanguageTag parse(std::string_view code);
  static std::optional<LanguageTag> try_parse(std::string_view code);

  const std::string& code() const;
  std::uint8_t index() const { return index_; }

  friend bool operator==(LanguageTag a, LanguageTag b) = default;
  // Orders by code, which for the registry equals index order.
  friend std::strong_ordering operator<=>(LanguageTag a, LanguageTag b) = default;

 private:
  friend const std::vector<LanguageTag>& registered_languages();
  explicit LanguageTag(std::uint8_t index) : index_(index) {}
  std::uint8_t index_;
};

// All known languages, ordered by code.
const std::vector<LanguageTag>& registered_languages();

bool is_registered(std::string_view code);

// An ordered translation direction.  Source and target always differ;
// parse() rejects "ces-ces" with SameLanguageError and unknown codes
// with UnknownLanguageError.
struct Direction {
  LanguageTag source;
  LanguageTag target;

  static Direction make(LanguageTag source, LanguageTag target);
  // Accepts "src-tgt", e.g. "ces-slv".
  static Direction parse(std::string_view spec);

  Direction reversed() const { return Direction{target, source}; }
  std::string str() const;

  friend bool operator==(const Direction&, const Direction&) = default;
  friend std::strong_ordering operator<=>(const Direction&, const Direction&) = default;
};

// One aligned sentence pair with its language tags.  Texts are raw
// bytes; nothing here enforces normalization, the pipeline stages do.
struct SentencePair {
  LanguageTag source_lang;
  LanguageTag target_lang;
  std::string source;
  std::string target;

  Direction direction() const { return Direction{source_lang, target_lang}; }
};

}  // namespace forge
