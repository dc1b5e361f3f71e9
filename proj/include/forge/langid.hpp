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

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "forge/lang.hpp"

namespace forge::langid {

struct TrainOptions {
  int order = 3;       // character n-gram size
  double alpha = 0.1;  // additive smoothing mass
};

// Character n-gram naive Bayes language classifier.  Texts are padded
// with '^' / '$' boundary marks, every n-gram votes with its smoothed
// per-language log probability, and class priors follow the training
// line counts.  Small, fast, and deterministic; on sentence-length
// input over related Slavic languages it separates cleanly.
class Model {
 public:
  Model() = default;

  // corpora: language -> training lines (empty lines are skipped; a
  // corpus with no usable line raises EmptyCorpusError).  alpha <= 0
  // raises InvalidSmoothingError.
  static Model train(const std::map<LanguageTag, std::vector<std::string>>& corpora,
                     const TrainOptions& opts = {});

  static Model load(const std::string& path);
  void save(const std::string& path) const;
  std::string serialize() const;
  static Model deserialize(std::string_view data);

  struct Prediction {
    LanguageTag language;
    double score;  // unnormalized log posterior
  };

  // All modeled languages ranked best-first; exact score ties break
  // toward the smaller language code.  Throws EmptyTextError on "".
  std::vector<Prediction> predict(std::string_view text) const;

  LanguageTag top1(std::string_view text) const;

  // Strict top-1 gate: true iff the best-ranked language equals
  // `expected`.  Throws UnknownLanguageError if `expected` is not part
  // of the model.
  bool gate(std::string_view text, LanguageTag expected) const;

  int order() const { return order_; }
  double alpha() const { return alpha_; }
  const std::vector<LanguageTag>& languages() const { return langs_; }

 private:
  int order_ = 3;
  double alpha_ = 0.1;
  std::vector<LanguageTag> langs_;
  std::vector<double> priors_;  // log priors, parallel to langs_
  std::vector<double> unseen_;  // log prob for unknown n-grams, per lang
  // n-gram -> row offset into table_ (rows of langs_.size() doubles).
  // Orders up to 3 pack code points into one word; larger orders fall
  // back to string keys.
  std::unordered_map<std::uint64_t, std::uint32_t> packed_index_;
  std::unordered_map<std::u32string, std::uint32_t> wide_index_;
  std::vector<double> table_;
};

}  // namespace forge::langid
