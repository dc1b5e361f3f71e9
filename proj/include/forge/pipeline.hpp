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
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "forge/filter.hpp"
#include "forge/lang.hpp"

namespace forge::pipeline {

// ------------------------------------------------------------------
// Counts
// ------------------------------------------------------------------

struct Counts {
  std::uint64_t read = 0;       // physical input lines
  std::uint64_t kept = 0;       // pairs written
  std::uint64_t dropped = 0;    // pairs rejected by a stage
  std::uint64_t malformed = 0;  // unparseable lines
  // Keys are "source:char_len", "target:digit_ratio", "levenshtein",
  // "dedup", ...; values sum to `dropped`.
  std::map<std::string, std::uint64_t> dropped_by_reason;

  // read == kept + dropped + malformed.
  bool reconciles() const;
};

// Histogram key for a rejecting verdict, from its first violation:
// per-side features carry a "source:" or "target:" prefix, pair-level
// features stand alone.
std::string drop_reason(const filter::Verdict& verdict);

// ------------------------------------------------------------------
// Streaming runner
// ------------------------------------------------------------------

struct StageOptions {
  bool normalize = false;
  bool filter = false;
  bool dedup = false;

  // Used when filter is on.  With threads > 1 the gate is called
  // concurrently and must be thread-safe (langid::Model::gate is).
  filter::FilterContext filter_context;

  // Interpretation of two-column lines; four-column lines carry
  // their own languages either way.
  std::optional<Direction> default_direction;

  // Worker threads for the per-pair stages.  Parsing, dedup and
  // output stay sequential, so results are byte-identical for every
  // value.
  int threads = 1;

  // Pairs per parallel window.
  std::size_t batch_size = 4096;
};

// Reads TSV pairs, applies the enabled stages in order (normalize,
// filter, dedup), and writes surviving pairs in input order.  A pair
// is written with two columns when it matches default_direction and
// with four columns otherwise, so no language information is lost.
// Returns the reconciled counts.
Counts run_pairs(std::istream& in, std::ostream& out,
                 const StageOptions& opts);

// ------------------------------------------------------------------
// Run manifest
// ------------------------------------------------------------------

// One per CLI run: enough to reproduce the run byte-for-byte.
struct RunManifest {
  std::string subcommand;
  std::map<std::string, std::string> config;
  std::vector<std::string> inputs;
  std::vector<std::string> outputs;
  std::optional<Counts> counts;
  double wall_seconds = 0.0;
  std::uint64_t seed = 0;

  std::string to_json() const;
};

}  // namespace forge::pipeline
