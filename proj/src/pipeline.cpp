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

#include "forge/pipeline.hpp"

#include <exception>
#include <istream>
#include <ostream>
#include <thread>
#include <utility>

#include "forge/dataset.hpp"
#include "forge/normalize.hpp"
#include "forge/version.hpp"
#include "json.hpp"

namespace forge::pipeline {

namespace {

// Runs fn(begin, end) over contiguous slices of [0, n) on up to
// `threads` threads and rethrows the first worker exception.
template <typename Fn>
void parallel_slices(std::size_t n, int threads, Fn fn) {
  if (n == 0) {
    return;
  }
  std::size_t workers = threads > 0 ? static_cast<std::size_t>(threads) : 1;
  if (workers > n) {
    workers = n;
  }
  if (workers == 1) {
    fn(std::size_t{0}, n);
    return;
  }

  std::vector<std::exception_ptr> errors(workers);
  std::vector<std::thread> pool;
  pool.reserve(workers - 1);
  const std::size_t chunk = (n + workers - 1) / workers;
  for (std::size_t w = 1; w < workers; ++w) {
    const std::size_t begin = w * chunk;
    const std::size_t end = std::min(n, begin + chunk);
    if (begin >= end) {
      break;
    }
    pool.emplace_back([&, w, begin, end] {
      try {
        fn(begin, end);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  try {
    fn(std::size_t{0}, std::min(n, chunk));
  } catch (...) {
    errors[0] = std::current_exception();
  }
  for (std::thread& t : pool) {
    t.join();
  }
  for (const std::exception_ptr& e : errors) {
    if (e) {
      std::rethrow_exception(e);
    }
  }
}

struct PairOutcome {
  explicit PairOutcome(SentencePair&& p) : pair(std::move(p)) {}

  SentencePair pair;
  bool keep = true;
  std::string reason;
};

}  // namespace

bool Counts::reconciles() const {
  std::uint64_t by_reason = 0;
  for (const auto& [reason, count] : dropped_by_reason) {
    by_reason += count;
  }
  return read == kept + dropped + malformed && by_reason == dropped;
}

std::string drop_reason(const filter::Verdict& verdict) {
  if (verdict.keep || verdict.violations.empty()) {
    return "";
  }
  const filter::Violation& first = verdict.violations.front();
  std::string reason;
  if (first.side.has_value()) {
    reason = *first.side == filter::Side::kSource ? "source:" : "target:";
  }
  reason += feature_name(first.feature);
  return reason;
}

Counts run_pairs(std::istream& in, std::ostream& out,
                 const StageOptions& opts) {
  dataset::TsvReader reader(in, opts.default_direction);
  dataset::Deduper deduper;
  Counts counts;

  std::vector<SentencePair> batch;
  std::vector<PairOutcome> outcomes;
  batch.reserve(opts.batch_size);

  for (;;) {
    batch.clear();
    while (batch.size() < opts.batch_size) {
      std::optional<SentencePair> pair = reader.next();
      if (!pair.has_value()) {
        break;
      }
      batch.push_back(std::move(*pair));
    }
    if (batch.empty()) {
      break;
    }

    outcomes.clear();
    outcomes.reserve(batch.size());
    for (SentencePair& pair : batch) {
      outcomes.emplace_back(std::move(pair));
    }
    parallel_slices(outcomes.size(), opts.threads,
                    [&](std::size_t begin, std::size_t end) {
                      for (std::size_t i = begin; i < end; ++i) {
                        PairOutcome& item = outcomes[i];
                        if (opts.normalize) {
                          item.pair.source =
                              forge::normalize_text(item.pair.source);
                          item.pair.target =
                              forge::normalize_text(item.pair.target);
                        }
                        if (opts.filter) {
                          filter::Verdict verdict = filter::apply_filters(
                              item.pair, opts.filter_context);
                          if (!verdict.keep) {
                            item.keep = false;
                            item.reason = drop_reason(verdict);
                          }
                        }
                      }
                    });

    for (PairOutcome& item : outcomes) {
      if (!item.keep) {
        ++counts.dropped;
        ++counts.dropped_by_reason[item.reason];
        continue;
      }
      if (opts.dedup && !deduper.admit(item.pair)) {
        ++counts.dropped;
        ++counts.dropped_by_reason["dedup"];
        continue;
      }
      const bool two_column = opts.default_direction.has_value() &&
                              item.pair.direction() == *opts.default_direction;
      dataset::write_tsv(out, item.pair, !two_column);
      ++counts.kept;
    }
  }

  counts.read = reader.stats().read;
  counts.malformed = reader.stats().malformed;
  return counts;
}

std::string RunManifest::to_json() const {
  nlohmann::ordered_json j;
  j["manifest_version"] = 1;
  j["tool"] = "bitext-forge";
  j["version"] = kVersion;
  j["subcommand"] = subcommand;
  j["config"] = config;
  j["inputs"] = inputs;
  j["outputs"] = outputs;
  if (counts.has_value()) {
    nlohmann::ordered_json c;
    c["read"] = counts->read;
    c["kept"] = counts->kept;
    c["dropped"] = counts->dropped;
    c["malformed"] = counts->malformed;
    c["dropped_by_reason"] = counts->dropped_by_reason;
    j["counts"] = std::move(c);
  } else {
    j["counts"] = nullptr;
  }
  j["wall_seconds"] = wall_seconds;
  j["seed"] = seed;
  return j.dump(2) + "\n";
}

}  // namespace forge::pipeline
