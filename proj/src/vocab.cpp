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

#include "forge/vocab.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <unordered_set>

#include "forge/error.hpp"
#include "forge/lang.hpp"
#include "forge/utf8.hpp"

namespace forge::vocab {

namespace {

// Log probability given to pieces the E-step never used; low enough to
// lose against any genuine path, high enough to stay finite.
constexpr double kUnusedLogProb = -100.0;

std::u32string with_marker(std::string_view text) {
  std::u32string out = utf8::decode(text);
  for (char32_t& cp : out)
    if (cp == U' ') cp = kSpaceMarker;
  return out;
}

bool looks_special(std::string_view piece) {
  if (piece == "<unk>") return true;
  if (piece.size() == 7 && piece.starts_with(">>") && piece.ends_with("<<"))
    return is_registered(piece.substr(2, 3));
  return false;
}

std::string escape_piece(std::string_view raw) {
  std::string out;
  out.reserve(raw.size());
  for (char c : raw) {
    switch (c) {
      case '\t': out += "\\t"; break;
      case '\n': out += "\\n"; break;
      case '\\': out += "\\\\"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

std::string unescape_piece(std::string_view escaped) {
  std::string out;
  out.reserve(escaped.size());
  for (std::size_t i = 0; i < escaped.size(); ++i) {
    if (escaped[i] != '\\' || i + 1 == escaped.size()) {
      out.push_back(escaped[i]);
      continue;
    }
    switch (escaped[++i]) {
      case 't': out.push_back('\t'); break;
      case 'n': out.push_back('\n'); break;
      case '\\': out.push_back('\\'); break;
      default:
        throw FormatError("bad escape in vocab file");
    }
  }
  return out;
}

}  // namespace

std::size_t U32Hash::operator()(std::u32string_view s) const {
  std::uint64_t hash = 1469598103934665603ULL;
  for (char32_t cp : s) {
    hash ^= static_cast<std::uint64_t>(cp);
    hash *= 1099511628211ULL;
  }
  return static_cast<std::size_t>(hash);
}

std::size_t vocab_size_for(std::size_t num_languages) {
  if (num_languages == 0)
    throw Error("vocab size needs at least one language");
  return num_languages * 16000;
}

// ------------------------------------------------------------------
// Viterbi segmentation core, shared by tokenize() and the trainer
// ------------------------------------------------------------------

namespace {

struct Segmenter {
  // Piece lookup over code points; ids index `logprobs`.
  const std::unordered_map<std::u32string, std::size_t, U32Hash, U32Eq>* index;
  const double* logprobs;
  std::size_t max_len;
  std::size_t excluded = std::numeric_limits<std::size_t>::max();

  struct Cell {
    double score;
    std::uint32_t pieces;
    std::uint32_t step;  // chosen piece length; 0 marks "unknown char"
  };

  // Backward Viterbi: cell[i] describes the best segmentation of the
  // suffix text[i..).  Ties prefer fewer pieces, then a longer first
  // piece, which makes the forward reading leftmost-longest.
  std::vector<Cell> run(std::u32string_view text) const {
    const std::size_t n = text.size();
    std::vector<Cell> cells(n + 1);
    cells[n] = {0.0, 0, 0};
    for (std::size_t i = n; i-- > 0;) {
      bool found = false;
      Cell best{-std::numeric_limits<double>::infinity(), 0, 0};
      const std::size_t limit = std::min(max_len, n - i);
      for (std::size_t len = 1; len <= limit; ++len) {
        auto it = index->find(text.substr(i, len));
        if (it == index->end() || it->second == excluded) continue;
        const Cell& next = cells[i + len];
        const Cell cand{logprobs[it->second] + next.score, next.pieces + 1,
                        static_cast<std::uint32_t>(len)};
        if (!found || cand.score > best.score ||
            (cand.score == best.score &&
             (cand.pieces < best.pieces ||
              (cand.pieces == best.pieces && cand.step > best.step)))) {
          best = cand;
          found = true;
        }
      }
      if (!found || !index->contains(text.substr(i, 1))) {
        // No single-character piece here: offer the unknown-char path
        // as a candidate of its own.
        const Cell& next = cells[i + 1];
        const Cell cand{kSpecialLogProb + next.score, next.pieces + 1, 0};
        if (!found || cand.score > best.score) best = cand;
        found = true;
      }
      cells[i] = best;
    }
    return cells;
  }
};

}  // namespace

void Vocab::index_entries() {
  index_.clear();
  logprobs_.clear();
  logprobs_.reserve(entries_.size());
  max_match_len_ = 0;
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    logprobs_.push_back(entries_[i].logprob);
    if (entries_[i].special) continue;
    std::u32string key = utf8::decode(entries_[i].piece);
    max_match_len_ = std::max(max_match_len_, key.size());
    index_.emplace(std::move(key), i);
  }
}

std::vector<std::string> Vocab::tokenize(std::string_view text) const {
  std::vector<std::string> pieces;
  if (text.empty()) return pieces;
  const std::u32string body = with_marker(text);

  const Segmenter seg{&index_, logprobs_.data(),
                      std::max<std::size_t>(max_match_len_, 1)};
  const auto cells = seg.run(body);

  std::size_t i = 0;
  while (i < body.size()) {
    const std::size_t len = cells[i].step == 0 ? 1 : cells[i].step;
    pieces.push_back(utf8::encode(std::u32string_view(body).substr(i, len)));
    i += len;
  }
  return pieces;
}

std::string Vocab::detokenize(const std::vector<std::string>& pieces) const {
  std::u32string joined;
  for (const auto& piece : pieces) joined += utf8::decode(piece);
  for (char32_t& cp : joined)
    if (cp == kSpaceMarker) cp = U' ';
  return utf8::encode(joined);
}

bool Vocab::contains(std::string_view piece) const {
  for (const auto& e : entries_)
    if (e.piece == piece) return true;
  return false;
}

// ------------------------------------------------------------------
// Training
// ------------------------------------------------------------------

class Trainer {
 public:
  Trainer(const std::vector<std::string>& corpus, const TrainOptions& opts)
      : opts_(opts) {
    for (const auto& line : corpus) {
      if (line.empty()) continue;
      lines_.push_back(with_marker(line));
    }
    if (lines_.empty())
      throw EmptyCorpusError("vocab training corpus has no non-empty line");
    if (opts_.target_size == 0)
      throw TargetTooSmallError("vocab target size must be positive");
  }

  Vocab run() {
    seed_inventory();
    // Alternate Viterbi re-estimation with loss-ranked pruning until
    // the inventory fits the budget.
    while (true) {
      estimate();
      if (pieces_.size() + specials().size() <= opts_.target_size) break;
      prune();
    }
    return finish();
  }

 private:
  struct Piece {
    std::u32string text;
    double logprob = 0.0;
    std::uint64_t count = 0;
    bool single = false;
  };

  std::vector<std::string> specials() const {
    std::vector<std::string> out{"<unk>"};
    for (const auto& s : opts_.specials)
      if (s != "<unk>") out.push_back(s);
    return out;
  }

  void seed_inventory() {
    const std::size_t n_specials = specials().size();

    // Frequency of every substring up to max_piece_len code points.
    std::unordered_map<std::u32string, std::uint64_t, U32Hash,
                       U32Eq>
        freq;
    for (const auto& line : lines_) {
      const std::size_t n = line.size();
      for (std::size_t i = 0; i < n; ++i) {
        const std::size_t limit = std::min(opts_.max_piece_len, n - i);
        for (std::size_t len = 1; len <= limit; ++len)
          ++freq[std::u32string(line, i, len)];
      }
    }

    std::size_t n_singles = 0;
    for (const auto& [text, count] : freq)
      if (text.size() == 1) ++n_singles;
    if (opts_.target_size < n_specials + n_singles)
      throw TargetTooSmallError(
          "vocab target " + std::to_string(opts_.target_size) +
          " cannot hold " + std::to_string(n_singles) + " characters plus " +
          std::to_string(n_specials) + " control pieces");

    const auto budget = static_cast<std::size_t>(
        opts_.seed_multiplier * static_cast<double>(opts_.target_size));

    // Singles always enter; multi-character candidates fill whatever
    // room the budget leaves, most frequent first.
    std::vector<std::pair<std::u32string, std::uint64_t>> multi;
    for (auto& [text, count] : freq) {
      if (text.size() == 1) {
        pieces_.push_back(Piece{text, 0.0, count, true});
      } else {
        multi.emplace_back(text, count);
      }
    }
    std::sort(pieces_.begin(), pieces_.end(),
              [](const Piece& a, const Piece& b) { return a.text < b.text; });
    std::sort(multi.begin(), multi.end(), [](const auto& a, const auto& b) {
      if (a.second != b.second) return a.second > b.second;
      return a.first < b.first;
    });
    const std::size_t room =
        budget > n_specials + pieces_.size() ? budget - n_specials - pieces_.size()
                                             : 0;
    for (std::size_t i = 0; i < multi.size() && i < room; ++i)
      pieces_.push_back(Piece{std::move(multi[i].first), 0.0, multi[i].second,
                              false});

    // Initial distribution proportional to raw substring frequency.
    double total = 0;
    for (const auto& p : pieces_) total += static_cast<double>(p.count);
    for (auto& p : pieces_)
      p.logprob = std::log(static_cast<double>(p.count) / total);
    rebuild_index();
  }

  void rebuild_index() {
    index_.clear();
    logprobs_.resize(pieces_.size());
    max_len_ = 1;
    for (std::size_t i = 0; i < pieces_.size(); ++i) {
      index_.emplace(pieces_[i].text, i);
      logprobs_[i] = pieces_[i].logprob;
      max_len_ = std::max(max_len_, pieces_[i].text.size());
    }
  }

  // One EM round: Viterbi counts under the current distribution, then
  // re-normalization.  Unused pieces drop to a floor probability and
  // become the first prune victims.
  void estimate() {
    for (auto& p : pieces_) p.count = 0;
    const Segmenter seg{&index_, logprobs_.data(), max_len_};
    std::uint64_t total = 0;
    for (const auto& line : lines_) {
      const auto cells = seg.run(line);
      std::size_t i = 0;
      while (i < line.size()) {
        const std::uint32_t step = cells[i].step;
        if (step == 0) {  // unknown character, counts toward nothing
          ++i;
          continue;
        }
        auto it = index_.find(std::u32string_view(line).substr(i, step));
        ++pieces_[it->second].count;
        ++total;
        i += step;
      }
    }
    for (auto& p : pieces_) {
      p.logprob = p.count == 0
                      ? kUnusedLogProb
                      : std::log(static_cast<double>(p.count) /
                                 static_cast<double>(total));
    }
    rebuild_index();
  }

  void prune() {
    struct Candidate {
      double loss;
      std::size_t index;
    };
    std::vector<Candidate> removable;
    for (std::size_t i = 0; i < pieces_.size(); ++i) {
      if (pieces_[i].single) continue;
      // Cost of losing the piece: how much worse its own text
      // segments without it, weighted by how often it is used.
      Segmenter seg{&index_, logprobs_.data(), max_len_, i};
      const double alt = seg.run(pieces_[i].text)[0].score;
      const double loss = static_cast<double>(pieces_[i].count) *
                          (pieces_[i].logprob - alt);
      removable.push_back(Candidate{loss, i});
    }
    const std::size_t over =
        pieces_.size() + specials().size() - opts_.target_size;
    std::size_t n_drop = std::max<std::size_t>(
        1, static_cast<std::size_t>(opts_.prune_fraction *
                                    static_cast<double>(removable.size())));
    n_drop = std::min({n_drop, over, removable.size()});

    std::sort(removable.begin(), removable.end(),
              [&](const Candidate& a, const Candidate& b) {
                if (a.loss != b.loss) return a.loss < b.loss;
                return pieces_[a.index].text < pieces_[b.index].text;
              });
    std::unordered_set<std::size_t> doomed;
    for (std::size_t i = 0; i < n_drop; ++i) doomed.insert(removable[i].index);

    std::vector<Piece> survivors;
    survivors.reserve(pieces_.size() - doomed.size());
    for (std::size_t i = 0; i < pieces_.size(); ++i)
      if (!doomed.contains(i)) survivors.push_back(std::move(pieces_[i]));
    pieces_ = std::move(survivors);
    rebuild_index();
  }

  Vocab finish() {
    std::sort(pieces_.begin(), pieces_.end(), [](const Piece& a, const Piece& b) {
      if (a.logprob != b.logprob) return a.logprob > b.logprob;
      return a.text < b.text;
    });
    Vocab v;
    for (const auto& s : specials())
      v.entries_.push_back(Entry{s, kSpecialLogProb, true});
    for (const auto& p : pieces_)
      v.entries_.push_back(Entry{utf8::encode(p.text), p.logprob, false});
    v.index_entries();
    return v;
  }

  TrainOptions opts_;
  std::vector<std::u32string> lines_;
  std::vector<Piece> pieces_;
  std::unordered_map<std::u32string, std::size_t, U32Hash, U32Eq>
      index_;
  std::vector<double> logprobs_;
  std::size_t max_len_ = 1;
};

Vocab Vocab::train(const std::vector<std::string>& corpus,
                   const TrainOptions& opts) {
  return Trainer(corpus, opts).run();
}

// ------------------------------------------------------------------
// Serialization
// ------------------------------------------------------------------

std::string Vocab::serialize() const {
  std::string out;
  char buf[64];
  for (const auto& e : entries_) {
    std::snprintf(buf, sizeof(buf), "%.6f", e.logprob);
    out += escape_piece(e.piece);
    out += '\t';
    out += buf;
    out += '\n';
  }
  return out;
}

Vocab Vocab::deserialize(std::string_view data) {
  Vocab v;
  std::size_t pos = 0;
  while (pos < data.size()) {
    std::size_t eol = data.find('\n', pos);
    std::string_view line = data.substr(
        pos, eol == std::string_view::npos ? data.size() - pos : eol - pos);
    pos = eol == std::string_view::npos ? data.size() : eol + 1;
    if (line.empty()) continue;
    const std::size_t tab = line.rfind('\t');
    if (tab == std::string_view::npos)
      throw FormatError("vocab line without tab separator");
    const std::string piece = unescape_piece(line.substr(0, tab));
    double lp;
    try {
      lp = std::stod(std::string(line.substr(tab + 1)));
    } catch (const std::exception&) {
      throw FormatError("bad logprob in vocab file");
    }
    v.entries_.push_back(Entry{piece, lp, looks_special(piece)});
  }
  if (v.entries_.empty()) throw FormatError("vocab file has no entries");
  v.index_entries();
  return v;
}

void Vocab::save(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write vocab: " + path);
  out << serialize();
  if (!out) throw IoError("failed writing vocab: " + path);
}

Vocab Vocab::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open vocab: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return deserialize(buf.str());
}

// ------------------------------------------------------------------
// Analysis
// ------------------------------------------------------------------

double overlap_percent(const Vocab& a, const Vocab& b) {
  if (a.size() == 0 || b.size() == 0)
    throw Error("vocab overlap needs two non-empty vocabularies");
  const Vocab& small = a.size() <= b.size() ? a : b;
  const Vocab& large = a.size() <= b.size() ? b : a;
  std::unordered_set<std::string_view> large_set;
  large_set.reserve(large.size() * 2);
  for (const auto& e : large.entries()) large_set.insert(e.piece);
  std::size_t shared = 0;
  for (const auto& e : small.entries())
    if (large_set.contains(e.piece)) ++shared;
  return 100.0 * static_cast<double>(shared) /
         static_cast<double>(small.size());
}

TokenStats tokenization_stats(const Vocab& vocab,
                              const std::vector<std::string>& lines) {
  if (lines.empty())
    throw EmptyEvalSetError("tokenization stats need at least one line");
  TokenStats stats;
  stats.lines = lines.size();
  std::vector<double> per_line;
  per_line.reserve(lines.size());
  for (const auto& line : lines) {
    const auto n = static_cast<double>(vocab.tokenize(line).size());
    per_line.push_back(n);
    stats.total_pieces += static_cast<std::size_t>(n);
  }
  const double mean = static_cast<double>(stats.total_pieces) /
                      static_cast<double>(stats.lines);
  double var = 0.0;
  for (double n : per_line) var += (n - mean) * (n - mean);
  stats.mean_pieces_per_line = mean;
  stats.std_pieces_per_line =
      std::sqrt(var / static_cast<double>(stats.lines));
  return stats;
}

}  // namespace forge::vocab
