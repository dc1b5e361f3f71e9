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

#include "forge/langid.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "forge/error.hpp"
#include "forge/utf8.hpp"

namespace forge::langid {

namespace {

constexpr char32_t kPadStart = U'^';
constexpr char32_t kPadEnd = U'$';
constexpr std::string_view kMagic = "bitext-forge-langid 1";

// 21 bits cover the full code point range; three fit into a word.
inline std::uint64_t pack(const char32_t* p, int n) {
  std::uint64_t key = 0;
  for (int i = 0; i < n; ++i)
    key |= static_cast<std::uint64_t>(p[i] & 0x1FFFFF) << (21 * i);
  return key;
}

std::u32string padded(std::string_view text, int order) {
  std::u32string body = utf8::decode(text);
  std::u32string out;
  out.reserve(body.size() + 2 * (order - 1));
  out.append(static_cast<std::size_t>(order - 1), kPadStart);
  out += body;
  out.append(static_cast<std::size_t>(order - 1), kPadEnd);
  return out;
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

double parse_double(std::string_view s) {
  try {
    return std::stod(std::string(s));
  } catch (const std::exception&) {
    throw FormatError("bad number in langid model: '" + std::string(s) + "'");
  }
}

std::string escape_ngram(const std::string& raw) {
  std::string out;
  out.reserve(raw.size());
  for (char c : raw) {
    switch (c) {
      case '\t': out += "\\t"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      case '\\': out += "\\\\"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

std::string unescape_ngram(std::string_view escaped) {
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
      case 'r': out.push_back('\r'); break;
      case '\\': out.push_back('\\'); break;
      default:
        throw FormatError("bad escape in langid model");
    }
  }
  return out;
}

std::vector<std::string_view> split_fields(std::string_view line, char sep) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    std::size_t end = line.find(sep, start);
    if (end == std::string_view::npos) {
      fields.push_back(line.substr(start));
      return fields;
    }
    fields.push_back(line.substr(start, end - start));
    start = end + 1;
  }
}

}  // namespace

Model Model::train(const std::map<LanguageTag, std::vector<std::string>>& corpora,
                   const TrainOptions& opts) {
  if (opts.alpha <= 0.0)
    throw InvalidSmoothingError("smoothing alpha must be positive, got " +
                                format_double(opts.alpha));
  if (opts.order < 1)
    throw Error("n-gram order must be at least 1");
  if (corpora.empty()) throw EmptyCorpusError("no training corpora given");

  Model m;
  m.order_ = opts.order;
  m.alpha_ = opts.alpha;

  const std::size_t k = corpora.size();
  std::vector<std::uint64_t> counts;  // rows of k, parallel to the index
  std::vector<std::uint64_t> totals(k, 0);
  std::vector<std::uint64_t> lines(k, 0);

  std::size_t lang_idx = 0;
  for (const auto& [lang, corpus] : corpora) {
    m.langs_.push_back(lang);
    for (const std::string& line : corpus) {
      if (line.empty()) continue;
      ++lines[lang_idx];
      const std::u32string text = padded(line, m.order_);
      const std::size_t windows = text.size() - m.order_ + 1;
      for (std::size_t i = 0; i < windows; ++i) {
        std::uint32_t row;
        if (m.order_ <= 3) {
          auto [it, inserted] = m.packed_index_.try_emplace(
              pack(text.data() + i, m.order_),
              static_cast<std::uint32_t>(counts.size() / k));
          if (inserted) counts.insert(counts.end(), k, 0);
          row = it->second;
        } else {
          auto [it, inserted] = m.wide_index_.try_emplace(
              text.substr(i, m.order_),
              static_cast<std::uint32_t>(counts.size() / k));
          if (inserted) counts.insert(counts.end(), k, 0);
          row = it->second;
        }
        ++counts[static_cast<std::size_t>(row) * k + lang_idx];
        ++totals[lang_idx];
      }
    }
    if (lines[lang_idx] == 0)
      throw EmptyCorpusError("corpus for '" + lang.code() +
                             "' has no non-empty line");
    ++lang_idx;
  }

  const double vocab = static_cast<double>(counts.size() / k);
  std::uint64_t total_lines = 0;
  for (std::uint64_t n : lines) total_lines += n;

  m.priors_.resize(k);
  m.unseen_.resize(k);
  for (std::size_t j = 0; j < k; ++j) {
    m.priors_[j] = std::log(static_cast<double>(lines[j]) /
                            static_cast<double>(total_lines));
    const double denom = static_cast<double>(totals[j]) + m.alpha_ * vocab;
    m.unseen_[j] = std::log(m.alpha_ / denom);
  }

  m.table_.resize(counts.size());
  for (std::size_t r = 0; r < counts.size() / k; ++r) {
    for (std::size_t j = 0; j < k; ++j) {
      const double denom = static_cast<double>(totals[j]) + m.alpha_ * vocab;
      m.table_[r * k + j] = std::log(
          (static_cast<double>(counts[r * k + j]) + m.alpha_) / denom);
    }
  }
  return m;
}

std::vector<Model::Prediction> Model::predict(std::string_view text) const {
  if (text.empty())
    throw EmptyTextError("cannot identify the language of empty text");
  if (langs_.empty()) throw Error("langid model is untrained");

  const std::size_t k = langs_.size();
  std::vector<double> scores(priors_);

  const std::u32string body = padded(text, order_);
  const std::size_t windows = body.size() - order_ + 1;
  for (std::size_t i = 0; i < windows; ++i) {
    const double* row = nullptr;
    if (order_ <= 3) {
      auto it = packed_index_.find(pack(body.data() + i, order_));
      if (it != packed_index_.end())
        row = &table_[static_cast<std::size_t>(it->second) * k];
    } else {
      auto it = wide_index_.find(body.substr(i, order_));
      if (it != wide_index_.end())
        row = &table_[static_cast<std::size_t>(it->second) * k];
    }
    if (row) {
      for (std::size_t j = 0; j < k; ++j) scores[j] += row[j];
    } else {
      for (std::size_t j = 0; j < k; ++j) scores[j] += unseen_[j];
    }
  }

  std::vector<Prediction> ranked;
  ranked.reserve(k);
  for (std::size_t j = 0; j < k; ++j)
    ranked.push_back(Prediction{langs_[j], scores[j]});
  std::stable_sort(ranked.begin(), ranked.end(),
                   [](const Prediction& a, const Prediction& b) {
                     if (a.score != b.score) return a.score > b.score;
                     return a.language < b.language;
                   });
  return ranked;
}

LanguageTag Model::top1(std::string_view text) const {
  return predict(text).front().language;
}

bool Model::gate(std::string_view text, LanguageTag expected) const {
  if (std::find(langs_.begin(), langs_.end(), expected) == langs_.end())
    throw UnknownLanguageError("language '" + expected.code() +
                               "' is not part of this langid model");
  return top1(text) == expected;
}

std::string Model::serialize() const {
  std::string out;
  out += kMagic;
  out += "\norder ";
  out += std::to_string(order_);
  out += "\nalpha ";
  out += format_double(alpha_);
  out += "\nlanguages";
  for (const auto& lang : langs_) {
    out += ' ';
    out += lang.code();
  }
  out += "\npriors";
  for (double p : priors_) {
    out += ' ';
    out += format_double(p);
  }
  out += "\nunseen";
  for (double u : unseen_) {
    out += ' ';
    out += format_double(u);
  }

  const std::size_t k = langs_.size();
  const std::size_t rows = table_.size() / std::max<std::size_t>(k, 1);
  out += "\nngrams ";
  out += std::to_string(rows);
  out += '\n';

  // Emit in deterministic key order so identical training runs produce
  // byte-identical files.
  auto emit_row = [&](const std::string& gram, std::uint32_t row) {
    out += escape_ngram(gram);
    for (std::size_t j = 0; j < k; ++j) {
      out += '\t';
      out += format_double(table_[static_cast<std::size_t>(row) * k + j]);
    }
    out += '\n';
  };
  if (order_ <= 3) {
    std::vector<std::pair<std::uint64_t, std::uint32_t>> keys(
        packed_index_.begin(), packed_index_.end());
    std::sort(keys.begin(), keys.end());
    for (const auto& [key, row] : keys) {
      std::u32string gram;
      for (int i = 0; i < order_; ++i)
        gram.push_back(static_cast<char32_t>((key >> (21 * i)) & 0x1FFFFF));
      emit_row(utf8::encode(gram), row);
    }
  } else {
    std::vector<std::pair<std::u32string, std::uint32_t>> keys(
        wide_index_.begin(), wide_index_.end());
    std::sort(keys.begin(), keys.end());
    for (const auto& [gram, row] : keys) emit_row(utf8::encode(gram), row);
  }
  return out;
}

Model Model::deserialize(std::string_view data) {
  std::vector<std::string_view> all_lines;
  {
    std::size_t start = 0;
    while (start <= data.size()) {
      std::size_t end = data.find('\n', start);
      if (end == std::string_view::npos) {
        if (start < data.size()) all_lines.push_back(data.substr(start));
        break;
      }
      all_lines.push_back(data.substr(start, end - start));
      start = end + 1;
    }
  }
  if (all_lines.size() < 7 || all_lines[0] != kMagic)
    throw FormatError("not a langid model file");

  auto field_after = [](std::string_view line, std::string_view key) {
    if (line.substr(0, key.size()) != key)
      throw FormatError("langid model: expected '" + std::string(key) +
                        "' line");
    return line.size() > key.size() ? line.substr(key.size() + 1)
                                    : std::string_view{};
  };

  Model m;
  m.order_ = static_cast<int>(parse_double(field_after(all_lines[1], "order")));
  m.alpha_ = parse_double(field_after(all_lines[2], "alpha"));

  for (auto code : split_fields(field_after(all_lines[3], "languages"), ' '))
    m.langs_.push_back(LanguageTag::parse(code));
  const std::size_t k = m.langs_.size();

  for (auto p : split_fields(field_after(all_lines[4], "priors"), ' '))
    m.priors_.push_back(parse_double(p));
  for (auto u : split_fields(field_after(all_lines[5], "unseen"), ' '))
    m.unseen_.push_back(parse_double(u));
  if (m.priors_.size() != k || m.unseen_.size() != k)
    throw FormatError("langid model: priors/unseen arity mismatch");

  const auto rows = static_cast<std::size_t>(
      parse_double(field_after(all_lines[6], "ngrams")));
  if (all_lines.size() != 7 + rows)
    throw FormatError("langid model: n-gram row count mismatch");

  m.table_.reserve(rows * k);
  for (std::size_t r = 0; r < rows; ++r) {
    const auto fields = split_fields(all_lines[7 + r], '\t');
    if (fields.size() != k + 1)
      throw FormatError("langid model: bad n-gram row");
    const std::u32string gram = utf8::decode(unescape_ngram(fields[0]));
    if (static_cast<int>(gram.size()) != m.order_)
      throw FormatError("langid model: n-gram of wrong order");
    if (m.order_ <= 3)
      m.packed_index_.emplace(pack(gram.data(), m.order_),
                              static_cast<std::uint32_t>(r));
    else
      m.wide_index_.emplace(gram, static_cast<std::uint32_t>(r));
    for (std::size_t j = 0; j < k; ++j)
      m.table_.push_back(parse_double(fields[1 + j]));
  }
  return m;
}

void Model::save(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write langid model: " + path);
  out << serialize();
  if (!out) throw IoError("failed writing langid model: " + path);
}

Model Model::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open langid model: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return deserialize(buf.str());
}

}  // namespace forge::langid
