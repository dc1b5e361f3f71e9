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

#include "forge/pivot.hpp"

#include <fstream>
#include <sstream>
#include <utility>

#include "forge/error.hpp"
#include "forge/normalize.hpp"
#include "httplib.h"
#include "json.hpp"

namespace forge::pivot {

std::string make_lang_token(LanguageTag lang) {
  std::string token = ">>";
  token += lang.code();
  token += "<<";
  return token;
}

std::string prepend_lang_token(std::string_view text, LanguageTag lang) {
  std::string out = make_lang_token(lang);
  out += ' ';
  out += text;
  return out;
}

std::pair<std::optional<LanguageTag>, std::string> strip_lang_token(
    std::string_view text) {
  // ">>" + three-letter code + "<<" is 7 bytes.
  if (text.size() < 7 || text.substr(0, 2) != ">>" ||
      text.substr(5, 2) != "<<") {
    return {std::nullopt, std::string(text)};
  }
  auto lang = LanguageTag::try_parse(text.substr(2, 3));
  if (!lang.has_value()) {
    return {std::nullopt, std::string(text)};
  }
  std::string_view rest = text.substr(7);
  if (!rest.empty() && rest.front() == ' ') {
    rest.remove_prefix(1);
  }
  return {*lang, std::string(rest)};
}

std::string_view backend_role_name(BackendRole role) {
  switch (role) {
    case BackendRole::kMany2One:
      return "many2one";
    case BackendRole::kOne2Many:
      return "one2many";
    case BackendRole::kMany2Many:
      return "many2many";
  }
  return "unknown";
}

RoutePlan plan_route(LanguageTag source, LanguageTag target,
                     LanguageTag bridge) {
  if (source == target) {
    throw SameLanguageError("route " + std::string(source.code()) + "-" +
                            std::string(target.code()));
  }
  RoutePlan plan;
  if (target == bridge) {
    plan.hops.push_back({BackendRole::kMany2One, bridge});
  } else if (source == bridge) {
    plan.hops.push_back({BackendRole::kOne2Many, target});
  } else {
    plan.hops.push_back({BackendRole::kMany2One, bridge});
    plan.hops.push_back({BackendRole::kOne2Many, target});
  }
  return plan;
}

RoutePlan plan_direct(LanguageTag source, LanguageTag target) {
  if (source == target) {
    throw SameLanguageError("route " + std::string(source.code()) + "-" +
                            std::string(target.code()));
  }
  RoutePlan plan;
  plan.hops.push_back({BackendRole::kMany2Many, target});
  return plan;
}

// ------------------------------------------------------------------
// MockBackend
// ------------------------------------------------------------------

MockBackend::MockBackend(std::string name,
                         std::map<LanguageTag, Dictionary> by_target,
                         bool echo_token)
    : name_(std::move(name)),
      by_target_(std::move(by_target)),
      echo_token_(echo_token) {}

MockBackend::Dictionary MockBackend::load_dictionary(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IoError("cannot open dictionary: " + path);
  }
  Dictionary dict;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') {
      line.pop_back();
    }
    if (line.empty()) {
      continue;
    }
    auto tab = line.find('\t');
    if (tab == std::string::npos) {
      throw FormatError("dictionary line without tab: " + line);
    }
    dict[line.substr(0, tab)] = line.substr(tab + 1);
  }
  return dict;
}

std::vector<std::string> MockBackend::translate(
    const std::vector<std::string>& batch, LanguageTag target) {
  auto it = by_target_.find(target);
  if (it == by_target_.end()) {
    throw UnsupportedTargetError(name_ + " cannot produce " +
                                 std::string(target.code()));
  }
  const Dictionary& dict = it->second;
  std::vector<std::string> out;
  out.reserve(batch.size());
  for (const std::string& text : batch) {
    auto [token_lang, stripped] = strip_lang_token(text);
    (void)token_lang;
    auto hit = dict.find(stripped);
    std::string translated = hit != dict.end() ? hit->second : stripped;
    if (echo_token_) {
      translated = prepend_lang_token(translated, target);
    }
    out.push_back(std::move(translated));
  }
  return out;
}

bool MockBackend::supports_target(LanguageTag target) const {
  return by_target_.contains(target);
}

std::string MockBackend::name() const { return name_; }

// ------------------------------------------------------------------
// HttpBackend
// ------------------------------------------------------------------

HttpBackend::HttpBackend(std::string base_url,
                         std::vector<LanguageTag> targets,
                         double timeout_seconds, int retries)
    : base_url_(std::move(base_url)),
      targets_(std::move(targets)),
      timeout_seconds_(timeout_seconds),
      retries_(retries) {}

std::vector<std::string> HttpBackend::translate(
    const std::vector<std::string>& batch, LanguageTag target) {
  if (!supports_target(target)) {
    throw UnsupportedTargetError(name() + " cannot produce " +
                                 std::string(target.code()));
  }
  nlohmann::json request;
  request["target_lang"] = std::string(target.code());
  request["texts"] = batch;
  const std::string body = request.dump();

  std::string last_error = "no attempt made";
  for (int attempt = 0; attempt <= retries_; ++attempt) {
    httplib::Client client(base_url_);
    client.set_connection_timeout(std::chrono::milliseconds(
        static_cast<long long>(timeout_seconds_ * 1000.0)));
    client.set_read_timeout(std::chrono::milliseconds(
        static_cast<long long>(timeout_seconds_ * 1000.0)));
    auto res = client.Post("/translate", body, "application/json");
    if (!res) {
      last_error = "connection failed: " + httplib::to_string(res.error());
      continue;
    }
    if (res->status != 200) {
      last_error = "status " + std::to_string(res->status);
      continue;
    }
    nlohmann::json reply = nlohmann::json::parse(res->body, nullptr, false);
    if (reply.is_discarded() || !reply.contains("translations") ||
        !reply["translations"].is_array()) {
      last_error = "malformed reply body";
      continue;
    }
    std::vector<std::string> out;
    out.reserve(reply["translations"].size());
    for (const auto& item : reply["translations"]) {
      if (!item.is_string()) {
        throw FormatError(name() + " returned a non-string translation");
      }
      out.push_back(item.get<std::string>());
    }
    if (out.size() != batch.size()) {
      throw LengthMismatchError(name() + " returned " +
                                std::to_string(out.size()) + " texts for " +
                                std::to_string(batch.size()) + " inputs");
    }
    return out;
  }
  throw BackendUnavailableError(name() + ": " + last_error + " after " +
                                std::to_string(retries_ + 1) + " attempts");
}

bool HttpBackend::supports_target(LanguageTag target) const {
  for (LanguageTag t : targets_) {
    if (t == target) {
      return true;
    }
  }
  return false;
}

std::string HttpBackend::name() const { return "http:" + base_url_; }

// ------------------------------------------------------------------
// translate_batch
// ------------------------------------------------------------------

std::vector<std::string> translate_batch(
    const RoutePlan& plan,
    const std::map<BackendRole, TranslationBackend*>& backends,
    const std::vector<std::string>& texts, const RouteOptions& opts) {
  std::vector<std::string> current = texts;
  if (opts.trace != nullptr) {
    opts.trace->clear();
  }
  for (std::size_t hop_index = 0; hop_index < plan.hops.size(); ++hop_index) {
    const Hop& hop = plan.hops[hop_index];
    auto it = backends.find(hop.backend);
    if (it == backends.end() || it->second == nullptr) {
      throw BackendUnavailableError(
          std::string("no backend registered for role ") +
          std::string(backend_role_name(hop.backend)));
    }
    TranslationBackend& backend = *it->second;
    if (!backend.supports_target(hop.target)) {
      throw UnsupportedTargetError(backend.name() + " cannot produce " +
                                   std::string(hop.target.code()));
    }

    std::vector<std::string> batch;
    batch.reserve(current.size());
    for (const std::string& text : current) {
      batch.push_back(prepend_lang_token(text, hop.target));
    }

    std::vector<std::string> translated = backend.translate(batch, hop.target);
    if (translated.size() != batch.size()) {
      throw LengthMismatchError(backend.name() + " returned " +
                                std::to_string(translated.size()) +
                                " texts for " + std::to_string(batch.size()) +
                                " inputs");
    }

    const bool more_hops = hop_index + 1 < plan.hops.size();
    for (std::string& text : translated) {
      // Some models repeat the control token; drop it so it cannot
      // leak into the next hop or the final output.
      auto [echoed, stripped] = strip_lang_token(text);
      (void)echoed;
      text = std::move(stripped);
      if (more_hops && opts.normalize_between_hops) {
        text = forge::normalize_text(text);
      }
    }
    if (opts.trace != nullptr) {
      opts.trace->push_back(translated);
    }
    current = std::move(translated);
  }
  return current;
}

}  // namespace forge::pivot
