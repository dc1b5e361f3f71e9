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

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "forge/lang.hpp"

namespace forge::pivot {

// ------------------------------------------------------------------
// Target-language control tokens
// ------------------------------------------------------------------

// ">>ces<<" for ces; multilingual models read the translation target
// off this token.
std::string make_lang_token(LanguageTag lang);

// Token plus a single separating space.  Applied per hop by the
// router, never stacked.
std::string prepend_lang_token(std::string_view text, LanguageTag lang);

// Recognizes a leading well-formed token of a registered language and
// removes it together with one following space.  Anything else (bad
// code, wrong shape, token not at the start) stays untouched and
// returns nullopt.
std::pair<std::optional<LanguageTag>, std::string> strip_lang_token(
    std::string_view text);

// ------------------------------------------------------------------
// Route planning
// ------------------------------------------------------------------

// Which model a hop runs on: many-to-one translates anything into the
// bridge language, one-to-many leaves the bridge, many-to-many covers
// arbitrary direct pairs.
enum class BackendRole { kMany2One, kOne2Many, kMany2Many };

std::string_view backend_role_name(BackendRole role);

struct Hop {
  BackendRole backend;
  LanguageTag target;

  friend bool operator==(const Hop&, const Hop&) = default;
};

struct RoutePlan {
  std::vector<Hop> hops;  // one or two

  friend bool operator==(const RoutePlan&, const RoutePlan&) = default;
};

// Exactly one of three shapes, keyed on where the bridge sits:
//
//   target == bridge   ->  [many2one -> bridge]
//   source == bridge   ->  [one2many -> target]
//   otherwise          ->  [many2one -> bridge, one2many -> target]
//
// source == target raises SameLanguageError.
RoutePlan plan_route(LanguageTag source, LanguageTag target,
                     LanguageTag bridge);

// Single-hop plan through a direct many-to-many model.
RoutePlan plan_direct(LanguageTag source, LanguageTag target);

// ------------------------------------------------------------------
// Backends
// ------------------------------------------------------------------

class TranslationBackend {
 public:
  virtual ~TranslationBackend() = default;

  // Translates a batch into `target`.  Inputs arrive with the target
  // token already prepended.  Must return exactly batch.size() texts
  // in order.
  virtual std::vector<std::string> translate(
      const std::vector<std::string>& batch, LanguageTag target) = 0;

  virtual bool supports_target(LanguageTag target) const = 0;
  virtual std::string name() const = 0;
};

// Dictionary-driven stand-in for a real model: strips the routing
// token, looks the text up in the per-target dictionary, and echoes
// inputs it does not know.  With echo_token it also repeats the target
// token in front of its output, imitating models that leak the control
// token, which exercises the router's defensive stripping.
class MockBackend : public TranslationBackend {
 public:
  using Dictionary = std::unordered_map<std::string, std::string>;

  MockBackend(std::string name, std::map<LanguageTag, Dictionary> by_target,
              bool echo_token = false);

  // "source<TAB>translation" lines.
  static Dictionary load_dictionary(const std::string& path);

  std::vector<std::string> translate(const std::vector<std::string>& batch,
                                     LanguageTag target) override;
  bool supports_target(LanguageTag target) const override;
  std::string name() const override;

 private:
  std::string name_;
  std::map<LanguageTag, Dictionary> by_target_;
  bool echo_token_;
};

// Remote translator speaking JSON over HTTP: POST {base_url}/translate
// with {"target_lang": "...", "texts": [...]} expecting
// {"translations": [...]}.  Connection and protocol failures retry up
// to `retries` times, then raise BackendUnavailableError.
class HttpBackend : public TranslationBackend {
 public:
  HttpBackend(std::string base_url, std::vector<LanguageTag> targets,
              double timeout_seconds = 30.0, int retries = 2);

  std::vector<std::string> translate(const std::vector<std::string>& batch,
                                     LanguageTag target) override;
  bool supports_target(LanguageTag target) const override;
  std::string name() const override;

 private:
  std::string base_url_;
  std::vector<LanguageTag> targets_;
  double timeout_seconds_;
  int retries_;
};

// ------------------------------------------------------------------
// Batch routing
// ------------------------------------------------------------------

struct RouteOptions {
  // Re-normalize intermediate bridge text before the second hop, so
  // the downstream model sees the same text shape it was trained on.
  bool normalize_between_hops = true;
  // When set, receives one vector per hop with the texts as they left
  // that hop (token-stripped, and normalized if enabled).
  std::vector<std::vector<std::string>>* trace = nullptr;
};

// Runs `texts` through the plan.  Each hop prepends the hop's target
// token, calls the backend mapped to the hop's role, verifies the
// batch length, and strips any echoed leading token.  Missing backend
// roles raise BackendUnavailableError, unsupported hop targets raise
// UnsupportedTargetError, wrong output arity raises
// LengthMismatchError.  Output order matches input order.
std::vector<std::string> translate_batch(
    const RoutePlan& plan,
    const std::map<BackendRole, TranslationBackend*>& backends,
    const std::vector<std::string>& texts, const RouteOptions& opts = {});

}  // namespace forge::pivot
