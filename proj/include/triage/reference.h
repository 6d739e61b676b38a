// Copyright 2026 The Triage Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef TRIAGE_REFERENCE_H_
#define TRIAGE_REFERENCE_H_

#include <chrono>
#include <cstddef>
#include <filesystem>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "triage/config.h"
#include "triage/corpus.h"

namespace triage {

// A target sentence plus up to `context_back` preceding sentences; the
// target is always the last element.
struct ReferenceQuery {
  std::vector<std::string> context_sentences;
  std::size_t target_index = 0;
  std::vector<std::string> defendant_aliases;
};

enum class ReferenceRule { kNone, kDirectAlias, kPronounChain, kSheHerOnlyCluster };

std::string_view RuleName(ReferenceRule rule);
std::optional<ReferenceRule> ParseRule(std::string_view name);

// Tokens [token_begin, token_end) of context sentence `sentence_offset`.
struct Evidence {
  std::size_t sentence_offset = 0;
  std::size_t token_begin = 0;
  std::size_t token_end = 0;
  bool operator==(const Evidence &) const = default;
};

struct ReferenceVerdict {
  bool mentions_defendant = false;  // == (rule != kNone)
  ReferenceRule rule = ReferenceRule::kNone;
  std::vector<Evidence> evidence;
};

class ReferenceResolver {
 public:
  virtual ~ReferenceResolver() = default;
  virtual ReferenceVerdict Resolve(const ReferenceQuery &query) const = 0;
};

// Rules, first match wins:
//  1. direct_alias: the target contains a defendant alias.
//  2. pronoun_chain: the target contains she/her/hers/herself and the
//     nearest feminine referent before that pronoun (an alias, or a name
//     from the name list) is a defendant alias.
//  3. she_her_only_cluster: the target contains such a pronoun and no
//     feminine name occurs anywhere in the context.
// Throws ConfigError when the alias list is empty and ValidationError when
// the context is empty or the target is not its last element.
ReferenceVerdict ResolveReference(const ReferenceQuery &query,
                                  std::span<const std::string> feminine_names);

class RuleBasedResolver : public ReferenceResolver {
 public:
  explicit RuleBasedResolver(std::vector<std::string> feminine_names = {})
      : names_(std::move(feminine_names)) {}
  ReferenceVerdict Resolve(const ReferenceQuery &query) const override {
    return ResolveReference(query, names_);
  }

 private:
  std::vector<std::string> names_;
};

// Client for an external resolver:
//   POST <base>/resolve {"context_sentences", "target_index", "defendant_aliases"}
//   -> {"mentions_defendant": bool, "rule": string}
class HttpResolver : public ReferenceResolver {
 public:
  explicit HttpResolver(std::string base_url,
                        std::chrono::milliseconds timeout = std::chrono::seconds(30));
  ReferenceVerdict Resolve(const ReferenceQuery &query) const override;

 private:
  std::string scheme_host_port_;
  std::string path_prefix_;
  std::chrono::milliseconds timeout_;
};

// One lowercase name per line; blank lines and '#' comments skipped.
std::vector<std::string> LoadNameList(const std::filesystem::path &file);

// "builtin" (optionally with a name list) or "http:<url>".
std::unique_ptr<ReferenceResolver> MakeResolver(const std::string &spec,
                                                std::vector<std::string> names = {});

ReferenceQuery MakeReferenceQuery(const Transcript &t, std::size_t sentence,
                                  const PipelineConfig &cfg);

enum class GateStatus : unsigned char {
  kNotChecked,          // score at or below gate_threshold
  kNotAboutDefendant,   // checked, no rule fired
  kAboutDefendant,      // checked, a rule fired
};

std::string_view GateStatusName(GateStatus s);
GateStatus ParseGateStatus(std::string_view name);

// Runs the resolver on exactly the sentences scoring above gate_threshold.
// Resolver transport failures are collected and rethrown as one
// TransportError naming every affected sentence ("<transcript>:<index>").
std::vector<GateStatus> GateSentences(const Transcript &t,
                                      std::span<const double> sentence_scores,
                                      const PipelineConfig &cfg,
                                      const ReferenceResolver &resolver);

inline constexpr int kGateSchemaVersion = 1;

std::filesystem::path GateFlagsPath(const std::filesystem::path &scores_dir,
                                    std::string_view transcript_id, std::string_view theme_code);
void StoreGateFlags(const std::filesystem::path &path, std::string_view transcript_id,
                    std::span<const GateStatus> flags);
std::vector<GateStatus> LoadGateFlags(const std::filesystem::path &path);

}  // namespace triage

#endif  // TRIAGE_REFERENCE_H_
