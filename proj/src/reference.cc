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

#include "triage/reference.h"

#include <algorithm>
#include <array>
#include <fstream>

#include <nlohmann/json.hpp>

#include "triage/error.h"
#include "triage/jsonl.h"
#include "triage/text.h"

namespace triage {
namespace {

constexpr std::array<std::string_view, 4> kFemininePronouns = {"she", "her", "hers",
                                                              "herself"};

bool IsFemininePronoun(std::string_view tok) {
  return std::find(kFemininePronouns.begin(), kFemininePronouns.end(), tok) !=
         kFemininePronouns.end();
}

struct Mention {
  std::size_t sentence;
  std::size_t begin;
  std::size_t end;
  bool is_alias;
};

std::vector<std::vector<std::string>> Phrases(std::span<const std::string> raw) {
  std::vector<std::vector<std::string>> out;
  for (const auto &r : raw) {
    auto p = TokenTexts(r);
    if (!p.empty()) out.push_back(std::move(p));
  }
  return out;
}

}  // namespace

std::string_view RuleName(ReferenceRule rule) {
  switch (rule) {
    case ReferenceRule::kNone: return "none";
    case ReferenceRule::kDirectAlias: return "direct_alias";
    case ReferenceRule::kPronounChain: return "pronoun_chain";
    case ReferenceRule::kSheHerOnlyCluster: return "she_her_only_cluster";
  }
  return "none";
}

std::optional<ReferenceRule> ParseRule(std::string_view name) {
  for (auto r : {ReferenceRule::kNone, ReferenceRule::kDirectAlias,
                 ReferenceRule::kPronounChain, ReferenceRule::kSheHerOnlyCluster})
    if (RuleName(r) == name) return r;
  return std::nullopt;
}

ReferenceVerdict ResolveReference(const ReferenceQuery &query,
                                  std::span<const std::string> feminine_names) {
  const auto aliases = Phrases(query.defendant_aliases);
  if (aliases.empty()) throw ConfigError("defendant alias list is empty");
  if (query.context_sentences.empty()) throw ValidationError("reference context is empty");
  if (query.target_index + 1 != query.context_sentences.size())
    throw ValidationError("target must be the last context sentence");
  const auto names = Phrases(feminine_names);

  std::vector<std::vector<Token>> tokens;
  for (const auto &s : query.context_sentences) tokens.push_back(Tokenize(s));
  const std::size_t target = query.target_index;

  ReferenceVerdict v;

  // Rule 1.
  for (const auto &alias : aliases) {
    for (auto at : FindPhrase(tokens[target], alias))
      v.evidence.push_back({target, at, at + alias.size()});
  }
  if (!v.evidence.empty()) {
    std::sort(v.evidence.begin(), v.evidence.end(), [](const Evidence &a, const Evidence &b) {
      return std::tie(a.token_begin, a.token_end) < std::tie(b.token_begin, b.token_end);
    });
    v.rule = ReferenceRule::kDirectAlias;
    v.mentions_defendant = true;
    return v;
  }

  const auto &tt = tokens[target];
  auto pronoun = std::find_if(tt.begin(), tt.end(),
                              [](const Token &t) { return IsFemininePronoun(t.text); });
  if (pronoun == tt.end()) return v;
  const auto pronoun_at = static_cast<std::size_t>(pronoun - tt.begin());
  const Evidence pronoun_evidence{target, pronoun_at, pronoun_at + 1};

  // Every feminine referent in the context. A name occurrence overlapping an
  // alias occurrence is the alias.
  std::vector<Mention> mentions;
  for (std::size_t s = 0; s < tokens.size(); ++s) {
    std::vector<Mention> alias_hits;
    for (const auto &alias : aliases)
      for (auto at : FindPhrase(tokens[s], alias))
        alias_hits.push_back({s, at, at + alias.size(), true});
    mentions.insert(mentions.end(), alias_hits.begin(), alias_hits.end());
    for (const auto &name : names) {
      for (auto at : FindPhrase(tokens[s], name)) {
        Mention m{s, at, at + name.size(), false};
        bool covered = std::any_of(alias_hits.begin(), alias_hits.end(), [&](const Mention &a) {
          return a.begin < m.end && m.begin < a.end;
        });
        if (!covered) mentions.push_back(m);
      }
    }
  }

  // Rule 2: nearest referent ending before the pronoun. Of mentions ending
  // at the same token the longest wins, so evidence covers "ms. smith"
  // rather than its "smith" suffix.
  const Mention *nearest = nullptr;
  for (const auto &m : mentions) {
    bool before = m.sentence < target || (m.sentence == target && m.end <= pronoun_at);
    if (!before) continue;
    if (!nearest || std::tie(m.sentence, m.end) > std::tie(nearest->sentence, nearest->end) ||
        (m.sentence == nearest->sentence && m.end == nearest->end && m.begin < nearest->begin))
      nearest = &m;
  }
  if (nearest && nearest->is_alias) {
    v.rule = ReferenceRule::kPronounChain;
    v.mentions_defendant = true;
    v.evidence = {{nearest->sentence, nearest->begin, nearest->end}, pronoun_evidence};
    return v;
  }

  // Rule 3.
  if (mentions.empty()) {
    v.rule = ReferenceRule::kSheHerOnlyCluster;
    v.mentions_defendant = true;
    v.evidence = {pronoun_evidence};
  }
  return v;
}

std::vector<std::string> LoadNameList(const std::filesystem::path &file) {
  std::ifstream in(file);
  if (!in) throw NotFoundError("cannot open name list " + file.string());
  std::vector<std::string> names;
  std::string line;
  while (std::getline(in, line)) {
    auto b = line.find_first_not_of(" \t\r");
    if (b == std::string::npos || line[b] == '#') continue;
    auto e = line.find_last_not_of(" \t\r");
    std::string name = line.substr(b, e - b + 1);
    std::transform(name.begin(), name.end(), name.begin(),
                   [](char c) { return (c >= 'A' && c <= 'Z') ? char(c - 'A' + 'a') : c; });
    names.push_back(std::move(name));
  }
  return names;
}

std::unique_ptr<ReferenceResolver> MakeResolver(const std::string &spec,
                                                std::vector<std::string> names) {
  if (spec == "builtin") return std::make_unique<RuleBasedResolver>(std::move(names));
  if (spec.rfind("http://", 0) == 0 || spec.rfind("https://", 0) == 0)
    return std::make_unique<HttpResolver>(spec);
  if (spec.rfind("http:", 0) == 0) return std::make_unique<HttpResolver>(spec.substr(5));
  throw ConfigError("resolver must be builtin or http:<url>, got '" + spec + "'");
}

ReferenceQuery MakeReferenceQuery(const Transcript &t, std::size_t sentence,
                                  const PipelineConfig &cfg) {
  ReferenceQuery q;
  const std::size_t first = sentence > cfg.context_back ? sentence - cfg.context_back : 0;
  for (std::size_t i = first; i <= sentence; ++i)
    q.context_sentences.push_back(t.sentences[i].text);
  q.target_index = q.context_sentences.size() - 1;
  q.defendant_aliases = t.defendant_aliases;
  return q;
}

std::string_view GateStatusName(GateStatus s) {
  switch (s) {
    case GateStatus::kNotChecked: return "not_checked";
    case GateStatus::kNotAboutDefendant: return "not_about_defendant";
    case GateStatus::kAboutDefendant: return "about_defendant";
  }
  return "not_checked";
}

GateStatus ParseGateStatus(std::string_view name) {
  for (auto s : {GateStatus::kNotChecked, GateStatus::kNotAboutDefendant,
                 GateStatus::kAboutDefendant})
    if (GateStatusName(s) == name) return s;
  throw InputError("unknown gate status '" + std::string(name) + "'");
}

std::vector<GateStatus> GateSentences(const Transcript &t,
                                      std::span<const double> sentence_scores,
                                      const PipelineConfig &cfg,
                                      const ReferenceResolver &resolver) {
  if (sentence_scores.size() != t.size())
    throw InputError("score count does not match transcript '" + t.transcript_id + "'");
  std::vector<GateStatus> flags(t.size(), GateStatus::kNotChecked);
  std::vector<std::string> failed;
  std::string first_failure;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (!(sentence_scores[i] > cfg.gate_threshold)) continue;
    try {
      auto verdict = resolver.Resolve(MakeReferenceQuery(t, i, cfg));
      flags[i] = verdict.mentions_defendant ? GateStatus::kAboutDefendant
                                            : GateStatus::kNotAboutDefendant;
    } catch (const TransportError &e) {
      if (first_failure.empty()) first_failure = e.what();
      failed.push_back(t.transcript_id + ":" + std::to_string(i));
    }
  }
  if (!failed.empty())
    throw TransportError("resolver failed for " + std::to_string(failed.size()) +
                             " sentences: " + first_failure,
                         std::move(failed));
  return flags;
}

std::filesystem::path GateFlagsPath(const std::filesystem::path &scores_dir,
                                    std::string_view transcript_id,
                                    std::string_view theme_code) {
  return scores_dir /
         (std::string(transcript_id) + "." + std::string(theme_code) + ".gate.jsonl");
}

void StoreGateFlags(const std::filesystem::path &path, std::string_view transcript_id,
                    std::span<const GateStatus> flags) {
  std::vector<nlohmann::json> records;
  records.push_back({{"schema_version", kGateSchemaVersion},
                     {"transcript_id", transcript_id},
                     {"n_sentences", flags.size()}});
  for (std::size_t i = 0; i < flags.size(); ++i)
    if (flags[i] != GateStatus::kNotChecked)
      records.push_back({{"sentence", i}, {"status", GateStatusName(flags[i])}});
  WriteJsonLines(path, records);
}

std::vector<GateStatus> LoadGateFlags(const std::filesystem::path &path) {
  const auto lines = ReadJsonLines(path);
  if (lines.empty()) throw InputError(path.string() + ": missing header record");
  try {
    int version = lines.front().value.at("schema_version").get<int>();
    if (version != kGateSchemaVersion) throw SchemaVersionError(version, kGateSchemaVersion);
    std::vector<GateStatus> flags(lines.front().value.at("n_sentences").get<std::size_t>(),
                                  GateStatus::kNotChecked);
    for (std::size_t k = 1; k < lines.size(); ++k) {
      auto i = lines[k].value.at("sentence").get<std::size_t>();
      if (i >= flags.size()) throw InputError(path.string() + ": sentence out of range");
      flags[i] = ParseGateStatus(lines[k].value.at("status").get<std::string>());
    }
    return flags;
  } catch (const nlohmann::json::exception &e) {
    throw InputError(path.string() + ": " + e.what());
  }
}

}  // namespace triage
