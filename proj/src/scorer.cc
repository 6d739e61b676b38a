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

#include "triage/scorer.h"

#include <cmath>
#include <future>
#include <set>

#include "triage/error.h"
#include "triage/jsonl.h"
#include "triage/text.h"

namespace triage {

Lexicon LoadLexicon(const std::filesystem::path &file) {
  Lexicon lexicon;
  for (const auto &[line, rec] : ReadJsonLines(file)) {
    const std::string at = file.string() + " line " + std::to_string(line);
    try {
      Theme theme = ThemeFromCode(rec.at("theme_code").get<std::string>());
      auto term = TokenTexts(rec.at("term").get<std::string>());
      double weight = rec.at("weight").get<double>();
      if (term.empty()) throw InputError(at + ": term has no word characters");
      if (!std::isfinite(weight) || weight < 0.0)
        throw InputError(at + ": weight must be a finite non-negative number");
      lexicon[theme].push_back({std::move(term), weight});
    } catch (const nlohmann::json::exception &e) {
      throw InputError(at + ": " + e.what());
    } catch (const InputError &e) {
      if (std::string(e.what()).rfind(at, 0) == 0) throw;
      throw InputError(at + ": " + e.what());
    }
  }
  return lexicon;
}

double LexiconScorer::ScoreText(Theme theme, std::string_view text) const {
  auto it = lexicon_.find(theme);
  if (it == lexicon_.end()) return 0.0;
  const auto tokens = Tokenize(text);
  double mass = 0.0;
  for (const auto &entry : it->second)
    mass += entry.weight * static_cast<double>(FindPhrase(tokens, entry.term).size());
  return mass == 0.0 ? 0.0 : 1.0 - std::exp(-mass);
}

ScoreResponse LexiconScorer::Score(Theme theme, std::span<const Paragraph> paragraphs) const {
  ScoreResponse r;
  r.scorer_meta = {{"name", "lexicon"}, {"version", "1"}};
  for (const auto &p : paragraphs) r.scores[p.id] = ScoreText(theme, p.text);
  return r;
}

std::pair<std::string, std::string> SplitBaseUrl(const std::string &url) {
  auto scheme_end = url.find("://");
  if (scheme_end == std::string::npos)
    throw ConfigError("URL '" + url + "' has no scheme");
  auto path_begin = url.find('/', scheme_end + 3);
  if (path_begin == std::string::npos) return {url, ""};
  std::string prefix = url.substr(path_begin);
  while (!prefix.empty() && prefix.back() == '/') prefix.pop_back();
  return {url.substr(0, path_begin), prefix};
}

ScoreResponse ParseScoreResponse(const nlohmann::json &body,
                                 std::span<const Paragraph> requested) {
  std::vector<std::string> ids;
  for (const auto &p : requested) ids.push_back(p.id);
  auto malformed = [&](const std::string &why) {
    return TransportError("malformed /score response: " + why, ids);
  };
  if (!body.is_object() || !body.contains("scores") || !body["scores"].is_array())
    throw malformed("missing scores array");

  ScoreResponse r;
  if (body.contains("scorer_meta")) r.scorer_meta = body["scorer_meta"];
  std::set<std::string> wanted(ids.begin(), ids.end());
  for (const auto &entry : body["scores"]) {
    if (!entry.is_object() || !entry.contains("id") || !entry["id"].is_string() ||
        !entry.contains("score") || !entry["score"].is_number())
      throw malformed("score entry needs string id and numeric score");
    std::string id = entry["id"].get<std::string>();
    double score = entry["score"].get<double>();
    if (!wanted.count(id)) throw malformed("unexpected id '" + id + "'");
    if (!(score >= 0.0 && score <= 1.0))
      throw ProtocolError("scorer returned " + std::to_string(score) + " for '" + id +
                          "', outside [0,1]");
    r.scores[id] = score;
  }
  if (r.scores.size() != wanted.size()) throw malformed("missing scores for some ids");
  return r;
}

std::unique_ptr<ScorerClient> MakeScorer(const std::string &spec) {
  if (spec.rfind("lexicon:", 0) == 0)
    return std::make_unique<LexiconScorer>(LoadLexicon(spec.substr(8)));
  if (spec.rfind("http://", 0) == 0 || spec.rfind("https://", 0) == 0)
    return std::make_unique<HttpScorer>(spec);
  if (spec.rfind("http:", 0) == 0) return std::make_unique<HttpScorer>(spec.substr(5));
  throw ConfigError("scorer must be lexicon:<file> or http:<url>, got '" + spec + "'");
}

ScoringResult ScoreWindows(std::span<const Window> windows, Theme theme,
                           const ScorerClient &scorer, const ScoringOptions &options) {
  const std::size_t batch = std::max<std::size_t>(1, options.batch_size);
  std::vector<std::vector<Paragraph>> batches;
  std::map<std::string, std::size_t> start_by_id;
  for (std::size_t k = 0; k < windows.size(); ++k) {
    if (k % batch == 0) batches.emplace_back();
    std::string id = windows[k].Id();
    start_by_id[id] = windows[k].start_sentence;
    batches.back().push_back({std::move(id), windows[k].text});
  }

  struct Outcome {
    std::optional<ScoreResponse> response;
    std::exception_ptr error;
  };
  auto run = [&](std::size_t b) {
    Outcome o;
    try {
      o.response = scorer.Score(theme, batches[b]);
    } catch (...) {
      o.error = std::current_exception();
    }
    return o;
  };

  std::vector<Outcome> outcomes(batches.size());
  const std::size_t workers = std::max<std::size_t>(1, options.workers);
  for (std::size_t first = 0; first < batches.size(); first += workers) {
    std::vector<std::future<Outcome>> inflight;
    const std::size_t last = std::min(batches.size(), first + workers);
    for (std::size_t b = first; b < last; ++b)
      inflight.push_back(std::async(workers > 1 ? std::launch::async : std::launch::deferred,
                                    run, b));
    for (std::size_t b = first; b < last; ++b) outcomes[b] = inflight[b - first].get();
  }

  ScoringResult result;
  std::vector<std::string> failed_ids;
  std::string first_failure;
  for (std::size_t b = 0; b < batches.size(); ++b) {
    auto &o = outcomes[b];
    if (o.error) {
      try {
        std::rethrow_exception(o.error);
      } catch (const TransportError &e) {
        if (first_failure.empty()) first_failure = e.what();
        for (const auto &p : batches[b]) failed_ids.push_back(p.id);
        continue;
      }
      // Anything else (ProtocolError, ...) propagates from the catch above.
    }
    // In-process scorers are not validated on the wire, so check here too.
    for (const auto &p : batches[b]) {
      auto it = o.response->scores.find(p.id);
      if (it == o.response->scores.end())
        throw ProtocolError("scorer returned no score for window " + p.id);
      if (!(it->second >= 0.0 && it->second <= 1.0))
        throw ProtocolError("scorer returned " + std::to_string(it->second) +
                            " for window " + p.id + ", outside [0,1]");
      result.window_scores[start_by_id[p.id]] = it->second;
    }
    if (result.scorer_meta.empty()) result.scorer_meta = o.response->scorer_meta;
  }
  if (!failed_ids.empty())
    throw TransportError("scoring failed for " + std::to_string(failed_ids.size()) +
                             " windows: " + first_failure,
                         std::move(failed_ids));
  return result;
}

}  // namespace triage
