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

#ifndef TRIAGE_SCORER_H_
#define TRIAGE_SCORER_H_

#include <chrono>
#include <cstddef>
#include <filesystem>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "triage/pipeline.h"
#include "triage/theme.h"

namespace triage {

struct Paragraph {
  std::string id;
  std::string text;
};

struct ScoreResponse {
  std::map<std::string, double> scores;  // paragraph id -> score
  nlohmann::json scorer_meta = nlohmann::json::object();
};

// Source of per-window theme probabilities. Implementations must be safe to
// call from several threads at once.
class ScorerClient {
 public:
  virtual ~ScorerClient() = default;
  virtual ScoreResponse Score(Theme theme, std::span<const Paragraph> paragraphs) const = 0;
};

// theme -> (tokenized term, weight)
struct LexiconEntry {
  std::vector<std::string> term;
  double weight = 0.0;
};
using Lexicon = std::map<Theme, std::vector<LexiconEntry>>;

// One record per line: {"theme_code", "term", "weight"}. Terms may span
// several words. Throws InputError with the line number on a bad record.
Lexicon LoadLexicon(const std::filesystem::path &file);

// score = 1 - exp(-sum(weight(term) * occurrences(term)))
// with case-insensitive whole-word matching. Deterministic, and a window
// without hits scores exactly 0.
class LexiconScorer : public ScorerClient {
 public:
  explicit LexiconScorer(Lexicon lexicon) : lexicon_(std::move(lexicon)) {}
  ScoreResponse Score(Theme theme, std::span<const Paragraph> paragraphs) const override;
  double ScoreText(Theme theme, std::string_view text) const;

 private:
  Lexicon lexicon_;
};

// Client for a remote scorer:
//   POST <base>/score  {"theme", "paragraphs": [{"id", "text"}]}
//   -> {"scores": [{"id", "score"}], "scorer_meta": {"name", "version"}}
// Non-2xx answers and malformed bodies raise TransportError carrying the
// requested ids; a score outside [0,1] raises ProtocolError.
class HttpScorer : public ScorerClient {
 public:
  explicit HttpScorer(std::string base_url,
                      std::chrono::milliseconds timeout = std::chrono::seconds(30));
  ScoreResponse Score(Theme theme, std::span<const Paragraph> paragraphs) const override;

 private:
  std::string scheme_host_port_;
  std::string path_prefix_;
  std::chrono::milliseconds timeout_;
};

// Validates a decoded /score response body against the requested ids.
ScoreResponse ParseScoreResponse(const nlohmann::json &body,
                                 std::span<const Paragraph> requested);

// "lexicon:<file>" or "http://..." / "http:<url>".
std::unique_ptr<ScorerClient> MakeScorer(const std::string &spec);

struct ScoringOptions {
  std::size_t batch_size = 64;
  std::size_t workers = 1;
};

struct ScoringResult {
  WindowScores window_scores;
  nlohmann::json scorer_meta = nlohmann::json::object();
};

// Scores every window in batches. With workers > 1 batches run
// concurrently; results are keyed by window start so the merge does not
// depend on completion order. If any batch fails, a TransportError lists the
// window ids of every failed batch.
ScoringResult ScoreWindows(std::span<const Window> windows, Theme theme,
                           const ScorerClient &scorer, const ScoringOptions &options = {});

// Splits "http://host:port/prefix" into ("http://host:port", "/prefix").
std::pair<std::string, std::string> SplitBaseUrl(const std::string &url);

}  // namespace triage

#endif  // TRIAGE_SCORER_H_
