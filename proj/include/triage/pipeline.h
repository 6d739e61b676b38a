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

#ifndef TRIAGE_PIPELINE_H_
#define TRIAGE_PIPELINE_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "triage/annotations.h"
#include "triage/config.h"
#include "triage/corpus.h"
#include "triage/theme.h"

namespace triage {

// A run of consecutive sentences classified as one unit.
struct Window {
  std::string transcript_id;
  std::size_t start_sentence = 0;
  std::size_t length = 0;
  std::string text;  // member sentence texts joined by single spaces

  // Stable identifier used on the scorer wire: "<transcript_id>:<start>".
  std::string Id() const;
};

// Window start offsets for a transcript of `n` sentences:
//   n == 0      -> none
//   n <  W      -> {0} (one window over all sentences)
//   otherwise   -> 0, S, 2S, ... <= n-W, plus n-W when the stride does not
//                  land on it, so the tail is always covered.
std::vector<std::size_t> WindowStarts(std::size_t n, const PipelineConfig &cfg);

// Length of every window for a transcript of `n` sentences.
inline std::size_t WindowLength(std::size_t n, const PipelineConfig &cfg) {
  return n < cfg.window_size ? n : cfg.window_size;
}

std::vector<Window> BuildWindows(const Transcript &t, const PipelineConfig &cfg);

// window start -> positive-class probability.
using WindowScores = std::map<std::size_t, double>;

// Mean score of the windows containing each sentence. Edge sentences average
// over however many windows actually contain them. Throws
// IncompleteInputError when a window score is missing and InputError when a
// score lies outside [0,1].
std::vector<double> AggregateSentenceScores(const WindowScores &window_scores,
                                            std::size_t n_sentences,
                                            const PipelineConfig &cfg);

// Per-theme scores for one transcript.
struct ScoreTable {
  std::string transcript_id;
  Theme theme = Theme::kEmot;
  WindowScores window_scores;
  std::vector<double> sentence_scores;
  nlohmann::json scorer_meta = nlohmann::json::object();
};

inline constexpr int kScoreTableSchemaVersion = 1;

std::filesystem::path ScoreTablePath(const std::filesystem::path &scores_dir,
                                     std::string_view transcript_id, Theme theme);
void StoreScoreTable(const ScoreTable &table, const std::filesystem::path &scores_dir);
ScoreTable LoadScoreTable(const std::filesystem::path &scores_dir,
                          std::string_view transcript_id, Theme theme);

// ---------------------------------------------------------------------------
// Training export

enum class Label { kNegative, kPositive };

struct TrainingExample {
  std::string transcript_id;
  std::size_t window_start = 0;
  Theme theme = Theme::kEmot;
  Label label = Label::kNegative;
  std::string text;
  bool operator==(const TrainingExample &) const = default;
};

struct FoldManifest {
  std::size_t fold_id = 0;
  std::string held_out_transcript_id;
  std::vector<std::string> train_transcript_ids;
  bool operator==(const FoldManifest &) const = default;
};

struct TranscriptExportStats {
  std::string transcript_id;
  std::size_t positive_windows = 0;
  std::size_t negative_windows_available = 0;
  std::size_t negative_windows_kept = 0;
};

struct TrainingExport {
  Theme theme = Theme::kEmot;
  std::vector<TrainingExample> examples;  // grouped by transcript, by start
  std::vector<FoldManifest> folds;
  std::vector<TranscriptExportStats> stats;
  std::vector<std::string> warnings;
};

// Keeps every positive window (one with at least one gold-positive sentence)
// and samples negatives without replacement, per transcript, up to
// neg_pos_ratio x positives. Sampling is seeded by (rng_seed, transcript id)
// so a transcript's sample does not depend on its neighbours in the list.
// Folds are leave-one-out over `transcripts` in the given order. Transcripts
// missing from `gold` are treated as having no positives.
TrainingExport ExportTrainingCorpus(std::span<const Transcript> transcripts,
                                    const GoldIndex &gold, Theme theme,
                                    const PipelineConfig &cfg);

std::vector<FoldManifest> LeaveOneOutFolds(std::span<const std::string> transcript_ids);

// Writes train.jsonl, folds.jsonl and meta.json into `out_dir`.
void WriteTrainingExport(const TrainingExport &e, const std::filesystem::path &out_dir);

}  // namespace triage

#endif  // TRIAGE_PIPELINE_H_
