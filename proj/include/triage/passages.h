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

#ifndef TRIAGE_PASSAGES_H_
#define TRIAGE_PASSAGES_H_

#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "triage/annotations.h"
#include "triage/config.h"
#include "triage/reference.h"
#include "triage/theme.h"

namespace triage {

enum class PassageOrigin { kPredicted, kGold };

struct Passage {
  std::string transcript_id;
  Theme theme = Theme::kEmot;
  std::size_t start_sentence = 0;
  std::size_t end_sentence = 0;  // inclusive
  double peak_score = 0.0;
  PassageOrigin origin = PassageOrigin::kPredicted;
  bool defendant_gated = false;

  std::size_t length() const { return end_sentence - start_sentence + 1; }
  bool Contains(std::size_t sentence) const {
    return start_sentence <= sentence && sentence <= end_sentence;
  }
  bool operator==(const Passage &) const = default;
};

// Maximal runs of sentences scoring strictly above group_threshold, kept
// only when some member scores strictly above gate_threshold and was
// resolved as being about the defendant. Sorted by start.
std::vector<Passage> ExtractPredictedPassages(std::string_view transcript_id, Theme theme,
                                              std::span<const double> sentence_scores,
                                              std::span<const GateStatus> flags,
                                              const PipelineConfig &cfg);

// Maximal runs of consecutive gold-positive sentences. peak_score is the
// highest aggregated score inside the run, or 0 when `sentence_scores` is
// empty.
std::vector<Passage> DeriveGoldPassages(const GoldLabelSet &gold, Theme theme,
                                        std::span<const double> sentence_scores = {});

// Recomputes peak_score of each passage from `sentence_scores`.
void FillPeakScores(std::span<Passage> passages, std::span<const double> sentence_scores);

nlohmann::json ToJson(const Passage &p);
Passage PassageFromJson(const nlohmann::json &j);

// One record per line: {transcript_id, theme, start, end, peak_score,
// origin, defendant_gated}.
void WritePassages(const std::filesystem::path &file, std::span<const Passage> passages);
std::vector<Passage> ReadPassages(const std::filesystem::path &file);

}  // namespace triage

#endif  // TRIAGE_PASSAGES_H_
