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

#ifndef TRIAGE_EVALUATION_H_
#define TRIAGE_EVALUATION_H_

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "triage/adjudication.h"
#include "triage/annotations.h"
#include "triage/config.h"
#include "triage/passages.h"

namespace triage {

// Rates with an empty denominator are reported as nullopt ("absent"),
// never as 0 or NaN.

struct PrecisionResult {
  std::optional<double> precision;
  std::size_t predicted_passages = 0;
  std::size_t hit_passages = 0;  // passages with >= 1 gold-positive sentence
};

// Throws InputError when a passage belongs to a different transcript than
// `gold`, or when passages mix themes.
PrecisionResult PassagePrecision(std::span<const Passage> predicted, const GoldLabelSet &gold);

// Precision over the first min(k, |predicted|) passages ranked by
// peak_score descending, ties broken by lower start index.
std::optional<double> TopKPrecision(std::span<const Passage> predicted,
                                    const GoldLabelSet &gold, std::size_t k = 3);

// The ranking TopKPrecision uses.
std::vector<Passage> RankByPeakScore(std::span<const Passage> predicted);

struct RecallResult {
  std::optional<double> recall;
  std::size_t gold_sentences = 0;
  std::size_t model_positive_gold_sentences = 0;
};

// A sentence is model-positive when its aggregated (pre-gate) score is
// strictly above group_threshold.
RecallResult SentenceRecall(std::span<const double> sentence_scores, const GoldLabelSet &gold,
                            Theme theme, const PipelineConfig &cfg);

struct MetricReport {
  std::string transcript_id;
  Theme theme = Theme::kEmot;
  std::optional<double> passage_precision;
  std::optional<double> top_k_precision;
  std::size_t k = 3;
  std::optional<double> sentence_recall;
  std::size_t predicted_passages = 0;
  std::size_t hit_passages = 0;
  std::size_t gold_sentences = 0;
  std::size_t model_positive_gold_sentences = 0;
};

MetricReport EvaluateTranscript(std::span<const Passage> predicted, const GoldLabelSet &gold,
                                std::span<const double> sentence_scores, Theme theme,
                                const PipelineConfig &cfg);

nlohmann::json ToJson(const MetricReport &r);

struct DecisionCounts {
  std::size_t positive = 0;
  std::size_t negative = 0;
  std::size_t undecided = 0;
  std::size_t total() const { return positive + negative + undecided; }
  bool operator==(const DecisionCounts &) const = default;
};

struct AgreementReport {
  Theme theme = Theme::kEmot;
  DecisionCounts fp_counts;
  DecisionCounts fn_counts;
  std::size_t total_read = 0;
  // (FP positive + FN negative) / total read; undecided items count as read.
  std::optional<double> model_lawyer_agreement;
  // FP positive / FP total.
  std::optional<double> fp_agreement;
  // (FP undecided + FN undecided) / total read.
  std::optional<double> undecided_share;
  // Sum of ended_at - started_at over records carrying both.
  std::optional<double> minutes_spent;
};

// Uses only `theme` records that no correction supersedes.
AgreementReport MakeAgreementReport(std::span<const AdjudicationRecord> records, Theme theme);

// The same arithmetic from tallied counts.
AgreementReport AgreementFromCounts(Theme theme, DecisionCounts fp, DecisionCounts fn);

nlohmann::json ToJson(const AgreementReport &r);

}  // namespace triage

#endif  // TRIAGE_EVALUATION_H_
