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

#include "triage/evaluation.h"

#include <algorithm>
#include <chrono>

#include "triage/error.h"

namespace triage {
namespace {

std::optional<double> Ratio(std::size_t num, std::size_t den) {
  if (den == 0) return std::nullopt;
  return static_cast<double>(num) / static_cast<double>(den);
}

nlohmann::json OrNull(const std::optional<double> &v) {
  return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
}

bool HitsGold(const Passage &p, const GoldLabelSet &gold) {
  const auto &pos = gold.ForTheme(p.theme);
  auto it = std::lower_bound(pos.begin(), pos.end(), p.start_sentence);
  return it != pos.end() && *it <= p.end_sentence;
}

void CheckSameScope(std::span<const Passage> predicted, const GoldLabelSet &gold) {
  for (const auto &p : predicted) {
    if (p.transcript_id != gold.transcript_id)
      throw InputError("passage from transcript '" + p.transcript_id +
                       "' evaluated against gold labels of '" + gold.transcript_id + "'");
    if (p.theme != predicted.front().theme)
      throw InputError("passages mix themes");
  }
}

nlohmann::json CountsJson(const DecisionCounts &c) {
  return {{"positive", c.positive}, {"negative", c.negative}, {"undecided", c.undecided}};
}

}  // namespace

PrecisionResult PassagePrecision(std::span<const Passage> predicted, const GoldLabelSet &gold) {
  CheckSameScope(predicted, gold);
  PrecisionResult r;
  r.predicted_passages = predicted.size();
  r.hit_passages = static_cast<std::size_t>(std::count_if(
      predicted.begin(), predicted.end(), [&](const Passage &p) { return HitsGold(p, gold); }));
  r.precision = Ratio(r.hit_passages, r.predicted_passages);
  return r;
}

std::vector<Passage> RankByPeakScore(std::span<const Passage> predicted) {
  std::vector<Passage> ranked(predicted.begin(), predicted.end());
  std::stable_sort(ranked.begin(), ranked.end(), [](const Passage &a, const Passage &b) {
    if (a.peak_score != b.peak_score) return a.peak_score > b.peak_score;
    return a.start_sentence < b.start_sentence;
  });
  return ranked;
}

std::optional<double> TopKPrecision(std::span<const Passage> predicted,
                                    const GoldLabelSet &gold, std::size_t k) {
  CheckSameScope(predicted, gold);
  const auto ranked = RankByPeakScore(predicted);
  const std::size_t n = std::min(k, ranked.size());
  std::size_t hits = 0;
  for (std::size_t i = 0; i < n; ++i) hits += HitsGold(ranked[i], gold) ? 1 : 0;
  return Ratio(hits, n);
}

RecallResult SentenceRecall(std::span<const double> sentence_scores, const GoldLabelSet &gold,
                            Theme theme, const PipelineConfig &cfg) {
  RecallResult r;
  for (std::size_t i : gold.ForTheme(theme)) {
    ++r.gold_sentences;
    if (i < sentence_scores.size() && sentence_scores[i] > cfg.group_threshold)
      ++r.model_positive_gold_sentences;
  }
  r.recall = Ratio(r.model_positive_gold_sentences, r.gold_sentences);
  return r;
}

MetricReport EvaluateTranscript(std::span<const Passage> predicted, const GoldLabelSet &gold,
                                std::span<const double> sentence_scores, Theme theme,
                                const PipelineConfig &cfg) {
  MetricReport m;
  m.transcript_id = gold.transcript_id;
  m.theme = theme;
  m.k = cfg.top_k;
  auto precision = PassagePrecision(predicted, gold);
  m.passage_precision = precision.precision;
  m.predicted_passages = precision.predicted_passages;
  m.hit_passages = precision.hit_passages;
  m.top_k_precision = TopKPrecision(predicted, gold, cfg.top_k);
  auto recall = SentenceRecall(sentence_scores, gold, theme, cfg);
  m.sentence_recall = recall.recall;
  m.gold_sentences = recall.gold_sentences;
  m.model_positive_gold_sentences = recall.model_positive_gold_sentences;
  return m;
}

nlohmann::json ToJson(const MetricReport &r) {
  return {{"transcript_id", r.transcript_id},
          {"theme", ThemeCode(r.theme)},
          {"passage_precision", OrNull(r.passage_precision)},
          {"top_k_precision", OrNull(r.top_k_precision)},
          {"k", r.k},
          {"sentence_recall", OrNull(r.sentence_recall)},
          {"counts",
           {{"predicted_passages", r.predicted_passages},
            {"hit_passages", r.hit_passages},
            {"gold_sentences", r.gold_sentences},
            {"model_positive_gold_sentences", r.model_positive_gold_sentences}}}};
}

AgreementReport AgreementFromCounts(Theme theme, DecisionCounts fp, DecisionCounts fn) {
  AgreementReport r;
  r.theme = theme;
  r.fp_counts = fp;
  r.fn_counts = fn;
  r.total_read = fp.total() + fn.total();
  r.model_lawyer_agreement = Ratio(fp.positive + fn.negative, r.total_read);
  r.fp_agreement = Ratio(fp.positive, fp.total());
  r.undecided_share = Ratio(fp.undecided + fn.undecided, r.total_read);
  return r;
}

AgreementReport MakeAgreementReport(std::span<const AdjudicationRecord> records, Theme theme) {
  std::vector<AdjudicationRecord> scoped;
  for (const auto &r : records)
    if (r.theme == theme) scoped.push_back(r);
  scoped = EffectiveRecords(std::move(scoped));

  DecisionCounts fp, fn;
  std::optional<double> minutes;
  for (const auto &r : scoped) {
    DecisionCounts &c = r.side == Side::kFalsePositive ? fp : fn;
    switch (r.decision) {
      case Decision::kPositive: ++c.positive; break;
      case Decision::kNegative: ++c.negative; break;
      case Decision::kUndecided: ++c.undecided; break;
    }
    if (r.started_at && r.ended_at && *r.ended_at >= *r.started_at) {
      std::chrono::duration<double, std::ratio<60>> d = *r.ended_at - *r.started_at;
      minutes = minutes.value_or(0.0) + d.count();
    }
  }
  AgreementReport report = AgreementFromCounts(theme, fp, fn);
  report.minutes_spent = minutes;
  return report;
}

nlohmann::json ToJson(const AgreementReport &r) {
  return {{"theme", ThemeCode(r.theme)},
          {"fp_counts", CountsJson(r.fp_counts)},
          {"fn_counts", CountsJson(r.fn_counts)},
          {"total_read", r.total_read},
          {"model_lawyer_agreement", OrNull(r.model_lawyer_agreement)},
          {"fp_agreement", OrNull(r.fp_agreement)},
          {"undecided_share", OrNull(r.undecided_share)},
          {"minutes_spent", OrNull(r.minutes_spent)}};
}

}  // namespace triage
