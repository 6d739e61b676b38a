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

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

#include "test_support.h"
#include "triage/error.h"

namespace triage {
namespace {

GoldLabelSet Gold(std::vector<std::size_t> idx, Theme theme = Theme::kEmot) {
  GoldLabelSet g;
  g.transcript_id = "t";
  g.positives[theme] = std::move(idx);
  return g;
}

Passage P(std::size_t s, std::size_t e, double peak = 0.95) {
  return {"t", Theme::kEmot, s, e, peak, PassageOrigin::kPredicted, true};
}

TEST(Precision, Ratio) {
  std::vector<Passage> ps = {P(0, 1), P(5, 6), P(10, 12), P(20, 20)};
  auto r = PassagePrecision(ps, Gold({11, 30}));
  EXPECT_EQ(r.predicted_passages, 4u);
  EXPECT_EQ(r.hit_passages, 1u);
  EXPECT_DOUBLE_EQ(*r.precision, 0.25);
}

TEST(Precision, NoPredictionsIsAbsent) {
  auto r = PassagePrecision({}, Gold({1}));
  EXPECT_FALSE(r.precision.has_value());
  EXPECT_FALSE(TopKPrecision({}, Gold({1})).has_value());
}

TEST(Precision, MismatchedTranscriptRejected) {
  auto p = P(0, 0);
  p.transcript_id = "other";
  std::vector<Passage> ps = {p};
  EXPECT_THROW(PassagePrecision(ps, Gold({0})), InputError);
  std::vector<Passage> mixed = {P(0, 0), P(2, 2)};
  mixed[1].theme = Theme::kSex;
  EXPECT_THROW(PassagePrecision(mixed, Gold({0})), InputError);
}

TEST(TopK, TwoOfThree) {
  std::vector<Passage> ps = {P(0, 0, 0.91), P(2, 2, 0.99), P(4, 4, 0.98), P(6, 6, 0.97),
                             P(8, 8, 0.92)};
  // Top three are starts 2, 4, 6; two of them hit.
  EXPECT_NEAR(*TopKPrecision(ps, Gold({2, 6, 8})), 2.0 / 3.0, 1e-12);
}

TEST(TopK, KClampedToPredictions) {
  std::vector<Passage> ps = {P(0, 0, 0.99), P(5, 5, 0.95)};
  EXPECT_DOUBLE_EQ(*TopKPrecision(ps, Gold({5})), 0.5);
}

TEST(TopK, TieAtRankThreeGoesToLowerStart) {
  // Ranks: 0.99 (start 30), 0.98 (start 50), then 0.96 at starts 40 and 12.
  std::vector<Passage> ps = {P(30, 30, 0.99), P(40, 40, 0.96), P(50, 50, 0.98),
                             P(12, 12, 0.96)};
  auto ranked = RankByPeakScore(ps);
  ASSERT_EQ(ranked.size(), 4u);
  EXPECT_EQ(ranked[2].start_sentence, 12u);
  EXPECT_EQ(ranked[3].start_sentence, 40u);
  EXPECT_DOUBLE_EQ(*TopKPrecision(ps, Gold({12})), 1.0 / 3.0);
  EXPECT_DOUBLE_EQ(*TopKPrecision(ps, Gold({40})), 0.0);
  // Input order does not matter.
  std::reverse(ps.begin(), ps.end());
  EXPECT_EQ(RankByPeakScore(ps)[2].start_sentence, 12u);
}

TEST(Recall, GoldHitRatio) {
  std::vector<double> scores(13, 0.1);
  scores[4] = scores[9] = scores[12] = 0.8;
  PipelineConfig cfg;
  auto r = SentenceRecall(scores, Gold({3, 4, 9}), Theme::kEmot, cfg);
  EXPECT_EQ(r.gold_sentences, 3u);
  EXPECT_EQ(r.model_positive_gold_sentences, 2u);
  EXPECT_NEAR(*r.recall, 2.0 / 3.0, 1e-12);
}

TEST(Recall, EmptyGoldIsAbsent) {
  std::vector<double> scores(5, 0.9);
  PipelineConfig cfg;
  EXPECT_FALSE(SentenceRecall(scores, Gold({}), Theme::kEmot, cfg).recall.has_value());
}

TEST(Recall, ThresholdIsStrict) {
  std::vector<double> scores = {0.5, 0.5000001};
  PipelineConfig cfg;
  EXPECT_DOUBLE_EQ(*SentenceRecall(scores, Gold({0, 1}), Theme::kEmot, cfg).recall, 0.5);
}

TEST(MetricsProperty, MatchBruteForce) {
  std::mt19937_64 rng(testing::TestSeed());
  std::uniform_real_distribution<double> u(0.0, 1.0);
  PipelineConfig cfg;
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 1 + rng() % 60;
    std::vector<double> scores(n);
    for (auto &s : scores) s = u(rng) < 0.1 ? 0.5 : u(rng);
    std::set<std::size_t> gold;
    for (std::size_t i = 0; i < n; ++i)
      if (u(rng) < 0.2) gold.insert(i);
    std::vector<Passage> ps;
    for (std::size_t s = 0; s < n;) {
      std::size_t e = std::min(n - 1, s + rng() % 4);
      if (u(rng) < 0.5) ps.push_back(P(s, e, std::round(u(rng) * 10) / 10));
      s = e + 2;
    }
    auto g = Gold({gold.begin(), gold.end()});

    std::size_t hits = 0;
    for (const auto &p : ps) {
      bool hit = false;
      for (std::size_t i = p.start_sentence; i <= p.end_sentence; ++i) hit = hit || gold.count(i);
      hits += hit;
    }
    auto pr = PassagePrecision(ps, g);
    EXPECT_EQ(pr.hit_passages, hits);
    if (ps.empty())
      EXPECT_FALSE(pr.precision.has_value());
    else
      EXPECT_DOUBLE_EQ(*pr.precision, double(hits) / ps.size());

    // Top-k oracle: repeatedly pick the best remaining passage.
    std::vector<Passage> pool = ps, chosen;
    while (chosen.size() < 3 && !pool.empty()) {
      auto best = pool.begin();
      for (auto it = pool.begin(); it != pool.end(); ++it)
        if (it->peak_score > best->peak_score ||
            (it->peak_score == best->peak_score && it->start_sentence < best->start_sentence))
          best = it;
      chosen.push_back(*best);
      pool.erase(best);
    }
    auto topk = TopKPrecision(ps, g, 3);
    if (chosen.empty()) {
      EXPECT_FALSE(topk.has_value());
    } else {
      std::size_t top_hits = 0;
      for (const auto &p : chosen) {
        bool hit = false;
        for (std::size_t i = p.start_sentence; i <= p.end_sentence; ++i)
          hit = hit || gold.count(i);
        top_hits += hit;
      }
      EXPECT_DOUBLE_EQ(*topk, double(top_hits) / chosen.size());
    }

    std::size_t found = 0;
    for (auto i : gold) found += scores[i] > 0.5;
    auto rr = SentenceRecall(scores, g, Theme::kEmot, cfg);
    if (gold.empty())
      EXPECT_FALSE(rr.recall.has_value());
    else
      EXPECT_DOUBLE_EQ(*rr.recall, double(found) / gold.size());

    // Permutation invariance.
    auto shuffled = ps;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    EXPECT_EQ(PassagePrecision(shuffled, g).hit_passages, hits);
    EXPECT_EQ(TopKPrecision(shuffled, g, 3), topk);
  }
}

TEST(Report, JsonUsesNullForAbsent) {
  PipelineConfig cfg;
  std::vector<double> scores(4, 0.1);
  auto r = EvaluateTranscript({}, Gold({}), scores, Theme::kEmot, cfg);
  auto j = ToJson(r);
  EXPECT_TRUE(j["passage_precision"].is_null());
  EXPECT_TRUE(j["sentence_recall"].is_null());
  EXPECT_EQ(j["transcript_id"], "t");
}

struct CountsRow {
  Theme theme;
  DecisionCounts fp, fn;
};

const CountsRow kAdjudicatedCounts[] = {
    {Theme::kEmot, {16, 5, 1}, {6, 0, 0}},
    {Theme::kSex, {0, 21, 3}, {3, 3, 0}},
    {Theme::kNorm, {13, 7, 4}, {6, 1, 1}},
    {Theme::kMom, {2, 12, 4}, {6, 1, 1}},
};

TEST(Agreement, CountsRows) {
  const double agreement[] = {0.5714, 0.1000, 0.4375, 0.1154};
  for (int k = 0; k < 4; ++k) {
    auto r = AgreementFromCounts(kAdjudicatedCounts[k].theme, kAdjudicatedCounts[k].fp, kAdjudicatedCounts[k].fn);
    EXPECT_NEAR(*r.model_lawyer_agreement, agreement[k], 1e-4) << ThemeCode(kAdjudicatedCounts[k].theme);
  }
  auto emot = AgreementFromCounts(Theme::kEmot, kAdjudicatedCounts[0].fp, kAdjudicatedCounts[0].fn);
  EXPECT_EQ(emot.total_read, 28u);
  EXPECT_NEAR(*emot.fp_agreement, 0.727, 5e-4);
  auto norm = AgreementFromCounts(Theme::kNorm, kAdjudicatedCounts[2].fp, kAdjudicatedCounts[2].fn);
  EXPECT_DOUBLE_EQ(*norm.model_lawyer_agreement, 0.4375);
  EXPECT_NEAR(*norm.fp_agreement, 0.5417, 1e-4);
  auto mom = AgreementFromCounts(Theme::kMom, kAdjudicatedCounts[3].fp, kAdjudicatedCounts[3].fn);
  EXPECT_NEAR(*mom.undecided_share, 0.192, 5e-4);
}

TEST(Agreement, EmptyCountsAreAbsent) {
  auto r = AgreementFromCounts(Theme::kEmot, {}, {});
  EXPECT_FALSE(r.model_lawyer_agreement.has_value());
  EXPECT_FALSE(r.fp_agreement.has_value());
  auto j = ToJson(r);
  EXPECT_TRUE(j["model_lawyer_agreement"].is_null());
}

std::vector<AdjudicationRecord> RecordsFor(const CountsRow &row) {
  std::vector<AdjudicationRecord> out;
  int n = 0;
  auto add = [&](Side side, Decision d, std::size_t count) {
    for (std::size_t i = 0; i < count; ++i) {
      AdjudicationRecord r;
      r.item_id = "item-" + std::to_string(n);
      r.record_id = r.item_id + "#1";
      ++n;
      r.theme = row.theme;
      r.side = side;
      r.decision = d;
      r.reviewers = {"l1", "l2", "l3"};
      out.push_back(r);
    }
  };
  add(Side::kFalsePositive, Decision::kPositive, row.fp.positive);
  add(Side::kFalsePositive, Decision::kNegative, row.fp.negative);
  add(Side::kFalsePositive, Decision::kUndecided, row.fp.undecided);
  add(Side::kFalseNegative, Decision::kPositive, row.fn.positive);
  add(Side::kFalseNegative, Decision::kNegative, row.fn.negative);
  add(Side::kFalseNegative, Decision::kUndecided, row.fn.undecided);
  return out;
}

TEST(Agreement, FromRecordsMatchesCountsAndIgnoresOrder) {
  std::mt19937_64 rng(testing::TestSeed());
  for (const auto &row : kAdjudicatedCounts) {
    auto records = RecordsFor(row);
    // A record from another theme must not leak in.
    AdjudicationRecord foreign = records.front();
    foreign.theme = row.theme == Theme::kEmot ? Theme::kSex : Theme::kEmot;
    records.push_back(foreign);
    auto want = AgreementFromCounts(row.theme, row.fp, row.fn);
    for (int k = 0; k < 5; ++k) {
      std::shuffle(records.begin(), records.end(), rng);
      auto got = MakeAgreementReport(records, row.theme);
      EXPECT_EQ(got.fp_counts, row.fp);
      EXPECT_EQ(got.fn_counts, row.fn);
      EXPECT_EQ(got.model_lawyer_agreement, want.model_lawyer_agreement);
    }
  }
}

TEST(Agreement, SupersededRecordsExcludedAndMinutesSummed) {
  AdjudicationRecord a;
  a.record_id = "q-0001#1";
  a.item_id = "q-0001";
  a.side = Side::kFalsePositive;
  a.decision = Decision::kNegative;
  a.started_at = ParseTimestamp("2026-01-01T10:00:00.000Z");
  a.ended_at = ParseTimestamp("2026-01-01T10:03:30.000Z");
  AdjudicationRecord b = a;
  b.record_id = "q-0001#2";
  b.decision = Decision::kPositive;
  b.supersedes = a.record_id;
  b.started_at = ParseTimestamp("2026-01-01T11:00:00.000Z");
  b.ended_at = ParseTimestamp("2026-01-01T11:01:00.000Z");
  std::vector<AdjudicationRecord> rs = {a, b};
  auto r = MakeAgreementReport(rs, Theme::kEmot);
  EXPECT_EQ(r.fp_counts, (DecisionCounts{1, 0, 0}));
  EXPECT_DOUBLE_EQ(*r.minutes_spent, 1.0);
  EXPECT_DOUBLE_EQ(*r.model_lawyer_agreement, 1.0);
}

TEST(Agreement, UnknownSideIsInputError) {
  nlohmann::json j = {{"item_id", "x"}, {"theme", "EMOT"}, {"side", "XX"},
                      {"decision", "positive"}};
  EXPECT_THROW(RecordFromJson(j), InputError);
}

TEST(Timestamps, RoundTrip) {
  auto t = ParseTimestamp("2026-10-16T18:37:00.123Z");
  EXPECT_EQ(FormatTimestamp(t), "2026-10-16T18:37:00.123Z");
  EXPECT_THROW(ParseTimestamp("yesterday"), InputError);
}

}  // namespace
}  // namespace triage
