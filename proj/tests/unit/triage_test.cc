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

#include "triage/triage.h"

#include <gtest/gtest.h>

#include <algorithm>
#include <map>
#include <random>
#include <set>

#include "test_support.h"
#include "triage/error.h"

namespace triage {
namespace {

Passage Pred(const std::string &tid, std::size_t s, std::size_t e, double peak) {
  return {tid, Theme::kEmot, s, e, peak, PassageOrigin::kPredicted, true};
}

TranscriptEvidence Evidence(const std::string &tid, std::size_t n) {
  TranscriptEvidence t;
  t.transcript_id = tid;
  t.sentence_count = n;
  t.gold.transcript_id = tid;
  t.sentence_scores.assign(n, 0.1);
  return t;
}

std::vector<const DisagreementItem *> OfSide(const ReviewQueue &q, Side side) {
  std::vector<const DisagreementItem *> out;
  for (const auto &i : q.items)
    if (i.side == side) out.push_back(&i);
  return out;
}

TEST(Queue, TopThreeFalsePositives) {
  auto t = Evidence("trial-A", 100);
  const double peaks[] = {0.99, 0.97, 0.96, 0.95, 0.92};
  for (int k = 0; k < 5; ++k) t.predicted.push_back(Pred("trial-A", 10 * k, 10 * k + 2, peaks[k]));
  std::vector<TranscriptEvidence> ts = {t};
  PipelineConfig cfg;
  auto q = BuildQueue(ts, Theme::kEmot, cfg);
  auto fp = OfSide(q, Side::kFalsePositive);
  ASSERT_EQ(fp.size(), 3u);
  std::set<double> got;
  for (auto *i : fp) got.insert(i->rank_score);
  EXPECT_EQ(got, (std::set<double>{0.99, 0.97, 0.96}));
}

TEST(Queue, FewerFalseNegativesThanMinimumAllTaken) {
  auto t = Evidence("trial-A", 100);
  t.gold.positives[Theme::kEmot] = {5, 6, 20, 40, 41, 42, 60};
  std::vector<TranscriptEvidence> ts = {t};
  PipelineConfig cfg;
  auto q = BuildQueue(ts, Theme::kEmot, cfg);
  EXPECT_EQ(OfSide(q, Side::kFalseNegative).size(), 4u);
}

TEST(Queue, FalseNegativeQuotaClampedAndLowestFirst) {
  auto t = Evidence("trial-A", 200);
  for (std::size_t k = 0; k < 10; ++k) {
    t.gold.positives[Theme::kEmot].push_back(10 * k);
    t.sentence_scores[10 * k] = 0.05 * static_cast<double>(10 - k);  // 0.5 .. 0.05
  }
  std::vector<TranscriptEvidence> ts = {t};
  PipelineConfig cfg;
  QueueOptions opt;
  opt.fn_per_transcript = 20;
  auto q = BuildQueue(ts, Theme::kEmot, cfg, opt);
  auto fn = OfSide(q, Side::kFalseNegative);
  ASSERT_EQ(fn.size(), 8u);  // clamped to fn_queue_max
  std::set<std::size_t> starts;
  for (auto *i : fn) starts.insert(i->passage.start_sentence);
  // The two highest-scored candidates (starts 0 and 10) are left out.
  EXPECT_EQ(starts.count(0), 0u);
  EXPECT_EQ(starts.count(10), 0u);
  EXPECT_EQ(q.provenance["fn_per_transcript"], 8);

  opt.fn_per_transcript = 1;
  EXPECT_EQ(OfSide(BuildQueue(ts, Theme::kEmot, cfg, opt), Side::kFalseNegative).size(), 6u);
}

TEST(Queue, TieBreakByStart) {
  auto t = Evidence("trial-A", 100);
  t.predicted = {Pred("trial-A", 60, 61, 0.99), Pred("trial-A", 70, 71, 0.98),
                 Pred("trial-A", 40, 41, 0.96), Pred("trial-A", 12, 13, 0.96)};
  std::vector<TranscriptEvidence> ts = {t};
  PipelineConfig cfg;
  auto q = BuildQueue(ts, Theme::kEmot, cfg);
  std::set<std::size_t> starts;
  for (auto *i : OfSide(q, Side::kFalsePositive)) starts.insert(i->passage.start_sentence);
  EXPECT_EQ(starts, (std::set<std::size_t>{12, 60, 70}));
}

TEST(Queue, SidesFollowDefinitions) {
  auto t = Evidence("trial-A", 60);
  t.gold.positives[Theme::kEmot] = {10, 11, 30};
  t.sentence_scores[30] = 0.8;  // model-positive gold: not an FN
  t.predicted = {Pred("trial-A", 9, 12, 0.95),    // overlaps gold: not an FP
                 Pred("trial-A", 40, 42, 0.97)};  // FP
  std::vector<TranscriptEvidence> ts = {t};
  PipelineConfig cfg;
  auto q = BuildQueue(ts, Theme::kEmot, cfg);
  ASSERT_EQ(q.items.size(), 2u);
  for (const auto &i : q.items) {
    if (i.side == Side::kFalsePositive) {
      EXPECT_EQ(i.passage.start_sentence, 40u);
    } else {
      EXPECT_EQ(i.passage.start_sentence, 10u);
      EXPECT_EQ(i.passage.end_sentence, 11u);
      EXPECT_EQ(i.passage.origin, PassageOrigin::kGold);
    }
    EXPECT_EQ(i.status, ItemStatus::kPending);
  }
}

TEST(Queue, ContextBoundsClipped) {
  auto t = Evidence("trial-A", 20);
  t.predicted = {Pred("trial-A", 2, 3, 0.95), Pred("trial-A", 17, 19, 0.96)};
  std::vector<TranscriptEvidence> ts = {t};
  PipelineConfig cfg;
  auto q = BuildQueue(ts, Theme::kEmot, cfg);
  for (const auto &i : q.items) {
    if (i.passage.start_sentence == 2) EXPECT_EQ(i.context, (ContextBounds{0, 8}));
    if (i.passage.start_sentence == 17) EXPECT_EQ(i.context, (ContextBounds{12, 19}));
  }
}

std::vector<TranscriptEvidence> RandomCorpus(std::mt19937_64 &rng, int transcripts) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<TranscriptEvidence> out;
  for (int k = 0; k < transcripts; ++k) {
    std::string tid = "trial-" + std::string(1, char('A' + k));
    auto t = Evidence(tid, 300);
    for (auto &s : t.sentence_scores) s = u(rng);
    for (std::size_t s = 0; s < 300; s += 15) {
      if (u(rng) < 0.3) t.gold.positives[Theme::kEmot].push_back(s);
      if (u(rng) < 0.3) t.predicted.push_back(Pred(tid, s + 5, s + 7, 0.9 + u(rng) / 10));
    }
    for (std::size_t s = 0; s < 300; s += 15)
      if (std::binary_search(t.gold.positives[Theme::kEmot].begin(),
                             t.gold.positives[Theme::kEmot].end(), s) &&
          u(rng) < 0.7)
        t.sentence_scores[s] = u(rng) / 2;
    out.push_back(std::move(t));
  }
  return out;
}

TEST(QueueProperty, DeterministicUnderSeedAndInputOrder) {
  std::mt19937_64 rng(testing::TestSeed());
  auto corpus = RandomCorpus(rng, 5);
  PipelineConfig cfg;
  cfg.rng_seed = 7;
  auto a = BuildQueue(corpus, Theme::kEmot, cfg);
  std::reverse(corpus.begin(), corpus.end());
  auto b = BuildQueue(corpus, Theme::kEmot, cfg);
  ASSERT_EQ(a.items.size(), b.items.size());
  for (std::size_t k = 0; k < a.items.size(); ++k) {
    EXPECT_EQ(ToJson(a.items[k]), ToJson(b.items[k]));
  }
  EXPECT_EQ(a.queue_id, "EMOT-s7");
  EXPECT_EQ(a.items[0].item_id, "EMOT-s7-0001");
}

TEST(QueueProperty, InvariantsOnRandomCorpora) {
  std::mt19937_64 rng(testing::TestSeed() + 1);
  PipelineConfig cfg;
  for (int trial = 0; trial < 30; ++trial) {
    auto corpus = RandomCorpus(rng, 1 + trial % 6);
    cfg.rng_seed = trial;
    auto q = BuildQueue(corpus, Theme::kEmot, cfg);
    std::map<std::string, const TranscriptEvidence *> by_id;
    for (const auto &t : corpus) by_id[t.transcript_id] = &t;
    std::map<std::string, int> fp_count, fn_count;
    std::set<std::string> ids;
    for (const auto &item : q.items) {
      EXPECT_TRUE(ids.insert(item.item_id).second);
      const auto &t = *by_id.at(item.transcript_id);
      bool overlaps = false, model_positive = false;
      for (std::size_t i = item.passage.start_sentence; i <= item.passage.end_sentence; ++i) {
        overlaps = overlaps || t.gold.Contains(Theme::kEmot, i);
        model_positive = model_positive || t.sentence_scores[i] > 0.5;
      }
      if (item.side == Side::kFalsePositive) {
        EXPECT_FALSE(overlaps);
        ++fp_count[item.transcript_id];
      } else {
        EXPECT_TRUE(overlaps);
        EXPECT_FALSE(model_positive);
        ++fn_count[item.transcript_id];
      }
      EXPECT_DOUBLE_EQ(item.rank_score, item.passage.peak_score);
    }
    for (auto &[tid, c] : fp_count) EXPECT_LE(c, 3);
    for (auto &[tid, c] : fn_count) EXPECT_LE(c, 6);
  }
}

TEST(QueueFile, RoundTrip) {
  std::mt19937_64 rng(testing::TestSeed() + 2);
  auto corpus = RandomCorpus(rng, 3);
  PipelineConfig cfg;
  QueueOptions opt;
  opt.scorer_meta = {{"name", "lexicon"}, {"version", "1"}};
  auto q = BuildQueue(corpus, Theme::kEmot, cfg, opt);
  testing::TempDir dir;
  WriteQueue(dir / "q.jsonl", q);
  auto back = ReadQueue(dir / "q.jsonl");
  EXPECT_EQ(back.queue_id, q.queue_id);
  EXPECT_EQ(back.provenance, q.provenance);
  EXPECT_EQ(back.provenance["scorer_meta"]["name"], "lexicon");
  ASSERT_EQ(back.items.size(), q.items.size());
  for (std::size_t k = 0; k < q.items.size(); ++k)
    EXPECT_EQ(ToJson(back.items[k]), ToJson(q.items[k]));
}

}  // namespace
}  // namespace triage
