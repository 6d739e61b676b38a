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

#include "triage/decision_store.h"

#include <gtest/gtest.h>

#include <atomic>
#include <thread>

#include "test_support.h"
#include "triage/error.h"

namespace triage {
namespace {

ReviewQueue SmallQueue() {
  ReviewQueue q;
  q.queue_id = "EMOT-s0";
  q.theme = Theme::kEmot;
  for (int k = 0; k < 3; ++k) {
    DisagreementItem i;
    i.item_id = "EMOT-s0-000" + std::to_string(k + 1);
    i.transcript_id = "trial-A";
    i.theme = Theme::kEmot;
    i.side = k == 1 ? Side::kFalseNegative : Side::kFalsePositive;
    i.rank_score = k == 1 ? 0.2 : 0.97;
    q.items.push_back(i);
  }
  return q;
}

DecisionRequest Request(const std::string &item, Decision d, std::string reason = "") {
  DecisionRequest r;
  r.item_id = item;
  r.decision = d;
  r.reason_text = std::move(reason);
  r.reason_category = ReasonCategory::kOther;
  r.reviewers = {"lawyer-1", "lawyer-2", "lawyer-3"};
  return r;
}

TEST(DecisionStore, CommitRevealsSide) {
  testing::TempDir dir;
  DecisionStore store(dir / "decisions.jsonl");
  store.RegisterQueue(SmallQueue());
  EXPECT_EQ(store.Status("EMOT-s0-0001"), ItemStatus::kPending);
  auto c = store.Commit(Request("EMOT-s0-0001", Decision::kPositive, "describes lack of remorse"));
  EXPECT_EQ(c.side, Side::kFalsePositive);
  EXPECT_TRUE(c.model_positive);
  EXPECT_FALSE(c.ga_positive);
  EXPECT_TRUE(c.agrees_with_model);
  EXPECT_DOUBLE_EQ(c.model_score, 0.97);
  EXPECT_EQ(c.record.record_id, "EMOT-s0-0001#1");
  EXPECT_EQ(c.record.side, Side::kFalsePositive);
  EXPECT_TRUE(c.record.ended_at.has_value());
  EXPECT_EQ(store.Status("EMOT-s0-0001"), ItemStatus::kDecided);
  auto j = ToJson(c);
  EXPECT_EQ(j["revealed"]["side"], "FP");
  EXPECT_EQ(j["revealed"]["ga_label"], "negative");
}

TEST(DecisionStore, SecondDecisionConflicts) {
  testing::TempDir dir;
  DecisionStore store(dir / "decisions.jsonl");
  store.RegisterQueue(SmallQueue());
  store.Commit(Request("EMOT-s0-0002", Decision::kNegative));
  try {
    store.Commit(Request("EMOT-s0-0002", Decision::kPositive));
    FAIL() << "expected ConflictError";
  } catch (const ConflictError &e) {
    EXPECT_EQ(e.winning_record_id(), "EMOT-s0-0002#1");
  }
  EXPECT_EQ(store.Current("EMOT-s0-0002")->decision, Decision::kNegative);
}

TEST(DecisionStore, Validation) {
  testing::TempDir dir;
  DecisionStore store(dir / "decisions.jsonl");
  store.RegisterQueue(SmallQueue());
  EXPECT_THROW(store.Commit(Request("EMOT-s0-0001", Decision::kUndecided, "  ")),
               ValidationError);
  auto no_reviewers = Request("EMOT-s0-0001", Decision::kPositive);
  no_reviewers.reviewers.clear();
  EXPECT_THROW(store.Commit(no_reviewers), ValidationError);
  EXPECT_THROW(store.Commit(Request("nope", Decision::kPositive)), NotFoundError);
  EXPECT_EQ(store.Status("EMOT-s0-0001"), ItemStatus::kPending);
  EXPECT_NO_THROW(store.Commit(Request("EMOT-s0-0001", Decision::kUndecided, "needs context")));
}

TEST(DecisionStore, CorrectionSupersedes) {
  testing::TempDir dir;
  DecisionStore store(dir / "decisions.jsonl");
  store.RegisterQueue(SmallQueue());
  EXPECT_THROW(store.Correct(Request("EMOT-s0-0003", Decision::kPositive)), ValidationError);
  store.Commit(Request("EMOT-s0-0003", Decision::kNegative));
  auto c = store.Correct(Request("EMOT-s0-0003", Decision::kPositive));
  EXPECT_EQ(c.record.record_id, "EMOT-s0-0003#2");
  EXPECT_EQ(c.record.supersedes, "EMOT-s0-0003#1");
  EXPECT_EQ(store.Records().size(), 2u);
  EXPECT_EQ(EffectiveRecords(store.Records()).size(), 1u);
  EXPECT_EQ(store.Current("EMOT-s0-0003")->decision, Decision::kPositive);
}

TEST(DecisionStore, ReplayAfterRestart) {
  testing::TempDir dir;
  const auto log = dir / "decisions.jsonl";
  const auto opened = ParseTimestamp("2026-03-01T09:00:00.000Z");
  {
    DecisionStore store(log);
    store.RegisterQueue(SmallQueue());
    store.MarkOpened("EMOT-s0-0001", opened);
    store.MarkOpened("EMOT-s0-0001", opened + std::chrono::minutes(5));
    store.Commit(Request("EMOT-s0-0001", Decision::kNegative));
    store.Commit(Request("EMOT-s0-0002", Decision::kNegative));
    store.Correct(Request("EMOT-s0-0002", Decision::kUndecided, "unclear"));
  }
  DecisionStore again(log);
  again.RegisterQueue(SmallQueue());
  EXPECT_EQ(again.Records().size(), 3u);
  EXPECT_EQ(again.OpenedAt("EMOT-s0-0001"), opened);
  EXPECT_EQ(again.Current("EMOT-s0-0001")->started_at, opened);
  EXPECT_EQ(again.Current("EMOT-s0-0002")->decision, Decision::kUndecided);
  EXPECT_EQ(again.Status("EMOT-s0-0003"), ItemStatus::kPending);
  EXPECT_THROW(again.Commit(Request("EMOT-s0-0001", Decision::kPositive)), ConflictError);
  auto c = again.Correct(Request("EMOT-s0-0002", Decision::kPositive));
  EXPECT_EQ(c.record.record_id, "EMOT-s0-0002#3");
}

TEST(DecisionStore, CorruptLogRefused) {
  testing::TempDir dir;
  testing::WriteFile(dir / "bad.jsonl", "{\"event\":\"decision\"}\n");
  EXPECT_THROW(DecisionStore(dir / "bad.jsonl"), StateCorruptError);
  testing::WriteFile(dir / "garbage.jsonl", "not json at all\n");
  EXPECT_THROW(DecisionStore(dir / "garbage.jsonl"), StateCorruptError);
}

TEST(DecisionStore, ConcurrentCommitsExactlyOneWins) {
  for (int round = 0; round < 20; ++round) {
    testing::TempDir dir;
    DecisionStore store(dir / "decisions.jsonl");
    store.RegisterQueue(SmallQueue());
    std::atomic<int> wins{0}, conflicts{0};
    std::vector<std::thread> threads;
    for (int k = 0; k < 8; ++k) {
      threads.emplace_back([&, k] {
        try {
          store.Commit(Request("EMOT-s0-0001", k % 2 ? Decision::kPositive : Decision::kNegative));
          ++wins;
        } catch (const ConflictError &) {
          ++conflicts;
        }
      });
    }
    for (auto &t : threads) t.join();
    EXPECT_EQ(wins, 1);
    EXPECT_EQ(conflicts, 7);
    DecisionStore replay(dir / "decisions.jsonl");
    EXPECT_EQ(replay.Records().size(), 1u);
  }
}

}  // namespace
}  // namespace triage
