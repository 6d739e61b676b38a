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

#ifndef TRIAGE_DECISION_STORE_H_
#define TRIAGE_DECISION_STORE_H_

#include <filesystem>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "triage/adjudication.h"
#include "triage/triage.h"

namespace triage {

struct DecisionRequest {
  std::string item_id;
  Decision decision = Decision::kUndecided;
  std::string reason_text;
  ReasonCategory reason_category = ReasonCategory::kOther;
  std::vector<ReasonCategory> secondary_categories;
  std::vector<std::string> reviewers;
  std::string client_token;
  // Defaults to the time the item was first opened, if known.
  std::optional<Timestamp> started_at;
};

// What the reviewers learn once their decision is on disk.
struct CommittedDecision {
  AdjudicationRecord record;
  Side side = Side::kFalsePositive;
  bool ga_positive = false;
  bool model_positive = false;
  double model_score = 0.0;
  bool agrees_with_model = false;
};

nlohmann::json ToJson(const CommittedDecision &c);

// File-backed, append-only store of adjudication decisions. Every record is
// flushed to disk before the call returns, so a restart loses nothing that
// was acknowledged. All methods are thread-safe; of two concurrent decisions
// on one item exactly one succeeds and the other gets ConflictError.
class DecisionStore {
 public:
  // Replays `log_path` if it exists; an unreadable log throws
  // StateCorruptError.
  explicit DecisionStore(std::filesystem::path log_path);

  DecisionStore(const DecisionStore &) = delete;
  DecisionStore &operator=(const DecisionStore &) = delete;

  void RegisterQueue(const ReviewQueue &queue);

  bool Knows(const std::string &item_id) const;
  ItemStatus Status(const std::string &item_id) const;  // NotFoundError if unknown
  std::optional<AdjudicationRecord> Current(const std::string &item_id) const;

  // Records the first time an item was shown to reviewers; later calls are
  // no-ops.
  void MarkOpened(const std::string &item_id, Timestamp at);
  std::optional<Timestamp> OpenedAt(const std::string &item_id) const;

  // Errors: NotFoundError (unknown item), ValidationError (no reviewers, or
  // undecided without reason text), ConflictError (already decided).
  CommittedDecision Commit(const DecisionRequest &request);

  // Appends a record superseding the item's current decision.
  CommittedDecision Correct(const DecisionRequest &request);

  // Every record in commit order, superseded ones included.
  std::vector<AdjudicationRecord> Records() const;

  const std::filesystem::path &log_path() const { return log_path_; }

 private:
  struct ItemInfo {
    Theme theme;
    Side side;
    double rank_score;
  };

  void Validate(const DecisionRequest &request) const;
  CommittedDecision Append(const DecisionRequest &request, const ItemInfo &info,
                           std::optional<std::string> supersedes);

  std::filesystem::path log_path_;
  mutable std::mutex mu_;
  std::map<std::string, ItemInfo> items_;
  std::vector<AdjudicationRecord> records_;
  std::map<std::string, std::size_t> current_;  // item -> index into records_
  std::map<std::string, std::size_t> record_count_;
  std::map<std::string, Timestamp> opened_;
};

}  // namespace triage

#endif  // TRIAGE_DECISION_STORE_H_
