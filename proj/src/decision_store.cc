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

#include <algorithm>

#include "triage/error.h"
#include "triage/jsonl.h"

namespace triage {
namespace {

bool IsBlank(const std::string &s) {
  return s.find_first_not_of(" \t\r\n") == std::string::npos;
}

}  // namespace

nlohmann::json ToJson(const CommittedDecision &c) {
  return {{"record", ToJson(c.record)},
          {"revealed",
           {{"side", SideName(c.side)},
            {"ga_label", c.ga_positive ? "positive" : "negative"},
            {"model_label", c.model_positive ? "positive" : "negative"},
            {"model_score", c.model_score},
            {"agrees_with_model", c.agrees_with_model}}}};
}

DecisionStore::DecisionStore(std::filesystem::path log_path) : log_path_(std::move(log_path)) {
  if (!std::filesystem::exists(log_path_)) return;
  std::vector<JsonLine> lines;
  try {
    lines = ReadJsonLines(log_path_);
  } catch (const Error &e) {
    throw StateCorruptError(std::string("decision log unreadable: ") + e.what());
  }
  for (const auto &[line, rec] : lines) {
    const std::string at = log_path_.string() + " line " + std::to_string(line);
    try {
      const std::string kind = rec.at("event").get<std::string>();
      if (kind == "opened") {
        opened_.emplace(rec.at("item_id").get<std::string>(),
                        ParseTimestamp(rec.at("at").get<std::string>()));
      } else if (kind == "decision") {
        AdjudicationRecord r = RecordFromJson(rec.at("record"));
        if (r.supersedes) {
          auto it = current_.find(r.item_id);
          if (it == current_.end() || records_[it->second].record_id != *r.supersedes)
            throw InputError("correction does not supersede the current record");
        } else if (current_.count(r.item_id)) {
          throw InputError("second decision for item '" + r.item_id + "'");
        }
        current_[r.item_id] = records_.size();
        ++record_count_[r.item_id];
        records_.push_back(std::move(r));
      } else {
        throw InputError("unknown event '" + kind + "'");
      }
    } catch (const nlohmann::json::exception &e) {
      throw StateCorruptError(at + ": " + e.what());
    } catch (const Error &e) {
      throw StateCorruptError(at + ": " + e.what());
    }
  }
}

void DecisionStore::RegisterQueue(const ReviewQueue &queue) {
  std::lock_guard lock(mu_);
  for (const auto &item : queue.items)
    items_[item.item_id] = {item.theme, item.side, item.rank_score};
}

bool DecisionStore::Knows(const std::string &item_id) const {
  std::lock_guard lock(mu_);
  return items_.count(item_id) > 0;
}

ItemStatus DecisionStore::Status(const std::string &item_id) const {
  std::lock_guard lock(mu_);
  if (!items_.count(item_id)) throw NotFoundError("unknown item '" + item_id + "'");
  return current_.count(item_id) ? ItemStatus::kDecided : ItemStatus::kPending;
}

std::optional<AdjudicationRecord> DecisionStore::Current(const std::string &item_id) const {
  std::lock_guard lock(mu_);
  auto it = current_.find(item_id);
  if (it == current_.end()) return std::nullopt;
  return records_[it->second];
}

void DecisionStore::MarkOpened(const std::string &item_id, Timestamp at) {
  std::lock_guard lock(mu_);
  if (!items_.count(item_id)) throw NotFoundError("unknown item '" + item_id + "'");
  if (opened_.count(item_id)) return;
  AppendJsonLineDurable(log_path_, {{"event", "opened"},
                                    {"item_id", item_id},
                                    {"at", FormatTimestamp(at)}});
  opened_.emplace(item_id, at);
}

std::optional<Timestamp> DecisionStore::OpenedAt(const std::string &item_id) const {
  std::lock_guard lock(mu_);
  auto it = opened_.find(item_id);
  if (it == opened_.end()) return std::nullopt;
  return it->second;
}

void DecisionStore::Validate(const DecisionRequest &request) const {
  if (request.reviewers.empty() ||
      std::all_of(request.reviewers.begin(), request.reviewers.end(), IsBlank))
    throw ValidationError("at least one reviewer is required");
  if (request.decision == Decision::kUndecided && IsBlank(request.reason_text))
    throw ValidationError("an undecided verdict requires reason_text");
}

CommittedDecision DecisionStore::Append(const DecisionRequest &request, const ItemInfo &info,
                                        std::optional<std::string> supersedes) {
  AdjudicationRecord r;
  const std::size_t n = record_count_[request.item_id] + 1;
  r.record_id = request.item_id + "#" + std::to_string(n);
  r.item_id = request.item_id;
  r.theme = info.theme;
  r.side = info.side;
  r.decision = request.decision;
  r.reason_text = request.reason_text;
  r.reason_category = request.reason_category;
  r.secondary_categories = request.secondary_categories;
  r.reviewers = request.reviewers;
  r.ended_at = Now();
  r.started_at = request.started_at;
  if (!r.started_at) {
    auto it = opened_.find(request.item_id);
    if (it != opened_.end()) r.started_at = it->second;
  }
  r.supersedes = std::move(supersedes);
  r.client_token = request.client_token;

  // Write-ahead: the record is on disk before memory or the caller sees it.
  AppendJsonLineDurable(log_path_, {{"event", "decision"}, {"record", ToJson(r)}});
  record_count_[request.item_id] = n;
  current_[r.item_id] = records_.size();
  records_.push_back(r);

  CommittedDecision c;
  c.record = std::move(r);
  c.side = info.side;
  c.ga_positive = info.side == Side::kFalseNegative;
  c.model_positive = info.side == Side::kFalsePositive;
  c.model_score = info.rank_score;
  c.agrees_with_model = AgreesWithModel(info.side, c.record.decision);
  return c;
}

CommittedDecision DecisionStore::Commit(const DecisionRequest &request) {
  std::lock_guard lock(mu_);
  auto item = items_.find(request.item_id);
  if (item == items_.end()) throw NotFoundError("unknown item '" + request.item_id + "'");
  if (auto it = current_.find(request.item_id); it != current_.end())
    throw ConflictError("item '" + request.item_id + "' is already decided",
                        records_[it->second].record_id);
  Validate(request);
  return Append(request, item->second, std::nullopt);
}

CommittedDecision DecisionStore::Correct(const DecisionRequest &request) {
  std::lock_guard lock(mu_);
  auto item = items_.find(request.item_id);
  if (item == items_.end()) throw NotFoundError("unknown item '" + request.item_id + "'");
  auto it = current_.find(request.item_id);
  if (it == current_.end())
    throw ValidationError("item '" + request.item_id + "' has no decision to correct");
  Validate(request);
  return Append(request, item->second, records_[it->second].record_id);
}

std::vector<AdjudicationRecord> DecisionStore::Records() const {
  std::lock_guard lock(mu_);
  return records_;
}

}  // namespace triage
