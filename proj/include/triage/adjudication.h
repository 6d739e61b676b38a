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

#ifndef TRIAGE_ADJUDICATION_H_
#define TRIAGE_ADJUDICATION_H_

#include <chrono>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "triage/theme.h"

namespace triage {

// Which way the expert annotation and the model disagree.
//   kFalsePositive: GA negative, model positive.
//   kFalseNegative: GA positive, model negative.
enum class Side { kFalsePositive, kFalseNegative };

enum class Decision { kPositive, kNegative, kUndecided };

// Why reviewers overruled a model decision.
enum class ReasonCategory {
  kUnrelatedToTheme,
  kNotAboutDefendant,
  kNeutralOrFactual,
  kNeedsLongerContext,
  kDefenseCounterargument,
  kOther,
};

std::string_view SideName(Side s);                  // "FP" / "FN"
std::string_view DecisionName(Decision d);          // "positive" ...
std::string_view ReasonCategoryName(ReasonCategory c);
Side ParseSide(std::string_view s);                 // throws InputError
Decision ParseDecision(std::string_view s);         // throws InputError
ReasonCategory ParseReasonCategory(std::string_view s);  // throws InputError

// The model's label agrees with the decision when the model said positive
// (FP) and reviewers said positive, or the model said negative (FN) and
// reviewers said negative.
inline bool AgreesWithModel(Side side, Decision d) {
  return (side == Side::kFalsePositive && d == Decision::kPositive) ||
         (side == Side::kFalseNegative && d == Decision::kNegative);
}

using Timestamp = std::chrono::sys_time<std::chrono::milliseconds>;

// ISO-8601 UTC with millisecond precision, e.g. "2026-10-16T18:37:00.123Z".
std::string FormatTimestamp(Timestamp t);
Timestamp ParseTimestamp(std::string_view s);  // throws InputError
Timestamp Now();

// A committed joint decision on one disagreement item. Records are
// immutable; a correction is a new record whose `supersedes` names the
// record it replaces.
struct AdjudicationRecord {
  std::string record_id;
  std::string item_id;
  Theme theme = Theme::kEmot;
  Side side = Side::kFalsePositive;
  Decision decision = Decision::kUndecided;
  std::string reason_text;
  ReasonCategory reason_category = ReasonCategory::kOther;
  std::vector<ReasonCategory> secondary_categories;
  std::vector<std::string> reviewers;
  std::optional<Timestamp> started_at;
  std::optional<Timestamp> ended_at;
  std::optional<std::string> supersedes;
  std::string client_token;
};

nlohmann::json ToJson(const AdjudicationRecord &r);
// Throws InputError (e.g. for an unknown side) on malformed records.
AdjudicationRecord RecordFromJson(const nlohmann::json &j);

// Drops records that a later correction supersedes.
std::vector<AdjudicationRecord> EffectiveRecords(std::vector<AdjudicationRecord> records);

}  // namespace triage

#endif  // TRIAGE_ADJUDICATION_H_
