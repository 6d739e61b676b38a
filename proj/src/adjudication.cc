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

#include "triage/adjudication.h"

#include <cstdio>
#include <ctime>
#include <map>
#include <set>

#include "triage/error.h"

namespace triage {

std::string_view SideName(Side s) { return s == Side::kFalsePositive ? "FP" : "FN"; }

Side ParseSide(std::string_view s) {
  if (s == "FP") return Side::kFalsePositive;
  if (s == "FN") return Side::kFalseNegative;
  throw InputError("unknown queue side '" + std::string(s) + "'");
}

std::string_view DecisionName(Decision d) {
  switch (d) {
    case Decision::kPositive: return "positive";
    case Decision::kNegative: return "negative";
    case Decision::kUndecided: return "undecided";
  }
  return "undecided";
}

Decision ParseDecision(std::string_view s) {
  for (auto d : {Decision::kPositive, Decision::kNegative, Decision::kUndecided})
    if (DecisionName(d) == s) return d;
  throw InputError("unknown decision '" + std::string(s) + "'");
}

std::string_view ReasonCategoryName(ReasonCategory c) {
  switch (c) {
    case ReasonCategory::kUnrelatedToTheme: return "unrelated_to_theme";
    case ReasonCategory::kNotAboutDefendant: return "not_about_defendant";
    case ReasonCategory::kNeutralOrFactual: return "neutral_or_factual";
    case ReasonCategory::kNeedsLongerContext: return "needs_longer_context";
    case ReasonCategory::kDefenseCounterargument: return "defense_counterargument";
    case ReasonCategory::kOther: return "other";
  }
  return "other";
}

ReasonCategory ParseReasonCategory(std::string_view s) {
  for (auto c : {ReasonCategory::kUnrelatedToTheme, ReasonCategory::kNotAboutDefendant,
                 ReasonCategory::kNeutralOrFactual, ReasonCategory::kNeedsLongerContext,
                 ReasonCategory::kDefenseCounterargument, ReasonCategory::kOther})
    if (ReasonCategoryName(c) == s) return c;
  throw InputError("unknown reason category '" + std::string(s) + "'");
}

std::string FormatTimestamp(Timestamp t) {
  using namespace std::chrono;
  const auto secs = floor<seconds>(t);
  const auto ms = (t - secs).count();
  std::time_t tt = system_clock::to_time_t(secs);
  std::tm tm{};
  gmtime_r(&tt, &tm);
  char buf[64];
  std::snprintf(buf, sizeof buf, "%04d-%02d-%02dT%02d:%02d:%02d.%03dZ", tm.tm_year + 1900,
                tm.tm_mon + 1, tm.tm_mday, tm.tm_hour, tm.tm_min, tm.tm_sec,
                static_cast<int>(ms));
  return buf;
}

Timestamp ParseTimestamp(std::string_view s) {
  int y, mo, d, h, mi, sec, ms = 0;
  std::string str(s);
  int n = std::sscanf(str.c_str(), "%4d-%2d-%2dT%2d:%2d:%2d.%3dZ", &y, &mo, &d, &h, &mi,
                      &sec, &ms);
  if (n < 6) throw InputError("bad timestamp '" + str + "'");
  using namespace std::chrono;
  const year_month_day ymd{year{y}, month{static_cast<unsigned>(mo)},
                           day{static_cast<unsigned>(d)}};
  if (!ymd.ok()) throw InputError("bad timestamp '" + str + "'");
  return sys_days{ymd} + hours{h} + minutes{mi} + seconds{sec} + milliseconds{ms};
}

Timestamp Now() {
  return std::chrono::floor<std::chrono::milliseconds>(std::chrono::system_clock::now());
}

nlohmann::json ToJson(const AdjudicationRecord &r) {
  nlohmann::json j = {{"record_id", r.record_id},
                      {"item_id", r.item_id},
                      {"theme", ThemeCode(r.theme)},
                      {"side", SideName(r.side)},
                      {"decision", DecisionName(r.decision)},
                      {"reason_text", r.reason_text},
                      {"reason_category", ReasonCategoryName(r.reason_category)},
                      {"secondary_categories", nlohmann::json::array()},
                      {"reviewers", r.reviewers},
                      {"started_at", nullptr},
                      {"ended_at", nullptr},
                      {"supersedes", nullptr},
                      {"client_token", r.client_token}};
  for (auto c : r.secondary_categories) j["secondary_categories"].push_back(ReasonCategoryName(c));
  if (r.started_at) j["started_at"] = FormatTimestamp(*r.started_at);
  if (r.ended_at) j["ended_at"] = FormatTimestamp(*r.ended_at);
  if (r.supersedes) j["supersedes"] = *r.supersedes;
  return j;
}

AdjudicationRecord RecordFromJson(const nlohmann::json &j) {
  try {
    AdjudicationRecord r;
    r.record_id = j.value("record_id", std::string());
    r.item_id = j.at("item_id").get<std::string>();
    r.theme = ThemeFromCode(j.at("theme").get<std::string>());
    r.side = ParseSide(j.at("side").get<std::string>());
    r.decision = ParseDecision(j.at("decision").get<std::string>());
    r.reason_text = j.value("reason_text", std::string());
    r.reason_category = ParseReasonCategory(j.value("reason_category", std::string("other")));
    if (j.contains("secondary_categories"))
      for (const auto &c : j.at("secondary_categories"))
        r.secondary_categories.push_back(ParseReasonCategory(c.get<std::string>()));
    if (j.contains("reviewers")) r.reviewers = j.at("reviewers").get<std::vector<std::string>>();
    if (j.contains("started_at") && !j.at("started_at").is_null())
      r.started_at = ParseTimestamp(j.at("started_at").get<std::string>());
    if (j.contains("ended_at") && !j.at("ended_at").is_null())
      r.ended_at = ParseTimestamp(j.at("ended_at").get<std::string>());
    if (j.contains("supersedes") && !j.at("supersedes").is_null())
      r.supersedes = j.at("supersedes").get<std::string>();
    r.client_token = j.value("client_token", std::string());
    return r;
  } catch (const nlohmann::json::exception &e) {
    throw InputError(std::string("malformed adjudication record: ") + e.what());
  }
}

std::vector<AdjudicationRecord> EffectiveRecords(std::vector<AdjudicationRecord> records) {
  std::set<std::string> replaced;
  for (const auto &r : records)
    if (r.supersedes) replaced.insert(*r.supersedes);
  std::vector<AdjudicationRecord> out;
  for (auto &r : records)
    if (r.record_id.empty() || !replaced.count(r.record_id)) out.push_back(std::move(r));
  return out;
}

}  // namespace triage
