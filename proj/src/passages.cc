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

#include "triage/passages.h"

#include <algorithm>

#include "triage/error.h"
#include "triage/jsonl.h"

namespace triage {

std::vector<Passage> ExtractPredictedPassages(std::string_view transcript_id, Theme theme,
                                              std::span<const double> scores,
                                              std::span<const GateStatus> flags,
                                              const PipelineConfig &cfg) {
  if (flags.size() != scores.size())
    throw InputError("gate flags and sentence scores differ in length");
  std::vector<Passage> out;
  std::size_t i = 0;
  while (i < scores.size()) {
    if (!(scores[i] > cfg.group_threshold)) {
      ++i;
      continue;
    }
    Passage p{std::string(transcript_id), theme, i, i, scores[i],
              PassageOrigin::kPredicted, false};
    while (i < scores.size() && scores[i] > cfg.group_threshold) {
      p.end_sentence = i;
      p.peak_score = std::max(p.peak_score, scores[i]);
      if (scores[i] > cfg.gate_threshold && flags[i] == GateStatus::kAboutDefendant)
        p.defendant_gated = true;
      ++i;
    }
    if (p.defendant_gated) out.push_back(std::move(p));
  }
  return out;
}

std::vector<Passage> DeriveGoldPassages(const GoldLabelSet &gold, Theme theme,
                                        std::span<const double> sentence_scores) {
  std::vector<Passage> out;
  const auto &positives = gold.ForTheme(theme);
  for (std::size_t k = 0; k < positives.size();) {
    std::size_t j = k;
    while (j + 1 < positives.size() && positives[j + 1] == positives[j] + 1) ++j;
    out.push_back({gold.transcript_id, theme, positives[k], positives[j], 0.0,
                   PassageOrigin::kGold, false});
    k = j + 1;
  }
  FillPeakScores(out, sentence_scores);
  return out;
}

void FillPeakScores(std::span<Passage> passages, std::span<const double> sentence_scores) {
  for (auto &p : passages) {
    double peak = 0.0;
    for (std::size_t i = p.start_sentence;
         i <= p.end_sentence && i < sentence_scores.size(); ++i)
      peak = std::max(peak, sentence_scores[i]);
    p.peak_score = peak;
  }
}

nlohmann::json ToJson(const Passage &p) {
  return {{"transcript_id", p.transcript_id},
          {"theme", ThemeCode(p.theme)},
          {"start", p.start_sentence},
          {"end", p.end_sentence},
          {"peak_score", p.peak_score},
          {"origin", p.origin == PassageOrigin::kGold ? "gold" : "predicted"},
          {"defendant_gated", p.defendant_gated}};
}

Passage PassageFromJson(const nlohmann::json &j) {
  try {
    Passage p;
    p.transcript_id = j.at("transcript_id").get<std::string>();
    p.theme = ThemeFromCode(j.at("theme").get<std::string>());
    p.start_sentence = j.at("start").get<std::size_t>();
    p.end_sentence = j.at("end").get<std::size_t>();
    p.peak_score = j.at("peak_score").get<double>();
    const auto origin = j.at("origin").get<std::string>();
    if (origin == "gold")
      p.origin = PassageOrigin::kGold;
    else if (origin == "predicted")
      p.origin = PassageOrigin::kPredicted;
    else
      throw InputError("unknown passage origin '" + origin + "'");
    p.defendant_gated = j.at("defendant_gated").get<bool>();
    if (p.start_sentence > p.end_sentence) throw InputError("passage start exceeds end");
    return p;
  } catch (const nlohmann::json::exception &e) {
    throw InputError(std::string("malformed passage record: ") + e.what());
  }
}

void WritePassages(const std::filesystem::path &file, std::span<const Passage> passages) {
  std::vector<nlohmann::json> records;
  for (const auto &p : passages) records.push_back(ToJson(p));
  WriteJsonLines(file, records);
}

std::vector<Passage> ReadPassages(const std::filesystem::path &file) {
  std::vector<Passage> out;
  for (const auto &[line, rec] : ReadJsonLines(file)) {
    try {
      out.push_back(PassageFromJson(rec));
    } catch (const InputError &e) {
      throw InputError(file.string() + " line " + std::to_string(line) + ": " + e.what());
    }
  }
  return out;
}

}  // namespace triage
