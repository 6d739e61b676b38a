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

#include "triage/annotations.h"

#include <algorithm>
#include <fstream>
#include <utility>

#include "triage/error.h"
#include "triage/jsonl.h"

namespace triage {
namespace {

// Validates one row against the corpus, appending every problem found.
bool ParseRow(const nlohmann::json &row, const TranscriptIndex &corpus,
              GoldAnnotation *out, std::vector<std::string> *problems) {
  if (!row.is_object()) {
    problems->push_back("record is not an object");
    return false;
  }
  auto string_field = [&](const char *key) -> std::string {
    auto it = row.find(key);
    if (it == row.end() || !it->is_string()) {
      problems->push_back(std::string("missing or non-string ") + key);
      return {};
    }
    return it->get<std::string>();
  };
  auto index_field = [&](const char *key) -> std::optional<std::size_t> {
    auto it = row.find(key);
    if (it == row.end() || !it->is_number_integer()) {
      problems->push_back(std::string("missing or non-integer ") + key);
      return std::nullopt;
    }
    if (it->get<long long>() < 0) {
      problems->push_back(std::string(key) + " is negative");
      return std::nullopt;
    }
    return it->get<std::size_t>();
  };

  out->transcript_id = string_field("transcript_id");
  std::string code = string_field("theme_code");
  auto start = index_field("start_sentence");
  auto end = index_field("end_sentence");
  out->annotator_id = string_field("annotator_id");

  if (!code.empty()) {
    if (auto theme = ParseTheme(code))
      out->theme = *theme;
    else
      problems->push_back("unknown theme code '" + code + "'");
  }

  std::optional<std::size_t> length;
  if (!out->transcript_id.empty()) {
    auto it = corpus.find(out->transcript_id);
    if (it == corpus.end())
      problems->push_back("unknown transcript '" + out->transcript_id + "'");
    else
      length = it->second;
  }
  if (start && end) {
    if (*start > *end) problems->push_back("start_sentence exceeds end_sentence");
    if (length) {
      if (*start >= *length) problems->push_back("start_sentence out of range");
      if (*end >= *length) problems->push_back("end_sentence out of range");
    }
    out->start_sentence = *start;
    out->end_sentence = *end;
  }
  return problems->empty();
}

const std::vector<std::size_t> kEmpty;

}  // namespace

AnnotationImport ParseAnnotations(std::istream &in, const TranscriptIndex &corpus) {
  AnnotationImport result;
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    nlohmann::json row;
    try {
      row = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error &) {
      result.errors.push_back({number, "malformed record"});
      continue;
    }
    GoldAnnotation a;
    std::vector<std::string> problems;
    if (ParseRow(row, corpus, &a, &problems)) {
      result.annotations.push_back(std::move(a));
    } else {
      std::string msg;
      for (const auto &p : problems) msg += (msg.empty() ? "" : "; ") + p;
      result.errors.push_back({number, std::move(msg)});
    }
  }
  return result;
}

AnnotationImport ImportAnnotations(const std::filesystem::path &file,
                                   const TranscriptIndex &corpus) {
  std::ifstream in(file);
  if (!in) throw NotFoundError("cannot open annotation file " + file.string());
  return ParseAnnotations(in, corpus);
}

nlohmann::json ToJson(const GoldAnnotation &a) {
  return {{"transcript_id", a.transcript_id},
          {"theme_code", ThemeCode(a.theme)},
          {"start_sentence", a.start_sentence},
          {"end_sentence", a.end_sentence},
          {"annotator_id", a.annotator_id}};
}

void WriteAnnotations(const std::filesystem::path &file,
                      std::span<const GoldAnnotation> annotations) {
  std::vector<nlohmann::json> records;
  for (const auto &a : annotations) records.push_back(ToJson(a));
  WriteJsonLines(file, records);
}

const std::vector<std::size_t> &GoldLabelSet::ForTheme(Theme theme) const {
  auto it = positives.find(theme);
  return it == positives.end() ? kEmpty : it->second;
}

bool GoldLabelSet::Contains(Theme theme, std::size_t sentence) const {
  const auto &v = ForTheme(theme);
  return std::binary_search(v.begin(), v.end(), sentence);
}

GoldIndex ToGoldLabels(std::span<const GoldAnnotation> annotations) {
  // Merge intervals per (transcript, theme) rather than expanding every span
  // up front, so wide conversation-level spans stay cheap.
  std::map<std::pair<std::string, Theme>,
           std::vector<std::pair<std::size_t, std::size_t>>>
      spans;
  for (const auto &a : annotations)
    spans[{a.transcript_id, a.theme}].emplace_back(a.start_sentence, a.end_sentence);

  GoldIndex index;
  for (auto &[key, ranges] : spans) {
    std::sort(ranges.begin(), ranges.end());
    GoldLabelSet &set = index[key.first];
    set.transcript_id = key.first;
    auto &out = set.positives[key.second];
    std::size_t next = 0;  // first index not yet emitted
    bool any = false;
    for (auto [lo, hi] : ranges) {
      std::size_t from = any ? std::max(lo, next) : lo;
      for (std::size_t i = from; i <= hi; ++i) out.push_back(i);
      if (!any || hi + 1 > next) next = hi + 1;
      any = true;
    }
  }
  return index;
}

}  // namespace triage
