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

#ifndef TRIAGE_ANNOTATIONS_H_
#define TRIAGE_ANNOTATIONS_H_

#include <cstddef>
#include <filesystem>
#include <functional>
#include <istream>
#include <map>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "triage/theme.h"

namespace triage {

// An expert span annotation: sentences [start_sentence, end_sentence] of one
// transcript carry `theme`. Conversation-level annotations arrive as wide
// spans and are kept as-is.
struct GoldAnnotation {
  std::string transcript_id;
  Theme theme = Theme::kEmot;
  std::size_t start_sentence = 0;
  std::size_t end_sentence = 0;  // inclusive
  std::string annotator_id;
  bool operator==(const GoldAnnotation &) const = default;
};

struct RowError {
  std::size_t line;  // 1-based line in the annotation file
  std::string message;
};

struct AnnotationImport {
  std::vector<GoldAnnotation> annotations;  // accepted rows, file order
  std::vector<RowError> errors;
};

// transcript id -> sentence count.
using TranscriptIndex = std::map<std::string, std::size_t, std::less<>>;

// Reads one record per line:
//   {"transcript_id", "theme_code", "start_sentence", "end_sentence",
//    "annotator_id"}
// Every bad row is reported; valid rows are returned regardless.
AnnotationImport ParseAnnotations(std::istream &in, const TranscriptIndex &corpus);
AnnotationImport ImportAnnotations(const std::filesystem::path &file,
                                   const TranscriptIndex &corpus);

nlohmann::json ToJson(const GoldAnnotation &a);
void WriteAnnotations(const std::filesystem::path &file,
                      std::span<const GoldAnnotation> annotations);

// Sentence-level gold labels for one transcript.
struct GoldLabelSet {
  std::string transcript_id;
  std::map<Theme, std::vector<std::size_t>> positives;  // sorted, unique

  // Sorted gold-positive indices for `theme` (empty when none).
  const std::vector<std::size_t> &ForTheme(Theme theme) const;
  bool Contains(Theme theme, std::size_t sentence) const;

  bool operator==(const GoldLabelSet &) const = default;
};

using GoldIndex = std::map<std::string, GoldLabelSet, std::less<>>;

// Per transcript and theme, the union of all annotated spans.
GoldIndex ToGoldLabels(std::span<const GoldAnnotation> annotations);

}  // namespace triage

#endif  // TRIAGE_ANNOTATIONS_H_
