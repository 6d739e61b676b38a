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

#ifndef TRIAGE_TRIAGE_H_
#define TRIAGE_TRIAGE_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "triage/adjudication.h"
#include "triage/annotations.h"
#include "triage/config.h"
#include "triage/passages.h"

namespace triage {

enum class ItemStatus { kPending, kDecided };

// Inclusive sentence range shown around a passage by default.
struct ContextBounds {
  std::size_t begin = 0;
  std::size_t end = 0;
  bool operator==(const ContextBounds &) const = default;
};

// A passage on which expert annotation and model disagree. `side`,
// `rank_score` and the passage's score/origin fields are server-side only
// until a decision is committed.
struct DisagreementItem {
  std::string item_id;
  std::string transcript_id;
  Theme theme = Theme::kEmot;
  Passage passage;
  Side side = Side::kFalsePositive;
  double rank_score = 0.0;
  ContextBounds context;
  ItemStatus status = ItemStatus::kPending;
};

struct ReviewQueue {
  std::string queue_id;
  Theme theme = Theme::kEmot;
  std::vector<DisagreementItem> items;
  // Config snapshot, scorer metadata, seed and notes about empty pools.
  nlohmann::json provenance = nlohmann::json::object();
};

// Everything the queue builder needs about one transcript.
struct TranscriptEvidence {
  std::string transcript_id;
  std::size_t sentence_count = 0;
  std::vector<Passage> predicted;
  GoldLabelSet gold;
  std::vector<double> sentence_scores;
};

struct QueueOptions {
  // FN items per transcript; nullopt means fn_queue_min. Clamped to
  // [fn_queue_min, fn_queue_max].
  std::optional<std::size_t> fn_per_transcript;
  nlohmann::json scorer_meta = nlohmann::json::object();
};

// Per transcript: up to fp_queue_size FP items (predicted passages with no
// gold-positive sentence, highest peak first) and up to the FN quota of FN
// items (gold passages with every sentence at or below group_threshold,
// lowest peak first); ties go to the lower start index. Each transcript's
// items are shuffled with a seeded RNG, then transcripts are interleaved
// round-robin in id order. Same inputs and seed give the same queue.
ReviewQueue BuildQueue(std::span<const TranscriptEvidence> transcripts, Theme theme,
                       const PipelineConfig &cfg, const QueueOptions &options = {});

inline constexpr int kQueueSchemaVersion = 1;

nlohmann::json ToJson(const DisagreementItem &item);
DisagreementItem ItemFromJson(const nlohmann::json &j);

void WriteQueue(const std::filesystem::path &file, const ReviewQueue &queue);
ReviewQueue ReadQueue(const std::filesystem::path &file);

}  // namespace triage

#endif  // TRIAGE_TRIAGE_H_
