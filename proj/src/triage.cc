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

#include <algorithm>
#include <cstdio>
#include <map>
#include <random>

#include "triage/error.h"
#include "triage/jsonl.h"

namespace triage {
namespace {

std::uint64_t Mix(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

std::uint64_t HashId(std::string_view s) {
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001B3ULL;
  }
  return h;
}

template <typename T>
void SeededShuffle(std::vector<T> &v, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  for (std::size_t i = v.size(); i > 1; --i) {
    const std::uint64_t bound = i;
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    std::uint64_t x;
    do {
      x = rng();
    } while (x >= limit);
    std::swap(v[i - 1], v[static_cast<std::size_t>(x % bound)]);
  }
}

bool OverlapsGold(const Passage &p, const GoldLabelSet &gold, Theme theme) {
  const auto &pos = gold.ForTheme(theme);
  auto it = std::lower_bound(pos.begin(), pos.end(), p.start_sentence);
  return it != pos.end() && *it <= p.end_sentence;
}

bool AllAtOrBelow(const Passage &p, std::span<const double> scores, double threshold) {
  for (std::size_t i = p.start_sentence; i <= p.end_sentence; ++i)
    if (i < scores.size() && scores[i] > threshold) return false;
  return true;
}

}  // namespace

ReviewQueue BuildQueue(std::span<const TranscriptEvidence> transcripts, Theme theme,
                       const PipelineConfig &cfg, const QueueOptions &options) {
  cfg.Validate();
  const std::size_t fn_quota =
      std::clamp(options.fn_per_transcript.value_or(cfg.fn_queue_min), cfg.fn_queue_min,
                 cfg.fn_queue_max);

  ReviewQueue queue;
  queue.theme = theme;
  queue.queue_id = std::string(ThemeCode(theme)) + "-s" + std::to_string(cfg.rng_seed);
  queue.provenance = {{"config", ToJson(cfg)},
                      {"scorer_meta", options.scorer_meta},
                      {"seed", cfg.rng_seed},
                      {"fn_per_transcript", fn_quota},
                      {"notes", nlohmann::json::array()}};

  std::vector<const TranscriptEvidence *> ordered;
  for (const auto &t : transcripts) ordered.push_back(&t);
  std::sort(ordered.begin(), ordered.end(),
            [](const auto *a, const auto *b) { return a->transcript_id < b->transcript_id; });

  std::vector<std::vector<DisagreementItem>> segments;
  for (const TranscriptEvidence *t : ordered) {
    std::vector<Passage> fp;
    for (const auto &p : t->predicted)
      if (p.theme == theme && !OverlapsGold(p, t->gold, theme)) fp.push_back(p);
    std::stable_sort(fp.begin(), fp.end(), [](const Passage &a, const Passage &b) {
      if (a.peak_score != b.peak_score) return a.peak_score > b.peak_score;
      return a.start_sentence < b.start_sentence;
    });
    if (fp.size() > cfg.fp_queue_size) fp.resize(cfg.fp_queue_size);

    std::vector<Passage> fn;
    for (auto &p : DeriveGoldPassages(t->gold, theme, t->sentence_scores))
      if (AllAtOrBelow(p, t->sentence_scores, cfg.group_threshold)) fn.push_back(std::move(p));
    std::stable_sort(fn.begin(), fn.end(), [](const Passage &a, const Passage &b) {
      if (a.peak_score != b.peak_score) return a.peak_score < b.peak_score;
      return a.start_sentence < b.start_sentence;
    });
    if (fn.size() > fn_quota) fn.resize(fn_quota);

    if (fp.empty())
      queue.provenance["notes"].push_back("no FP candidates in '" + t->transcript_id + "'");
    if (fn.empty())
      queue.provenance["notes"].push_back("no FN candidates in '" + t->transcript_id + "'");

    std::vector<DisagreementItem> segment;
    auto add = [&](const Passage &p, Side side) {
      // Integrity re-check of the side definitions.
      const bool overlaps = OverlapsGold(p, t->gold, theme);
      if ((side == Side::kFalsePositive) == overlaps)
        throw Error("queue integrity violated for passage [" +
                    std::to_string(p.start_sentence) + "," + std::to_string(p.end_sentence) +
                    "] of '" + t->transcript_id + "'");
      DisagreementItem item;
      item.transcript_id = t->transcript_id;
      item.theme = theme;
      item.passage = p;
      item.side = side;
      item.rank_score = p.peak_score;
      const std::size_t last = t->sentence_count == 0 ? 0 : t->sentence_count - 1;
      item.context.begin =
          p.start_sentence > cfg.display_context ? p.start_sentence - cfg.display_context : 0;
      item.context.end = std::min(last, p.end_sentence + cfg.display_context);
      segment.push_back(std::move(item));
    };
    for (const auto &p : fp) add(p, Side::kFalsePositive);
    for (const auto &p : fn) add(p, Side::kFalseNegative);
    SeededShuffle(segment, Mix(cfg.rng_seed ^ Mix(HashId(t->transcript_id))));
    segments.push_back(std::move(segment));
  }

  for (std::size_t round = 0;; ++round) {
    bool any = false;
    for (auto &segment : segments) {
      if (round < segment.size()) {
        queue.items.push_back(std::move(segment[round]));
        any = true;
      }
    }
    if (!any) break;
  }
  for (std::size_t k = 0; k < queue.items.size(); ++k) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04zu", k + 1);
    queue.items[k].item_id = queue.queue_id + "-" + buf;
  }
  return queue;
}

nlohmann::json ToJson(const DisagreementItem &item) {
  return {{"item_id", item.item_id},
          {"transcript_id", item.transcript_id},
          {"theme", ThemeCode(item.theme)},
          {"passage", ToJson(item.passage)},
          {"side", SideName(item.side)},
          {"rank_score", item.rank_score},
          {"context", {item.context.begin, item.context.end}},
          {"status", item.status == ItemStatus::kDecided ? "decided" : "pending"}};
}

DisagreementItem ItemFromJson(const nlohmann::json &j) {
  try {
    DisagreementItem item;
    item.item_id = j.at("item_id").get<std::string>();
    item.transcript_id = j.at("transcript_id").get<std::string>();
    item.theme = ThemeFromCode(j.at("theme").get<std::string>());
    item.passage = PassageFromJson(j.at("passage"));
    item.side = ParseSide(j.at("side").get<std::string>());
    item.rank_score = j.at("rank_score").get<double>();
    auto ctx = j.at("context").get<std::vector<std::size_t>>();
    if (ctx.size() != 2 || ctx[0] > ctx[1]) throw InputError("bad context bounds");
    item.context = {ctx[0], ctx[1]};
    item.status = j.value("status", std::string("pending")) == "decided" ? ItemStatus::kDecided
                                                                         : ItemStatus::kPending;
    return item;
  } catch (const nlohmann::json::exception &e) {
    throw InputError(std::string("malformed queue item: ") + e.what());
  }
}

void WriteQueue(const std::filesystem::path &file, const ReviewQueue &queue) {
  std::vector<nlohmann::json> records;
  records.push_back({{"schema_version", kQueueSchemaVersion},
                     {"queue_id", queue.queue_id},
                     {"theme", ThemeCode(queue.theme)},
                     {"provenance", queue.provenance}});
  for (const auto &item : queue.items) records.push_back(ToJson(item));
  WriteJsonLines(file, records);
}

ReviewQueue ReadQueue(const std::filesystem::path &file) {
  const auto lines = ReadJsonLines(file);
  if (lines.empty()) throw InputError(file.string() + ": missing header record");
  ReviewQueue q;
  try {
    const auto &h = lines.front().value;
    int version = h.at("schema_version").get<int>();
    if (version != kQueueSchemaVersion) throw SchemaVersionError(version, kQueueSchemaVersion);
    q.queue_id = h.at("queue_id").get<std::string>();
    q.theme = ThemeFromCode(h.at("theme").get<std::string>());
    q.provenance = h.value("provenance", nlohmann::json::object());
  } catch (const nlohmann::json::exception &e) {
    throw InputError(file.string() + ": " + e.what());
  }
  for (std::size_t k = 1; k < lines.size(); ++k) {
    try {
      q.items.push_back(ItemFromJson(lines[k].value));
    } catch (const InputError &e) {
      throw InputError(file.string() + " line " + std::to_string(lines[k].line) + ": " +
                       e.what());
    }
  }
  return q;
}

}  // namespace triage
