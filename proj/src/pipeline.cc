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

#include "triage/pipeline.h"

#include <algorithm>
#include <fstream>
#include <limits>
#include <random>

#include "triage/error.h"
#include "triage/jsonl.h"

namespace triage {
namespace {

std::uint64_t SplitMix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

std::uint64_t Fnv1a(std::string_view s) {
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001B3ULL;
  }
  return h;
}

// Uniform integer in [0, bound) by rejection; identical on every platform,
// unlike std::uniform_int_distribution.
std::uint64_t UniformBelow(std::mt19937_64 &rng, std::uint64_t bound) {
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % bound;
  std::uint64_t x;
  do {
    x = rng();
  } while (x >= limit);
  return x % bound;
}

}  // namespace

std::string Window::Id() const {
  return transcript_id + ":" + std::to_string(start_sentence);
}

std::vector<std::size_t> WindowStarts(std::size_t n, const PipelineConfig &cfg) {
  std::vector<std::size_t> starts;
  if (n == 0) return starts;
  if (n < cfg.window_size) {
    starts.push_back(0);
    return starts;
  }
  const std::size_t last = n - cfg.window_size;
  for (std::size_t s = 0; s <= last; s += cfg.step) starts.push_back(s);
  if (starts.back() != last) starts.push_back(last);
  return starts;
}

std::vector<Window> BuildWindows(const Transcript &t, const PipelineConfig &cfg) {
  std::vector<Window> windows;
  const std::size_t len = WindowLength(t.size(), cfg);
  for (std::size_t start : WindowStarts(t.size(), cfg)) {
    Window w{t.transcript_id, start, len, {}};
    for (std::size_t i = start; i < start + len; ++i) {
      if (i > start) w.text.push_back(' ');
      w.text += t.sentences[i].text;
    }
    windows.push_back(std::move(w));
  }
  return windows;
}

std::vector<double> AggregateSentenceScores(const WindowScores &window_scores,
                                            std::size_t n_sentences,
                                            const PipelineConfig &cfg) {
  const auto starts = WindowStarts(n_sentences, cfg);
  const std::size_t len = WindowLength(n_sentences, cfg);
  std::vector<double> scores_by_slot(starts.size());
  for (std::size_t k = 0; k < starts.size(); ++k) {
    auto it = window_scores.find(starts[k]);
    if (it == window_scores.end())
      throw IncompleteInputError("missing score for window starting at sentence " +
                                 std::to_string(starts[k]));
    if (!(it->second >= 0.0 && it->second <= 1.0))
      throw InputError("window score outside [0,1] at sentence " +
                       std::to_string(starts[k]));
    scores_by_slot[k] = it->second;
  }

  std::vector<double> out(n_sentences, 0.0);
  for (std::size_t i = 0; i < n_sentences; ++i) {
    // First window whose span reaches sentence i.
    const std::size_t lo = i + 1 > len ? i + 1 - len : 0;
    auto k = static_cast<std::size_t>(
        std::lower_bound(starts.begin(), starts.end(), lo) - starts.begin());
    double sum = 0.0;
    std::size_t count = 0;
    for (; k < starts.size() && starts[k] <= i; ++k) {
      sum += scores_by_slot[k];
      ++count;
    }
    out[i] = sum / static_cast<double>(count);
  }
  return out;
}

std::filesystem::path ScoreTablePath(const std::filesystem::path &scores_dir,
                                     std::string_view transcript_id, Theme theme) {
  return scores_dir / (std::string(transcript_id) + "." + std::string(ThemeCode(theme)) +
                       ".scores.jsonl");
}

void StoreScoreTable(const ScoreTable &table, const std::filesystem::path &scores_dir) {
  std::vector<nlohmann::json> records;
  records.push_back({{"schema_version", kScoreTableSchemaVersion},
                     {"transcript_id", table.transcript_id},
                     {"theme", ThemeCode(table.theme)},
                     {"n_sentences", table.sentence_scores.size()},
                     {"scorer_meta", table.scorer_meta}});
  for (const auto &[start, score] : table.window_scores)
    records.push_back({{"window", start}, {"score", score}});
  for (std::size_t i = 0; i < table.sentence_scores.size(); ++i)
    records.push_back({{"sentence", i}, {"score", table.sentence_scores[i]}});
  WriteJsonLines(ScoreTablePath(scores_dir, table.transcript_id, table.theme), records);
}

ScoreTable LoadScoreTable(const std::filesystem::path &scores_dir,
                          std::string_view transcript_id, Theme theme) {
  const auto path = ScoreTablePath(scores_dir, transcript_id, theme);
  if (!std::filesystem::exists(path))
    throw NotFoundError("no " + std::string(ThemeCode(theme)) + " scores for '" +
                        std::string(transcript_id) + "' in " + scores_dir.string());
  const auto lines = ReadJsonLines(path);
  if (lines.empty()) throw InputError(path.string() + ": missing header record");
  ScoreTable table;
  try {
    const auto &h = lines.front().value;
    int version = h.at("schema_version").get<int>();
    if (version != kScoreTableSchemaVersion)
      throw SchemaVersionError(version, kScoreTableSchemaVersion);
    table.transcript_id = h.at("transcript_id").get<std::string>();
    table.theme = ThemeFromCode(h.at("theme").get<std::string>());
    table.sentence_scores.assign(h.at("n_sentences").get<std::size_t>(), 0.0);
    table.scorer_meta = h.value("scorer_meta", nlohmann::json::object());
    std::vector<bool> seen(table.sentence_scores.size(), false);
    for (std::size_t k = 1; k < lines.size(); ++k) {
      const auto &r = lines[k].value;
      double score = r.at("score").get<double>();
      if (r.contains("window")) {
        table.window_scores[r.at("window").get<std::size_t>()] = score;
      } else {
        auto i = r.at("sentence").get<std::size_t>();
        if (i >= table.sentence_scores.size())
          throw InputError(path.string() + " line " + std::to_string(lines[k].line) +
                           ": sentence index out of range");
        table.sentence_scores[i] = score;
        seen[i] = true;
      }
    }
    if (std::find(seen.begin(), seen.end(), false) != seen.end())
      throw IncompleteInputError(path.string() + ": missing sentence scores");
  } catch (const nlohmann::json::exception &e) {
    throw InputError(path.string() + ": " + e.what());
  }
  return table;
}

std::vector<FoldManifest> LeaveOneOutFolds(std::span<const std::string> ids) {
  std::vector<FoldManifest> folds;
  for (std::size_t k = 0; k < ids.size(); ++k) {
    FoldManifest f{k, ids[k], {}};
    for (std::size_t j = 0; j < ids.size(); ++j)
      if (j != k) f.train_transcript_ids.push_back(ids[j]);
    folds.push_back(std::move(f));
  }
  return folds;
}

TrainingExport ExportTrainingCorpus(std::span<const Transcript> transcripts,
                                    const GoldIndex &gold, Theme theme,
                                    const PipelineConfig &cfg) {
  cfg.Validate();
  TrainingExport out;
  out.theme = theme;
  std::vector<std::string> ids;

  for (const Transcript &t : transcripts) {
    ids.push_back(t.transcript_id);
    auto g = gold.find(t.transcript_id);
    const std::vector<std::size_t> empty;
    const auto &positives = g == gold.end() ? empty : g->second.ForTheme(theme);

    // Prefix counts of gold sentences for O(1) window membership tests.
    std::vector<std::size_t> prefix(t.size() + 1, 0);
    for (std::size_t i = 0; i < t.size(); ++i)
      prefix[i + 1] = prefix[i] + (std::binary_search(positives.begin(),
                                                      positives.end(), i) ? 1 : 0);

    std::vector<Window> windows = BuildWindows(t, cfg);
    std::vector<std::size_t> pos_idx, neg_idx;
    for (std::size_t k = 0; k < windows.size(); ++k) {
      const auto &w = windows[k];
      bool positive = prefix[w.start_sentence + w.length] > prefix[w.start_sentence];
      (positive ? pos_idx : neg_idx).push_back(k);
    }

    const std::size_t want =
        std::min(cfg.neg_pos_ratio * pos_idx.size(), neg_idx.size());
    std::mt19937_64 rng(SplitMix64(cfg.rng_seed ^ SplitMix64(Fnv1a(t.transcript_id))));
    // Partial Fisher-Yates: the first `want` slots become the sample.
    for (std::size_t k = 0; k < want; ++k) {
      std::size_t pick = k + static_cast<std::size_t>(UniformBelow(rng, neg_idx.size() - k));
      std::swap(neg_idx[k], neg_idx[pick]);
    }
    neg_idx.resize(want);

    if (pos_idx.empty())
      out.warnings.push_back("transcript '" + t.transcript_id +
                             "' has no positive windows for " +
                             std::string(ThemeCode(theme)) +
                             "; no negatives retained");
    out.stats.push_back({t.transcript_id, pos_idx.size(),
                         windows.size() - pos_idx.size(), want});

    std::vector<std::pair<std::size_t, Label>> kept;
    for (auto k : pos_idx) kept.emplace_back(k, Label::kPositive);
    for (auto k : neg_idx) kept.emplace_back(k, Label::kNegative);
    std::sort(kept.begin(), kept.end());
    for (auto [k, label] : kept) {
      out.examples.push_back({t.transcript_id, windows[k].start_sentence, theme, label,
                              std::move(windows[k].text)});
    }
  }
  out.folds = LeaveOneOutFolds(ids);
  return out;
}

void WriteTrainingExport(const TrainingExport &e, const std::filesystem::path &out_dir) {
  std::vector<nlohmann::json> train;
  for (const auto &x : e.examples)
    train.push_back({{"transcript_id", x.transcript_id},
                     {"window_start", x.window_start},
                     {"theme", ThemeCode(x.theme)},
                     {"label", x.label == Label::kPositive ? "positive" : "negative"},
                     {"text", x.text}});
  WriteJsonLines(out_dir / "train.jsonl", train);

  std::vector<nlohmann::json> folds;
  for (const auto &f : e.folds)
    folds.push_back({{"fold_id", f.fold_id},
                     {"held_out_transcript_id", f.held_out_transcript_id},
                     {"train_transcript_ids", f.train_transcript_ids}});
  WriteJsonLines(out_dir / "folds.jsonl", folds);

  nlohmann::json meta = {{"theme", ThemeCode(e.theme)},
                         {"warnings", e.warnings},
                         {"transcripts", nlohmann::json::array()}};
  for (const auto &s : e.stats)
    meta["transcripts"].push_back({{"transcript_id", s.transcript_id},
                                   {"positive_windows", s.positive_windows},
                                   {"negative_windows_available",
                                    s.negative_windows_available},
                                   {"negative_windows_kept", s.negative_windows_kept}});
  std::ofstream out(out_dir / "meta.json", std::ios::binary | std::ios::trunc);
  out << meta.dump(2) << '\n';
}

}  // namespace triage
