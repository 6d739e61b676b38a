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

// triage: batch pipeline commands and the review service.
//
//   triage ingest --in raw.txt --id trial-a --alias "ms. smith" --out corpus/
//   triage annotations import --in ga.jsonl --corpus corpus/
//   triage score --theme EMOT --scorer lexicon:terms.jsonl --corpus corpus/ --out scores/
//   triage gate --corpus corpus/ --scores scores/ --resolver builtin --names names.txt
//   triage extract --theme EMOT --corpus corpus/ --scores scores/ --out passages.jsonl
//   triage eval --theme EMOT --gold ga.jsonl --corpus corpus/ --scores scores/ --out report.jsonl
//   triage export-train --theme EMOT --seed 7 --corpus corpus/ --gold ga.jsonl --out train/
//   triage queue --theme EMOT --seed 7 --corpus corpus/ --scores scores/ --gold ga.jsonl
//   triage agreement --records decisions.jsonl
//   triage decisions export --out decisions.jsonl
//   triage serve --corpus corpus/ --state state/ --port 8080

#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "triage/annotations.h"
#include "triage/config.h"
#include "triage/corpus.h"
#include "triage/error.h"
#include "triage/evaluation.h"
#include "triage/gateway.h"
#include "triage/jsonl.h"
#include "triage/passages.h"
#include "triage/pipeline.h"
#include "triage/reference.h"
#include "triage/scorer.h"
#include "triage/triage.h"

namespace fs = std::filesystem;
using namespace triage;

namespace {

struct Globals {
  std::string config_file;
  std::string state_dir = "state";
};

PipelineConfig Config(const Globals &g) {
  PipelineConfig cfg = g.config_file.empty() ? PipelineConfig{} : LoadConfig(g.config_file);
  cfg.Validate();
  return cfg;
}

std::string ReadFile(const fs::path &p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw NotFoundError("cannot open " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<Transcript> LoadCorpus(const fs::path &dir) {
  std::vector<Transcript> out;
  for (const auto &id : ListTranscripts(dir)) out.push_back(LoadTranscript(dir, id));
  if (out.empty()) std::cerr << "warning: no transcripts in " << dir << "\n";
  return out;
}

TranscriptIndex IndexOf(const std::vector<Transcript> &corpus) {
  TranscriptIndex index;
  for (const auto &t : corpus) index[t.transcript_id] = t.size();
  return index;
}

// Gold labels from an annotation file; rejected rows are reported, not fatal.
GoldIndex LoadGold(const fs::path &file, const std::vector<Transcript> &corpus) {
  auto imported = ImportAnnotations(file, IndexOf(corpus));
  for (const auto &e : imported.errors)
    std::cerr << file.string() << " line " << e.line << ": " << e.message << "\n";
  GoldIndex gold = ToGoldLabels(imported.annotations);
  for (const auto &t : corpus) gold[t.transcript_id].transcript_id = t.transcript_id;
  return gold;
}

std::vector<GateStatus> GateFlagsFor(const fs::path &scores_dir, const Transcript &t, Theme theme) {
  auto path = GateFlagsPath(scores_dir, t.transcript_id, ThemeCode(theme));
  if (!fs::exists(path))
    throw NotFoundError("no gate flags for '" + t.transcript_id + "' (" +
                        std::string(ThemeCode(theme)) + "); run `triage gate` first");
  auto flags = LoadGateFlags(path);
  if (flags.size() != t.size())
    throw InputError(path.string() + ": sentence count does not match the transcript");
  return flags;
}

void PrintJsonLines(const std::vector<nlohmann::json> &records) {
  for (const auto &r : records) std::cout << DumpCompact(r) << "\n";
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"triage: locate rare theme passages in long transcripts and adjudicate "
               "expert/model disagreements"};
  app.require_subcommand(1);
  Globals g;
  app.add_option("--config", g.config_file, "Pipeline config (JSON object)");
  app.add_option("--state", g.state_dir, "State directory (TRIAGE_STATE_DIR overrides)");

  // ingest
  std::string in_file, id, out_path, corpus_dir, scores_dir, theme_code, gold_file;
  std::vector<std::string> aliases, meta;
  auto *ingest = app.add_subcommand("ingest", "Normalize and segment a raw transcript");
  ingest->add_option("--in", in_file, "Raw UTF-8 transcript text")->required();
  ingest->add_option("--id", id, "Transcript id")->required();
  ingest->add_option("--alias", aliases, "Defendant alias (repeatable)");
  ingest->add_option("--meta", meta, "Source metadata key=value (repeatable)");
  ingest->add_option("--out", out_path, "Corpus directory")->required();

  // annotations import
  auto *annotations = app.add_subcommand("annotations", "Expert annotation files");
  annotations->require_subcommand(1);
  auto *import = annotations->add_subcommand("import", "Validate and import span annotations");
  import->add_option("--in", in_file, "Annotation file")->required();
  import->add_option("--corpus", corpus_dir, "Corpus directory")->required();
  import->add_option("--out", out_path, "Accepted rows (default <corpus>/annotations.jsonl)");

  // score
  std::string scorer_spec;
  ScoringOptions scoring;
  auto *score = app.add_subcommand("score", "Score sliding windows and aggregate per sentence");
  score->add_option("--theme", theme_code, "Theme code")->required();
  score->add_option("--scorer", scorer_spec, "lexicon:<file> or http:<url>")->required();
  score->add_option("--corpus", corpus_dir, "Corpus directory")->required();
  score->add_option("--out", scores_dir, "Scores directory")->required();
  score->add_option("--batch-size", scoring.batch_size, "Windows per scorer request");
  score->add_option("--workers", scoring.workers, "Concurrent scorer requests");

  // gate
  std::string resolver_spec = "builtin", names_file;
  auto *gate = app.add_subcommand("gate", "Check high-scoring sentences for defendant references");
  gate->add_option("--corpus", corpus_dir, "Corpus directory")->required();
  gate->add_option("--scores", scores_dir, "Scores directory")->required();
  gate->add_option("--resolver", resolver_spec, "builtin or http:<url>");
  gate->add_option("--names", names_file, "Feminine name list, one per line");
  gate->add_option("--theme", theme_code, "Only this theme (default: all scored themes)");

  // extract
  auto *extract = app.add_subcommand("extract", "Group gated sentence scores into passages");
  extract->add_option("--theme", theme_code, "Theme code")->required();
  extract->add_option("--corpus", corpus_dir, "Corpus directory")->required();
  extract->add_option("--scores", scores_dir, "Scores directory")->required();
  extract->add_option("--out", out_path, "Passage file (default: stdout)");

  // eval
  auto *eval = app.add_subcommand("eval", "Passage precision, top-k precision, sentence recall");
  eval->add_option("--theme", theme_code, "Theme code")->required();
  eval->add_option("--gold", gold_file, "Annotation file")->required();
  eval->add_option("--corpus", corpus_dir, "Corpus directory")->required();
  eval->add_option("--scores", scores_dir, "Scores directory")->required();
  eval->add_option("--out", out_path, "Report file (default: stdout)");

  // export-train
  std::uint64_t seed = 0;
  bool seed_given = false;
  auto *export_train = app.add_subcommand("export-train", "Undersampled training windows + LOO folds");
  export_train->add_option("--theme", theme_code, "Theme code")->required();
  export_train->add_option("--seed", seed, "Sampling seed")->required();
  export_train->add_option("--corpus", corpus_dir, "Corpus directory")->required();
  export_train->add_option("--gold", gold_file, "Annotation file")->required();
  export_train->add_option("--out", out_path, "Output directory")->required();

  // queue
  std::size_t fn_count = 0;
  auto *queue = app.add_subcommand("queue", "Build the blinded disagreement review queue");
  queue->add_option("--theme", theme_code, "Theme code")->required();
  auto *seed_opt = queue->add_option("--seed", seed, "Blinding shuffle seed");
  queue->add_option("--corpus", corpus_dir, "Corpus directory")->required();
  queue->add_option("--scores", scores_dir, "Scores directory")->required();
  queue->add_option("--gold", gold_file, "Annotation file")->required();
  queue->add_option("--fn-count", fn_count, "FN items per transcript (within [min,max])");
  queue->add_option("--out", out_path, "Queue file (default: <state>/queues/<id>.queue.jsonl)");

  // agreement
  std::string records_file;
  auto *agreement = app.add_subcommand("agreement", "Model-lawyer agreement from decision records");
  agreement->add_option("--records", records_file, "Adjudication records file")->required();
  agreement->add_option("--theme", theme_code, "Only this theme");

  // decisions export
  auto *decisions = app.add_subcommand("decisions", "Committed adjudication decisions");
  decisions->require_subcommand(1);
  auto *dexport = decisions->add_subcommand("export", "Write every committed record");
  dexport->add_option("--out", out_path, "Output file (default: stdout)");

  // serve
  std::string host = "127.0.0.1", ui_dir;
  int port = 8080;
  auto *serve = app.add_subcommand("serve", "Run the review HTTP service");
  serve->add_option("--corpus", corpus_dir, "Corpus directory")->required();
  serve->add_option("--host", host, "Listen address");
  serve->add_option("--port", port, "Listen port");
  serve->add_option("--ui", ui_dir, "Static UI bundle served under /ui");

  CLI11_PARSE(app, argc, argv);
  seed_given = seed_opt->count() > 0;

  try {
    const fs::path state = ResolveStateDir(g.state_dir);

    if (*ingest) {
      Transcript t = SegmentTranscript(ReadFile(in_file), id, aliases);
      for (const auto &kv : meta) {
        auto eq = kv.find('=');
        if (eq == std::string::npos) throw InputError("--meta expects key=value, got '" + kv + "'");
        t.source_meta[kv.substr(0, eq)] = kv.substr(eq + 1);
      }
      StoreTranscript(t, out_path);
      std::cout << "ingested " << t.transcript_id << ": " << t.size() << " sentences\n";
      if (t.defendant_aliases.empty())
        std::cerr << "warning: no defendant aliases; gating will fail for this transcript\n";
      return 0;
    }

    if (*import) {
      auto corpus = LoadCorpus(corpus_dir);
      auto result = ImportAnnotations(in_file, IndexOf(corpus));
      for (const auto &e : result.errors)
        std::cerr << in_file << " line " << e.line << ": " << e.message << "\n";
      const fs::path out = out_path.empty() ? fs::path(corpus_dir) / "annotations.jsonl" : fs::path(out_path);
      WriteAnnotations(out, result.annotations);
      std::cout << "imported " << result.annotations.size() << " annotations, rejected "
                << result.errors.size() << " rows -> " << out.string() << "\n";
      return result.errors.empty() ? 0 : 2;
    }

    if (*score) {
      const PipelineConfig cfg = Config(g);
      const Theme theme = ThemeFromCode(theme_code);
      auto scorer = MakeScorer(scorer_spec);
      for (const auto &t : LoadCorpus(corpus_dir)) {
        auto windows = BuildWindows(t, cfg);
        auto scored = ScoreWindows(windows, theme, *scorer, scoring);
        ScoreTable table{t.transcript_id, theme, scored.window_scores,
                         AggregateSentenceScores(scored.window_scores, t.size(), cfg),
                         scored.scorer_meta};
        StoreScoreTable(table, scores_dir);
        std::cout << "scored " << t.transcript_id << ": " << windows.size() << " windows\n";
      }
      return 0;
    }

    if (*gate) {
      const PipelineConfig cfg = Config(g);
      auto names = names_file.empty() ? std::vector<std::string>{} : LoadNameList(names_file);
      auto resolver = MakeResolver(resolver_spec, names);
      std::vector<Theme> themes;
      if (!theme_code.empty()) themes = {ThemeFromCode(theme_code)};
      else themes.assign(kAllThemes.begin(), kAllThemes.end());
      for (const auto &t : LoadCorpus(corpus_dir)) {
        for (Theme theme : themes) {
          if (!fs::exists(ScoreTablePath(scores_dir, t.transcript_id, theme))) continue;
          auto table = LoadScoreTable(scores_dir, t.transcript_id, theme);
          auto flags = GateSentences(t, table.sentence_scores, cfg, *resolver);
          StoreGateFlags(GateFlagsPath(scores_dir, t.transcript_id, ThemeCode(theme)),
                         t.transcript_id, flags);
          std::size_t checked = 0, about = 0;
          for (auto f : flags) {
            checked += f != GateStatus::kNotChecked;
            about += f == GateStatus::kAboutDefendant;
          }
          std::cout << "gated " << t.transcript_id << " " << ThemeCode(theme) << ": " << checked
                    << " checked, " << about << " about the defendant\n";
        }
      }
      return 0;
    }

    if (*extract) {
      const PipelineConfig cfg = Config(g);
      const Theme theme = ThemeFromCode(theme_code);
      std::vector<Passage> all;
      for (const auto &t : LoadCorpus(corpus_dir)) {
        auto table = LoadScoreTable(scores_dir, t.transcript_id, theme);
        auto flags = GateFlagsFor(scores_dir, t, theme);
        auto passages = ExtractPredictedPassages(t.transcript_id, theme, table.sentence_scores, flags, cfg);
        all.insert(all.end(), passages.begin(), passages.end());
      }
      if (out_path.empty()) {
        for (const auto &p : all) std::cout << DumpCompact(ToJson(p)) << "\n";
      } else {
        WritePassages(out_path, all);
        std::cout << "extracted " << all.size() << " passages -> " << out_path << "\n";
      }
      return 0;
    }

    if (*eval) {
      const PipelineConfig cfg = Config(g);
      const Theme theme = ThemeFromCode(theme_code);
      auto corpus = LoadCorpus(corpus_dir);
      auto gold = LoadGold(gold_file, corpus);
      std::vector<nlohmann::json> reports;
      for (const auto &t : corpus) {
        auto table = LoadScoreTable(scores_dir, t.transcript_id, theme);
        auto flags = GateFlagsFor(scores_dir, t, theme);
        auto predicted = ExtractPredictedPassages(t.transcript_id, theme, table.sentence_scores, flags, cfg);
        reports.push_back(ToJson(EvaluateTranscript(predicted, gold.at(t.transcript_id),
                                                    table.sentence_scores, theme, cfg)));
      }
      // The review service serves the latest evaluation from the state dir.
      const fs::path latest = StateLayout{state}.metrics_report();
      fs::create_directories(latest.parent_path());
      WriteJsonLines(latest, reports);
      if (out_path.empty()) PrintJsonLines(reports);
      else {
        WriteJsonLines(out_path, reports);
        std::cout << "wrote " << reports.size() << " reports -> " << out_path << "\n";
      }
      return 0;
    }

    if (*export_train) {
      PipelineConfig cfg = Config(g);
      cfg.rng_seed = seed;
      const Theme theme = ThemeFromCode(theme_code);
      auto corpus = LoadCorpus(corpus_dir);
      auto gold = LoadGold(gold_file, corpus);
      auto result = ExportTrainingCorpus(corpus, gold, theme, cfg);
      WriteTrainingExport(result, out_path);
      for (const auto &w : result.warnings) std::cerr << "warning: " << w << "\n";
      std::cout << "exported " << result.examples.size() << " examples, " << result.folds.size()
                << " folds -> " << out_path << "\n";
      return 0;
    }

    if (*queue) {
      PipelineConfig cfg = Config(g);
      if (seed_given) cfg.rng_seed = seed;
      const Theme theme = ThemeFromCode(theme_code);
      auto corpus = LoadCorpus(corpus_dir);
      auto gold = LoadGold(gold_file, corpus);
      std::vector<TranscriptEvidence> evidence;
      nlohmann::json scorer_meta = nlohmann::json::object();
      for (const auto &t : corpus) {
        auto table = LoadScoreTable(scores_dir, t.transcript_id, theme);
        auto flags = GateFlagsFor(scores_dir, t, theme);
        if (scorer_meta.empty()) scorer_meta = table.scorer_meta;
        evidence.push_back({t.transcript_id, t.size(),
                            ExtractPredictedPassages(t.transcript_id, theme, table.sentence_scores, flags, cfg),
                            gold.at(t.transcript_id), table.sentence_scores});
      }
      QueueOptions options;
      if (fn_count > 0) options.fn_per_transcript = fn_count;
      options.scorer_meta = scorer_meta;
      auto q = BuildQueue(evidence, theme, cfg, options);
      const fs::path out = out_path.empty()
                               ? StateLayout{state}.queues_dir() / (q.queue_id + ".queue.jsonl")
                               : fs::path(out_path);
      WriteQueue(out, q);
      std::size_t fp = 0;
      for (const auto &item : q.items) fp += item.side == Side::kFalsePositive;
      std::cout << "queue " << q.queue_id << ": " << q.items.size() << " items (" << fp << " FP, "
                << q.items.size() - fp << " FN) -> " << out.string() << "\n";
      return 0;
    }

    if (*agreement) {
      std::vector<AdjudicationRecord> records;
      for (const auto &[line, rec] : ReadJsonLines(fs::path(records_file))) {
        try {
          records.push_back(RecordFromJson(rec));
        } catch (const InputError &e) {
          throw InputError(records_file + " line " + std::to_string(line) + ": " + e.what());
        }
      }
      if (!theme_code.empty()) {
        std::cout << ToJson(MakeAgreementReport(records, ThemeFromCode(theme_code))).dump(2) << "\n";
      } else {
        for (Theme t : kAllThemes) std::cout << DumpCompact(ToJson(MakeAgreementReport(records, t))) << "\n";
      }
      return 0;
    }

    if (*dexport) {
      DecisionStore store(StateLayout{state}.decisions_log());
      std::vector<nlohmann::json> out;
      for (const auto &r : store.Records()) out.push_back(ToJson(r));
      if (out_path.empty()) PrintJsonLines(out);
      else {
        WriteJsonLines(out_path, out);
        std::cout << "exported " << out.size() << " records -> " << out_path << "\n";
      }
      return 0;
    }

    if (*serve) {
      ReviewService service(corpus_dir, state, Config(g));
      Gateway gateway(service, ui_dir.empty() ? std::nullopt : std::optional<fs::path>(ui_dir));
      int bound = gateway.Bind(host, port);
      std::cout << "serving on http://" << host << ":" << bound << " (state " << state.string()
                << ")" << std::endl;
      gateway.Run();
      return 0;
    }
  } catch (const StateCorruptError &e) {
    std::cerr << "error: refusing to start: " << e.what() << "\n";
    return 1;
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
