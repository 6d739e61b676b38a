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

// Python bindings for the triage core. Structured values cross the boundary
// as JSON text; the pure-Python wrapper in triage/__init__.py decodes them.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include <nlohmann/json.hpp>

#include "triage/adjudication.h"
#include "triage/annotations.h"
#include "triage/config.h"
#include "triage/corpus.h"
#include "triage/error.h"
#include "triage/evaluation.h"
#include "triage/passages.h"
#include "triage/pipeline.h"
#include "triage/reference.h"
#include "triage/scorer.h"
#include "triage/text.h"
#include "triage/theme.h"

namespace py = pybind11;

namespace triage {
namespace {

PipelineConfig ParseConfig(const std::string &config_json) {
  if (config_json.empty()) return PipelineConfig{};
  return ConfigFromJson(nlohmann::json::parse(config_json));
}

GoldLabelSet GoldFromIndices(const std::string &tid, Theme theme,
                             std::vector<std::size_t> indices) {
  std::sort(indices.begin(), indices.end());
  indices.erase(std::unique(indices.begin(), indices.end()), indices.end());
  GoldLabelSet g;
  g.transcript_id = tid;
  g.positives[theme] = std::move(indices);
  return g;
}

std::vector<Passage> PassagesFromJson(const std::string &text) {
  std::vector<Passage> out;
  for (const auto &p : nlohmann::json::parse(text)) out.push_back(PassageFromJson(p));
  return out;
}

std::string SegmentJson(const std::string &raw, const std::string &tid,
                        const std::vector<std::string> &aliases) {
  Transcript t = SegmentTranscript(raw, tid, aliases);
  nlohmann::json sentences = nlohmann::json::array();
  for (const auto &s : t.sentences)
    sentences.push_back(
        {{"index", s.index}, {"text", s.text}, {"char_span", {s.char_span.begin, s.char_span.end}}});
  return nlohmann::json{{"transcript_id", t.transcript_id},
                        {"defendant_aliases", t.defendant_aliases},
                        {"sentences", sentences},
                        {"source_meta", t.source_meta}}
      .dump();
}

std::vector<double> Aggregate(const std::map<std::size_t, double> &window_scores, std::size_t n,
                              const std::string &config_json) {
  return AggregateSentenceScores(window_scores, n, ParseConfig(config_json));
}

double LexiconScore(const std::vector<std::tuple<std::string, std::string, double>> &entries,
                    const std::string &theme_code, const std::string &text) {
  Lexicon lexicon;
  for (const auto &[code, term, weight] : entries)
    lexicon[ThemeFromCode(code)].push_back({TokenTexts(term), weight});
  return LexiconScorer(std::move(lexicon)).ScoreText(ThemeFromCode(theme_code), text);
}

std::string Resolve(const std::vector<std::string> &context, std::size_t target_index,
                    const std::vector<std::string> &aliases,
                    const std::vector<std::string> &names) {
  ReferenceQuery q{context, target_index, aliases};
  auto v = ResolveReference(q, names);
  nlohmann::json evidence = nlohmann::json::array();
  for (const auto &e : v.evidence)
    evidence.push_back({{"sentence_offset", e.sentence_offset},
                        {"token_begin", e.token_begin},
                        {"token_end", e.token_end}});
  return nlohmann::json{{"mentions_defendant", v.mentions_defendant},
                        {"rule", RuleName(v.rule)},
                        {"evidence", evidence}}
      .dump();
}

std::string Extract(const std::string &tid, const std::string &theme_code,
                    const std::vector<double> &scores, const std::vector<std::string> &flags,
                    const std::string &config_json) {
  std::vector<GateStatus> gate;
  for (const auto &f : flags) gate.push_back(ParseGateStatus(f));
  auto passages = ExtractPredictedPassages(tid, ThemeFromCode(theme_code), scores, gate,
                                           ParseConfig(config_json));
  nlohmann::json out = nlohmann::json::array();
  for (const auto &p : passages) out.push_back(ToJson(p));
  return out.dump();
}

std::optional<double> Precision(const std::string &passages_json, const std::string &tid,
                                const std::string &theme_code, std::vector<std::size_t> gold) {
  auto ps = PassagesFromJson(passages_json);
  return PassagePrecision(ps, GoldFromIndices(tid, ThemeFromCode(theme_code), std::move(gold)))
      .precision;
}

std::optional<double> TopK(const std::string &passages_json, const std::string &tid,
                           const std::string &theme_code, std::vector<std::size_t> gold,
                           std::size_t k) {
  auto ps = PassagesFromJson(passages_json);
  return TopKPrecision(ps, GoldFromIndices(tid, ThemeFromCode(theme_code), std::move(gold)), k);
}

std::optional<double> Recall(const std::vector<double> &scores, const std::string &theme_code,
                             std::vector<std::size_t> gold, const std::string &config_json) {
  const Theme theme = ThemeFromCode(theme_code);
  return SentenceRecall(scores, GoldFromIndices("", theme, std::move(gold)), theme,
                        ParseConfig(config_json))
      .recall;
}

std::string Agreement(const std::string &theme_code, std::tuple<std::size_t, std::size_t, std::size_t> fp,
                      std::tuple<std::size_t, std::size_t, std::size_t> fn) {
  auto counts = [](const auto &t) {
    return DecisionCounts{std::get<0>(t), std::get<1>(t), std::get<2>(t)};
  };
  return ToJson(AgreementFromCounts(ThemeFromCode(theme_code), counts(fp), counts(fn))).dump();
}

}  // namespace
}  // namespace triage

PYBIND11_MODULE(_core, m) {
  using namespace triage;
  m.doc() = "Native core of the triage pipeline";

  auto error = py::register_exception<Error>(m, "TriageError", PyExc_RuntimeError);
  py::register_exception<InputError>(m, "InputError", error.ptr());
  py::register_exception<ConfigError>(m, "ConfigError", error.ptr());
  py::register_exception<IngestionError>(m, "IngestionError", error.ptr());
  py::register_exception<IncompleteInputError>(m, "IncompleteInputError", error.ptr());
  py::register_exception<NotFoundError>(m, "NotFoundError", error.ptr());

  m.def("normalize_text", [](const std::string &s) { return NormalizeText(s); });
  m.def("segment_transcript_json", &SegmentJson, py::arg("raw_text"), py::arg("transcript_id"),
        py::arg("aliases"));
  m.def(
      "window_starts",
      [](std::size_t n, const std::string &cfg) { return WindowStarts(n, ParseConfig(cfg)); },
      py::arg("n"), py::arg("config_json") = "");
  m.def("aggregate_sentence_scores", &Aggregate, py::arg("window_scores"), py::arg("n"),
        py::arg("config_json") = "");
  m.def("lexicon_score", &LexiconScore, py::arg("entries"), py::arg("theme"), py::arg("text"));
  m.def("resolve_reference_json", &Resolve, py::arg("context"), py::arg("target_index"),
        py::arg("aliases"), py::arg("names") = std::vector<std::string>{});
  m.def("extract_passages_json", &Extract, py::arg("transcript_id"), py::arg("theme"),
        py::arg("scores"), py::arg("gate_flags"), py::arg("config_json") = "");
  m.def("passage_precision", &Precision, py::arg("passages_json"), py::arg("transcript_id"),
        py::arg("theme"), py::arg("gold"));
  m.def("top_k_precision", &TopK, py::arg("passages_json"), py::arg("transcript_id"),
        py::arg("theme"), py::arg("gold"), py::arg("k") = 3);
  m.def("sentence_recall", &Recall, py::arg("scores"), py::arg("theme"), py::arg("gold"),
        py::arg("config_json") = "");
  m.def("agreement_from_counts_json", &Agreement, py::arg("theme"), py::arg("fp"), py::arg("fn"));
}
