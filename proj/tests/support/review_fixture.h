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

#ifndef TRIAGE_TESTS_REVIEW_FIXTURE_H_
#define TRIAGE_TESTS_REVIEW_FIXTURE_H_

#include <filesystem>
#include <memory>
#include <set>
#include <string>
#include <thread>

#include <nlohmann/json.hpp>

#include "httplib.h"
#include "test_support.h"
#include "triage/gateway.h"
#include "triage/triage.h"

namespace triage::testing {

// Field names that must never reach a reviewer before a decision commits.
inline const std::set<std::string> &ForbiddenPreCommitKeys() {
  static const std::set<std::string> keys = {
      "side",  "rank_score", "peak_score", "score",        "scores",         "model_score",
      "ga_label", "model_label", "origin", "defendant_gated", "gold", "label",
      "agrees_with_model", "revealed", "provenance", "sentence_scores"};
  return keys;
}

// Every object key anywhere inside `j`.
inline void CollectKeys(const nlohmann::json &j, std::set<std::string> *out) {
  if (j.is_object()) {
    for (auto it = j.begin(); it != j.end(); ++it) {
      out->insert(it.key());
      CollectKeys(it.value(), out);
    }
  } else if (j.is_array()) {
    for (const auto &v : j) CollectKeys(v, out);
  }
}

inline std::vector<std::string> LeakedKeys(const nlohmann::json &j) {
  std::set<std::string> keys;
  CollectKeys(j, &keys);
  std::vector<std::string> leaked;
  for (const auto &k : keys)
    if (ForbiddenPreCommitKeys().count(k)) leaked.push_back(k);
  return leaked;
}

// A corpus with one 40-sentence transcript and a queue of two FP and two FN
// items, written under `root`/corpus and `root`/state.
struct ReviewFixture {
  std::filesystem::path corpus;
  std::filesystem::path state;
  ReviewQueue queue;
};

inline ReviewFixture MakeReviewFixture(const std::filesystem::path &root) {
  ReviewFixture f{root / "corpus", root / "state", {}};
  std::filesystem::create_directories(f.corpus);
  std::filesystem::create_directories(f.state / "queues");
  Transcript t = FillerTranscript("trial-A", 40);
  StoreTranscript(t, f.corpus);

  TranscriptEvidence ev;
  ev.transcript_id = "trial-A";
  ev.sentence_count = 40;
  ev.sentence_scores.assign(40, 0.1);
  for (std::size_t i = 10; i <= 12; ++i) ev.sentence_scores[i] = 0.95;
  for (std::size_t i = 30; i <= 31; ++i) ev.sentence_scores[i] = 0.92;
  ev.predicted = {{"trial-A", Theme::kEmot, 10, 12, 0.95, PassageOrigin::kPredicted, true},
                  {"trial-A", Theme::kEmot, 30, 31, 0.92, PassageOrigin::kPredicted, true}};
  ev.gold.transcript_id = "trial-A";
  ev.gold.positives[Theme::kEmot] = {0, 1, 20, 21, 22};
  std::vector<TranscriptEvidence> evs = {ev};
  PipelineConfig cfg;
  f.queue = BuildQueue(evs, Theme::kEmot, cfg);
  WriteQueue(f.state / "queues" / (f.queue.queue_id + ".queue.jsonl"), f.queue);
  return f;
}

// A ReviewService plus Gateway serving on an ephemeral local port.
class LiveGateway {
 public:
  LiveGateway(const std::filesystem::path &corpus, const std::filesystem::path &state)
      : service_(corpus, state, PipelineConfig{}), gateway_(service_) {
    port_ = gateway_.Bind("127.0.0.1", 0);
    thread_ = std::thread([this] { gateway_.Run(); });
    while (!gateway_.running()) std::this_thread::yield();
  }
  ~LiveGateway() {
    gateway_.Stop();
    thread_.join();
  }
  int port() const { return port_; }
  httplib::Client Client() const { return httplib::Client("127.0.0.1", port_); }
  ReviewService &service() { return service_; }

 private:
  ReviewService service_;
  Gateway gateway_;
  int port_ = 0;
  std::thread thread_;
};

}  // namespace triage::testing

#endif  // TRIAGE_TESTS_REVIEW_FIXTURE_H_
