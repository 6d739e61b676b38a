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

#ifndef TRIAGE_GATEWAY_H_
#define TRIAGE_GATEWAY_H_

#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "triage/config.h"
#include "triage/corpus.h"
#include "triage/decision_store.h"
#include "triage/triage.h"

namespace httplib {
class Server;
}

namespace triage {

// Where the service keeps its files:
//   <state>/queues/*.queue.jsonl   review queues (server-side, unblinded)
//   <state>/decisions.jsonl        append-only decision log
//   <state>/reports/metrics.jsonl  optional metric reports
struct StateLayout {
  std::filesystem::path root;
  std::filesystem::path queues_dir() const { return root / "queues"; }
  std::filesystem::path decisions_log() const { return root / "decisions.jsonl"; }
  std::filesystem::path metrics_report() const { return root / "reports" / "metrics.jsonl"; }
};

// TRIAGE_STATE_DIR when set, otherwise `fallback`.
std::filesystem::path ResolveStateDir(const std::filesystem::path &fallback);

struct SessionState {
  std::string queue_id;
  std::size_t cursor = 0;  // index of the next pending item, or queue size
  std::vector<std::string> reviewer_ids;
  PipelineConfig config;
};

// The review workflow behind the HTTP endpoints. Every view returned before
// a decision is committed is built from an explicit whitelist of fields:
// side, scores, origin and expert labels never appear in it.
class ReviewService {
 public:
  // Loads queues, the decision log and every transcript the queues
  // reference. Any unreadable piece throws StateCorruptError.
  ReviewService(std::filesystem::path corpus_dir, std::filesystem::path state_dir,
                PipelineConfig cfg);

  nlohmann::json ListQueues() const;
  nlohmann::json NextItem(const std::string &queue_id, const std::string &reviewer);
  nlohmann::json ItemView(const std::string &item_id, std::optional<std::size_t> context);
  // Up to `extra` sentences on each side of the passage, clipped to the
  // transcript.
  nlohmann::json ExpandContext(const std::string &item_id, std::size_t extra) const;
  nlohmann::json CommitDecision(const std::string &item_id, const nlohmann::json &body,
                                const std::string &reviewer_header);
  nlohmann::json AgreementReport(const std::string &theme_code) const;
  nlohmann::json MetricsReport() const;

  // The committed record currently in force for an item, if any.
  std::optional<AdjudicationRecord> CurrentRecord(const std::string &item_id) const;

  const DecisionStore &store() const { return *store_; }

 private:
  struct ItemRef {
    const ReviewQueue *queue;
    const DisagreementItem *item;
  };
  const ItemRef &Find(const std::string &item_id) const;
  nlohmann::json Sentences(const Transcript &t, std::size_t begin, std::size_t end) const;

  std::filesystem::path corpus_dir_;
  StateLayout state_;
  PipelineConfig cfg_;
  std::vector<std::unique_ptr<ReviewQueue>> queues_;
  std::map<std::string, ItemRef> items_;
  std::map<std::string, Transcript> transcripts_;
  std::unique_ptr<DecisionStore> store_;
  std::mutex sessions_mu_;
  std::map<std::string, SessionState> sessions_;
};

// HTTP front end. All responses are JSON. Errors map to 400 (bad input),
// 404 (unknown id), 409 (already decided) and 500.
class Gateway {
 public:
  explicit Gateway(ReviewService &service,
                   std::optional<std::filesystem::path> static_dir = std::nullopt);
  ~Gateway();

  Gateway(const Gateway &) = delete;
  Gateway &operator=(const Gateway &) = delete;

  // Binds the listening socket; port 0 picks a free port. Throws Error when
  // the port cannot be bound. Returns the bound port.
  int Bind(const std::string &host, int port);
  // Serves until Stop(). Requires a successful Bind().
  void Run();
  void Stop();
  bool running() const;

 private:
  void Routes();
  ReviewService &service_;
  std::unique_ptr<httplib::Server> server_;
};

}  // namespace triage

#endif  // TRIAGE_GATEWAY_H_
