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

#include "triage/gateway.h"

#include <algorithm>
#include <cstdlib>

#include "httplib.h"
#include "triage/error.h"
#include "triage/evaluation.h"
#include "triage/jsonl.h"

namespace triage {
namespace {

constexpr const char *kReviewerHeader = "X-Reviewer-Id";

std::vector<ReasonCategory> Categories(const nlohmann::json &j) {
  std::vector<ReasonCategory> out;
  if (!j.is_array()) throw ValidationError("secondary_categories must be an array");
  for (const auto &c : j) {
    if (!c.is_string()) throw ValidationError("secondary_categories must hold strings");
    out.push_back(ParseReasonCategory(c.get<std::string>()));
  }
  return out;
}

}  // namespace

std::filesystem::path ResolveStateDir(const std::filesystem::path &fallback) {
  if (const char *env = std::getenv("TRIAGE_STATE_DIR"); env && *env) return env;
  return fallback;
}

ReviewService::ReviewService(std::filesystem::path corpus_dir,
                             std::filesystem::path state_dir, PipelineConfig cfg)
    : corpus_dir_(std::move(corpus_dir)), state_{std::move(state_dir)}, cfg_(cfg) {
  cfg_.Validate();
  std::filesystem::create_directories(state_.root);

  std::vector<std::filesystem::path> queue_files;
  if (std::filesystem::is_directory(state_.queues_dir()))
    for (const auto &e : std::filesystem::directory_iterator(state_.queues_dir()))
      if (e.path().filename().string().ends_with(".queue.jsonl"))
        queue_files.push_back(e.path());
  std::sort(queue_files.begin(), queue_files.end());

  for (const auto &file : queue_files) {
    std::unique_ptr<ReviewQueue> q;
    try {
      q = std::make_unique<ReviewQueue>(ReadQueue(file));
    } catch (const Error &e) {
      throw StateCorruptError("queue file " + file.string() + ": " + e.what());
    }
    for (const auto &other : queues_)
      if (other->queue_id == q->queue_id)
        throw StateCorruptError("duplicate queue id '" + q->queue_id + "' in " + file.string());
    for (const auto &item : q->items) {
      if (items_.count(item.item_id))
        throw StateCorruptError("duplicate item id '" + item.item_id + "'");
      if (!transcripts_.count(item.transcript_id)) {
        try {
          transcripts_.emplace(item.transcript_id, LoadTranscript(corpus_dir_, item.transcript_id));
        } catch (const Error &e) {
          throw StateCorruptError("queue '" + q->queue_id + "' references transcript '" +
                                  item.transcript_id + "': " + e.what());
        }
      }
      const Transcript &t = transcripts_.at(item.transcript_id);
      if (item.passage.end_sentence >= t.size())
        throw StateCorruptError("item '" + item.item_id + "' lies outside transcript '" +
                                item.transcript_id + "'");
      items_[item.item_id] = {q.get(), &item};
    }
    queues_.push_back(std::move(q));
  }

  store_ = std::make_unique<DecisionStore>(state_.decisions_log());
  for (const auto &q : queues_) store_->RegisterQueue(*q);
}

const ReviewService::ItemRef &ReviewService::Find(const std::string &item_id) const {
  auto it = items_.find(item_id);
  if (it == items_.end()) throw NotFoundError("unknown item '" + item_id + "'");
  return it->second;
}

nlohmann::json ReviewService::Sentences(const Transcript &t, std::size_t begin,
                                        std::size_t end) const {
  nlohmann::json out = nlohmann::json::array();
  for (std::size_t i = begin; i <= end && i < t.size(); ++i)
    out.push_back({{"index", i}, {"text", t.sentences[i].text}});
  return out;
}

nlohmann::json ReviewService::ListQueues() const {
  nlohmann::json out = nlohmann::json::array();
  for (const auto &q : queues_) {
    std::size_t decided = 0;
    for (const auto &item : q->items)
      if (store_->Status(item.item_id) == ItemStatus::kDecided) ++decided;
    out.push_back({{"queue_id", q->queue_id},
                   {"theme", ThemeCode(q->theme)},
                   {"pending_count", q->items.size() - decided},
                   {"decided_count", decided}});
  }
  return out;
}

nlohmann::json ReviewService::NextItem(const std::string &queue_id, const std::string &reviewer) {
  auto q = std::find_if(queues_.begin(), queues_.end(),
                        [&](const auto &x) { return x->queue_id == queue_id; });
  if (q == queues_.end()) throw NotFoundError("unknown queue '" + queue_id + "'");
  const auto &items = (*q)->items;
  std::size_t cursor = 0;
  while (cursor < items.size() &&
         store_->Status(items[cursor].item_id) == ItemStatus::kDecided)
    ++cursor;

  SessionState session;
  {
    std::lock_guard lock(sessions_mu_);
    SessionState &s = sessions_[reviewer + "\n" + queue_id];
    s.queue_id = queue_id;
    s.cursor = cursor;
    if (!reviewer.empty() &&
        std::find(s.reviewer_ids.begin(), s.reviewer_ids.end(), reviewer) == s.reviewer_ids.end())
      s.reviewer_ids.push_back(reviewer);
    s.config = cfg_;
    session = s;
  }
  nlohmann::json out = {{"session",
                         {{"queue_id", session.queue_id},
                          {"cursor", session.cursor},
                          {"total", items.size()},
                          {"reviewer_ids", session.reviewer_ids}}},
                        {"item", nullptr}};
  if (cursor < items.size()) out["item"] = ItemView(items[cursor].item_id, std::nullopt);
  return out;
}

nlohmann::json ReviewService::ItemView(const std::string &item_id,
                                       std::optional<std::size_t> context) {
  const ItemRef &ref = Find(item_id);
  const DisagreementItem &item = *ref.item;
  const Transcript &t = transcripts_.at(item.transcript_id);
  const Passage &p = item.passage;

  std::size_t begin = item.context.begin, end = item.context.end;
  if (context) {
    begin = p.start_sentence > *context ? p.start_sentence - *context : 0;
    end = std::min(t.size() - 1, p.end_sentence + std::min(*context, t.size()));
  }

  const bool decided = store_->Status(item_id) == ItemStatus::kDecided;
  if (!decided) store_->MarkOpened(item_id, Now());

  nlohmann::json view = {
      {"item_id", item.item_id},
      {"queue_id", ref.queue->queue_id},
      {"theme", ThemeCode(item.theme)},
      {"transcript_id", item.transcript_id},
      {"status", decided ? "decided" : "pending"},
      {"passage",
       {{"start", p.start_sentence},
        {"end", p.end_sentence},
        {"sentences", Sentences(t, p.start_sentence, p.end_sentence)}}},
      {"context",
       {{"begin", begin},
        {"end", end},
        {"before", p.start_sentence > begin ? Sentences(t, begin, p.start_sentence - 1)
                                            : nlohmann::json::array()},
        {"after", Sentences(t, p.end_sentence + 1, end)}}}};
  if (decided) {
    // Post-commit only: the record carries the revealed side.
    view["decision"] = ToJson(*store_->Current(item_id));
  }
  return view;
}

nlohmann::json ReviewService::ExpandContext(const std::string &item_id, std::size_t extra) const {
  const ItemRef &ref = Find(item_id);
  const Transcript &t = transcripts_.at(ref.item->transcript_id);
  const Passage &p = ref.item->passage;
  const std::size_t begin = p.start_sentence > extra ? p.start_sentence - extra : 0;
  const std::size_t end = std::min(t.size() - 1, p.end_sentence + std::min(extra, t.size()));
  return {{"item_id", item_id},
          {"extra", extra},
          {"begin", begin},
          {"end", end},
          {"sentences", Sentences(t, begin, end)}};
}

nlohmann::json ReviewService::CommitDecision(const std::string &item_id,
                                             const nlohmann::json &body,
                                             const std::string &reviewer_header) {
  Find(item_id);
  if (!body.is_object()) throw ValidationError("decision body must be a JSON object");
  DecisionRequest req;
  req.item_id = item_id;
  try {
    if (!body.contains("decision")) throw ValidationError("missing decision");
    req.decision = ParseDecision(body.at("decision").get<std::string>());
    if (!body.contains("reason_category")) throw ValidationError("missing reason_category");
    req.reason_category = ParseReasonCategory(body.at("reason_category").get<std::string>());
    req.reason_text = body.value("reason_text", std::string());
    if (body.contains("secondary_categories"))
      req.secondary_categories = Categories(body.at("secondary_categories"));
    if (body.contains("reviewers"))
      req.reviewers = body.at("reviewers").get<std::vector<std::string>>();
    if (req.reviewers.empty() && !reviewer_header.empty()) req.reviewers = {reviewer_header};
    req.client_token = body.value("client_token", std::string());
    if (body.contains("started_at") && !body.at("started_at").is_null())
      req.started_at = ParseTimestamp(body.at("started_at").get<std::string>());
  } catch (const nlohmann::json::exception &e) {
    throw ValidationError(std::string("malformed decision body: ") + e.what());
  }
  return ToJson(store_->Commit(req));
}

std::optional<AdjudicationRecord> ReviewService::CurrentRecord(const std::string &item_id) const {
  return store_->Current(item_id);
}

nlohmann::json ReviewService::AgreementReport(const std::string &theme_code) const {
  const auto records = store_->Records();
  if (theme_code.empty()) {
    nlohmann::json out = nlohmann::json::array();
    for (Theme t : kAllThemes) out.push_back(ToJson(MakeAgreementReport(records, t)));
    return out;
  }
  return ToJson(MakeAgreementReport(records, ThemeFromCode(theme_code)));
}

nlohmann::json ReviewService::MetricsReport() const {
  nlohmann::json out = nlohmann::json::array();
  if (!std::filesystem::exists(state_.metrics_report())) return out;
  for (auto &line : ReadJsonLines(state_.metrics_report())) out.push_back(std::move(line.value));
  return out;
}

// ---------------------------------------------------------------------------

Gateway::Gateway(ReviewService &service, std::optional<std::filesystem::path> static_dir)
    : service_(service), server_(std::make_unique<httplib::Server>()) {
  // SO_REUSEADDR only: httplib's default SO_REUSEPORT would let a second
  // gateway share the port with a live one.
  server_->set_socket_options([](auto sock) {
    int yes = 1;
    setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, &yes, sizeof(yes));
  });
  Routes();
  if (static_dir) server_->set_mount_point("/ui", static_dir->string());
}

Gateway::~Gateway() { Stop(); }

void Gateway::Routes() {
  using httplib::Request;
  using httplib::Response;
  auto &srv = *server_;

  auto reply = [](Response &res, int status, const nlohmann::json &body) {
    res.status = status;
    res.set_content(DumpCompact(body), "application/json");
  };
  // Wraps a handler so library errors become JSON error responses.
  auto guarded = [this, reply](auto fn) {
    return [this, reply, fn](const Request &req, Response &res) {
      try {
        fn(req, res);
      } catch (const ConflictError &e) {
        nlohmann::json body = {{"error", e.what()}, {"code", "conflict"}};
        if (auto rec = service_.CurrentRecord(req.matches[1])) body["record"] = ToJson(*rec);
        reply(res, 409, body);
      } catch (const NotFoundError &e) {
        reply(res, 404, {{"error", e.what()}, {"code", "not_found"}});
      } catch (const InputError &e) {
        reply(res, 400, {{"error", e.what()}, {"code", "invalid"}});
      } catch (const std::exception &e) {
        reply(res, 500, {{"error", e.what()}, {"code", "internal"}});
      }
    };
  };
  auto size_param = [](const Request &req, const char *key) -> std::optional<std::size_t> {
    if (!req.has_param(key)) return std::nullopt;
    const std::string v = req.get_param_value(key);
    if (v.empty() || v.find_first_not_of("0123456789") != std::string::npos || v.size() > 9)
      throw ValidationError(std::string(key) + " must be a non-negative integer");
    return static_cast<std::size_t>(std::stoul(v));
  };

  srv.Get("/queues", guarded([this, reply](const Request &, Response &res) {
            reply(res, 200, service_.ListQueues());
          }));
  srv.Get(R"(/queues/([^/]+)/next)", guarded([this, reply](const Request &req, Response &res) {
            reply(res, 200, service_.NextItem(req.matches[1], req.get_header_value(kReviewerHeader)));
          }));
  srv.Get(R"(/items/([^/]+)/context)",
          guarded([this, reply, size_param](const Request &req, Response &res) {
            auto extra = size_param(req, "extra");
            reply(res, 200, service_.ExpandContext(req.matches[1], extra.value_or(0)));
          }));
  srv.Get(R"(/items/([^/]+))", guarded([this, reply, size_param](const Request &req, Response &res) {
            reply(res, 200, service_.ItemView(req.matches[1], size_param(req, "context")));
          }));
  srv.Post(R"(/items/([^/]+)/decision)",
           guarded([this, reply](const Request &req, Response &res) {
             nlohmann::json body;
             try {
               body = nlohmann::json::parse(req.body);
             } catch (const nlohmann::json::parse_error &) {
               throw ValidationError("decision body is not JSON");
             }
             reply(res, 200,
                   service_.CommitDecision(req.matches[1], body,
                                           req.get_header_value(kReviewerHeader)));
           }));
  srv.Get("/reports/agreement", guarded([this, reply](const Request &req, Response &res) {
            reply(res, 200, service_.AgreementReport(req.get_param_value("theme")));
          }));
  srv.Get("/reports/metrics", guarded([this, reply](const Request &, Response &res) {
            reply(res, 200, service_.MetricsReport());
          }));
}

int Gateway::Bind(const std::string &host, int port) {
  int bound = port;
  if (port == 0) {
    bound = server_->bind_to_any_port(host);
    if (bound < 0) throw Error("cannot bind " + host + " to any port");
  } else if (!server_->bind_to_port(host, port)) {
    throw Error("cannot bind " + host + ":" + std::to_string(port) + " (port in use?)");
  }
  return bound;
}

void Gateway::Run() { server_->listen_after_bind(); }

void Gateway::Stop() {
  if (server_) server_->stop();
}

bool Gateway::running() const { return server_->is_running(); }

}  // namespace triage
