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

#include "httplib.h"
#include "triage/error.h"
#include "triage/jsonl.h"
#include "triage/scorer.h"

namespace triage {

HttpScorer::HttpScorer(std::string base_url, std::chrono::milliseconds timeout)
    : timeout_(timeout) {
  std::tie(scheme_host_port_, path_prefix_) = SplitBaseUrl(base_url);
}

ScoreResponse HttpScorer::Score(Theme theme, std::span<const Paragraph> paragraphs) const {
  std::vector<std::string> ids;
  nlohmann::json body = {{"theme", ThemeCode(theme)}, {"paragraphs", nlohmann::json::array()}};
  for (const auto &p : paragraphs) {
    ids.push_back(p.id);
    body["paragraphs"].push_back({{"id", p.id}, {"text", p.text}});
  }

  httplib::Client client(scheme_host_port_);
  client.set_connection_timeout(timeout_);
  client.set_read_timeout(timeout_);
  client.set_write_timeout(timeout_);
  auto res = client.Post(path_prefix_ + "/score", DumpCompact(body), "application/json");
  if (!res)
    throw TransportError("scorer request failed: " + httplib::to_string(res.error()), ids);
  if (res->status < 200 || res->status >= 300)
    throw TransportError("scorer answered HTTP " + std::to_string(res->status), ids);

  nlohmann::json decoded;
  try {
    decoded = nlohmann::json::parse(res->body);
  } catch (const nlohmann::json::parse_error &) {
    throw TransportError("scorer response is not JSON", ids);
  }
  return ParseScoreResponse(decoded, paragraphs);
}

}  // namespace triage
