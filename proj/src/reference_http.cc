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
#include "triage/reference.h"
#include "triage/scorer.h"

namespace triage {

HttpResolver::HttpResolver(std::string base_url, std::chrono::milliseconds timeout)
    : timeout_(timeout) {
  std::tie(scheme_host_port_, path_prefix_) = SplitBaseUrl(base_url);
}

ReferenceVerdict HttpResolver::Resolve(const ReferenceQuery &query) const {
  if (query.defendant_aliases.empty()) throw ConfigError("defendant alias list is empty");
  nlohmann::json body = {{"context_sentences", query.context_sentences},
                         {"target_index", query.target_index},
                         {"defendant_aliases", query.defendant_aliases}};
  httplib::Client client(scheme_host_port_);
  client.set_connection_timeout(timeout_);
  client.set_read_timeout(timeout_);
  auto res = client.Post(path_prefix_ + "/resolve", DumpCompact(body), "application/json");
  if (!res)
    throw TransportError("resolver request failed: " + httplib::to_string(res.error()), {});
  if (res->status < 200 || res->status >= 300)
    throw TransportError("resolver answered HTTP " + std::to_string(res->status), {});

  nlohmann::json decoded;
  try {
    decoded = nlohmann::json::parse(res->body);
  } catch (const nlohmann::json::parse_error &) {
    throw TransportError("resolver response is not JSON", {});
  }
  if (!decoded.is_object() || !decoded.contains("mentions_defendant") ||
      !decoded["mentions_defendant"].is_boolean() || !decoded.contains("rule") ||
      !decoded["rule"].is_string())
    throw TransportError("malformed /resolve response", {});
  auto rule = ParseRule(decoded["rule"].get<std::string>());
  if (!rule) throw ProtocolError("resolver returned unknown rule '" +
                                 decoded["rule"].get<std::string>() + "'");
  ReferenceVerdict v;
  v.rule = *rule;
  v.mentions_defendant = decoded["mentions_defendant"].get<bool>();
  if (v.mentions_defendant != (v.rule != ReferenceRule::kNone))
    throw ProtocolError("resolver verdict contradicts its rule");
  return v;
}

}  // namespace triage
