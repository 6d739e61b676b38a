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

#include "triage/config.h"

#include <fstream>
#include <string>

#include "triage/error.h"

namespace triage {

void PipelineConfig::Validate() const {
  if (window_size == 0) throw ConfigError("window_size must be positive");
  if (step == 0 || step > window_size)
    throw ConfigError("step must satisfy 0 < step <= window_size");
  if (!(0.0 <= group_threshold && group_threshold <= gate_threshold &&
        gate_threshold <= 1.0))
    throw ConfigError(
        "thresholds must satisfy 0 <= group_threshold <= gate_threshold <= 1");
  if (neg_pos_ratio < 1) throw ConfigError("neg_pos_ratio must be >= 1");
  if (fn_queue_min > fn_queue_max)
    throw ConfigError("fn_queue_min must not exceed fn_queue_max");
  if (top_k == 0) throw ConfigError("top_k must be positive");
}

nlohmann::json ToJson(const PipelineConfig &cfg) {
  return {
      {"window_size", cfg.window_size},
      {"step", cfg.step},
      {"group_threshold", cfg.group_threshold},
      {"gate_threshold", cfg.gate_threshold},
      {"neg_pos_ratio", cfg.neg_pos_ratio},
      {"rng_seed", cfg.rng_seed},
      {"fn_queue_min", cfg.fn_queue_min},
      {"fn_queue_max", cfg.fn_queue_max},
      {"fp_queue_size", cfg.fp_queue_size},
      {"context_back", cfg.context_back},
      {"top_k", cfg.top_k},
      {"display_context", cfg.display_context},
  };
}

PipelineConfig ConfigFromJson(const nlohmann::json &j) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  PipelineConfig cfg;
  for (const auto &[key, value] : j.items()) {
    try {
      if (key == "window_size") cfg.window_size = value.get<std::size_t>();
      else if (key == "step") cfg.step = value.get<std::size_t>();
      else if (key == "group_threshold") cfg.group_threshold = value.get<double>();
      else if (key == "gate_threshold") cfg.gate_threshold = value.get<double>();
      else if (key == "neg_pos_ratio") cfg.neg_pos_ratio = value.get<std::size_t>();
      else if (key == "rng_seed") cfg.rng_seed = value.get<std::uint64_t>();
      else if (key == "fn_queue_min") cfg.fn_queue_min = value.get<std::size_t>();
      else if (key == "fn_queue_max") cfg.fn_queue_max = value.get<std::size_t>();
      else if (key == "fp_queue_size") cfg.fp_queue_size = value.get<std::size_t>();
      else if (key == "context_back") cfg.context_back = value.get<std::size_t>();
      else if (key == "top_k") cfg.top_k = value.get<std::size_t>();
      else if (key == "display_context") cfg.display_context = value.get<std::size_t>();
      else throw ConfigError("unknown config key '" + key + "'");
    } catch (const nlohmann::json::exception &e) {
      throw ConfigError("config key '" + key + "': " + e.what());
    }
  }
  cfg.Validate();
  return cfg;
}

PipelineConfig LoadConfig(const std::filesystem::path &path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception &e) {
    throw ConfigError("config file " + path.string() + ": " + e.what());
  }
  return ConfigFromJson(j);
}

}  // namespace triage
