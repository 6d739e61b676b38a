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

#ifndef TRIAGE_CONFIG_H_
#define TRIAGE_CONFIG_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>

#include <nlohmann/json.hpp>

namespace triage {

// Every tunable constant of the pipeline lives here. Defaults reproduce the
// published setup: 10-sentence windows with stride 1, passages grouped above
// 0.5 and gated above 0.9, 3:1 negative undersampling, a 20-sentence
// coreference context and 3 FP / 6-8 FN review items per transcript.
struct PipelineConfig {
  std::size_t window_size = 10;
  std::size_t step = 1;
  double group_threshold = 0.5;
  double gate_threshold = 0.9;
  std::size_t neg_pos_ratio = 3;
  std::uint64_t rng_seed = 0;
  std::size_t fn_queue_min = 6;
  std::size_t fn_queue_max = 8;
  std::size_t fp_queue_size = 3;
  std::size_t context_back = 19;

  std::size_t top_k = 3;
  // Sentences shown on each side of a review passage before any expansion.
  std::size_t display_context = 5;

  // Throws ConfigError naming the first violated constraint.
  void Validate() const;

  bool operator==(const PipelineConfig &) const = default;
};

nlohmann::json ToJson(const PipelineConfig &cfg);

// Missing keys keep their defaults; unknown keys are rejected.
PipelineConfig ConfigFromJson(const nlohmann::json &j);

PipelineConfig LoadConfig(const std::filesystem::path &path);

}  // namespace triage

#endif  // TRIAGE_CONFIG_H_
