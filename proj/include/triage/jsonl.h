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

#ifndef TRIAGE_JSONL_H_
#define TRIAGE_JSONL_H_

#include <cstddef>
#include <filesystem>
#include <istream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace triage {

// One parsed line of a line-delimited record file. `line` is 1-based.
struct JsonLine {
  std::size_t line;
  nlohmann::json value;
};

// Parses every non-blank line. A line that is not valid JSON throws
// InputError naming `source` and the line number.
std::vector<JsonLine> ReadJsonLines(std::istream &in, const std::string &source);
std::vector<JsonLine> ReadJsonLines(const std::filesystem::path &path);

// Writes records to a temporary sibling and renames it over `path`, so
// readers never observe a half-written file.
void WriteJsonLines(const std::filesystem::path &path,
                    const std::vector<nlohmann::json> &records);

// Appends one record and flushes it to stable storage before returning.
void AppendJsonLineDurable(const std::filesystem::path &path,
                           const nlohmann::json &record);

std::string DumpCompact(const nlohmann::json &j);

}  // namespace triage

#endif  // TRIAGE_JSONL_H_
