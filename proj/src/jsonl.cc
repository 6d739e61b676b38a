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

#include "triage/jsonl.h"

#include <fcntl.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>
#include <fstream>

#include "triage/error.h"

namespace triage {

std::string DumpCompact(const nlohmann::json &j) {
  // Replace invalid UTF-8 instead of throwing mid-write.
  return j.dump(-1, ' ', false, nlohmann::json::error_handler_t::replace);
}

std::vector<JsonLine> ReadJsonLines(std::istream &in, const std::string &source) {
  std::vector<JsonLine> out;
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    try {
      out.push_back({number, nlohmann::json::parse(line)});
    } catch (const nlohmann::json::parse_error &e) {
      throw InputError(source + " line " + std::to_string(number) +
                       ": malformed record: " + e.what());
    }
  }
  return out;
}

std::vector<JsonLine> ReadJsonLines(const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw NotFoundError("cannot open " + path.string());
  return ReadJsonLines(in, path.string());
}

void WriteJsonLines(const std::filesystem::path &path,
                    const std::vector<nlohmann::json> &records) {
  if (path.has_parent_path())
    std::filesystem::create_directories(path.parent_path());
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + tmp.string());
    for (const auto &r : records) out << DumpCompact(r) << '\n';
    out.flush();
    if (!out) throw Error("write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

void AppendJsonLineDurable(const std::filesystem::path &path,
                           const nlohmann::json &record) {
  if (path.has_parent_path())
    std::filesystem::create_directories(path.parent_path());
  std::string line = DumpCompact(record);
  line.push_back('\n');
  int fd = ::open(path.c_str(), O_WRONLY | O_CREAT | O_APPEND | O_CLOEXEC, 0644);
  if (fd < 0)
    throw Error("cannot open " + path.string() + ": " + std::strerror(errno));
  const char *p = line.data();
  std::size_t left = line.size();
  while (left > 0) {
    ssize_t n = ::write(fd, p, left);
    if (n < 0) {
      if (errno == EINTR) continue;
      int err = errno;
      ::close(fd);
      throw Error("append to " + path.string() + " failed: " + std::strerror(err));
    }
    p += n;
    left -= static_cast<std::size_t>(n);
  }
  if (::fsync(fd) != 0) {
    int err = errno;
    ::close(fd);
    throw Error("fsync of " + path.string() + " failed: " + std::strerror(err));
  }
  ::close(fd);
}

}  // namespace triage
