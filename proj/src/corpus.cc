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

#include "triage/corpus.h"

#include <algorithm>
#include <array>

#include <nlohmann/json.hpp>

#include "triage/error.h"
#include "triage/jsonl.h"
#include "triage/text.h"

namespace triage {
namespace {

constexpr std::array<std::string_view, 10> kAbbreviations = {
    "mr", "mrs", "ms", "dr", "q", "a", "vs", "st", "jr", "sr"};

bool IsAsciiAlpha(unsigned char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z');
}

// True when the '.' at `dot` closes a known abbreviation.
bool ClosesAbbreviation(std::string_view s, std::size_t dot) {
  std::size_t k = dot;
  while (k > 0 && !IsAsciiSpace(s[k - 1])) --k;
  std::string_view token = s.substr(k, dot - k);
  while (!token.empty() && !IsAsciiAlpha(static_cast<unsigned char>(token.front())))
    token.remove_prefix(1);
  return std::find(kAbbreviations.begin(), kAbbreviations.end(), token) !=
         kAbbreviations.end();
}

std::string CollapseWhitespace(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  bool in_space = false;
  for (char c : s) {
    if (IsAsciiSpace(c)) {
      in_space = true;
      continue;
    }
    if (in_space && !out.empty()) out.push_back(' ');
    in_space = false;
    out.push_back(c);
  }
  return out;
}

void EmitTrimmed(std::string_view s, std::size_t begin, std::size_t end,
                 std::vector<CharSpan> *spans) {
  while (begin < end && IsAsciiSpace(s[begin])) ++begin;
  while (end > begin && IsAsciiSpace(s[end - 1])) --end;
  if (begin < end) spans->push_back({begin, end});
}

nlohmann::json Require(const nlohmann::json &j, const char *key,
                       const std::string &where) {
  if (!j.is_object() || !j.contains(key))
    throw InputError(where + ": missing field '" + key + "'");
  return j.at(key);
}

}  // namespace

std::string NormalizeText(std::string_view raw) {
  std::string out;
  out.reserve(raw.size());
  for (char c : raw) {
    if (c >= '0' && c <= '9') continue;
    out.push_back((c >= 'A' && c <= 'Z') ? char(c - 'A' + 'a') : c);
  }
  return out;
}

bool IsWord(std::string_view token) {
  return std::any_of(token.begin(), token.end(), [](char c) {
    auto u = static_cast<unsigned char>(c);
    return IsAsciiAlpha(u) || u >= 0x80;
  });
}

std::size_t CountWords(std::string_view text) {
  std::size_t count = 0;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && IsAsciiSpace(text[i])) ++i;
    std::size_t begin = i;
    while (i < text.size() && !IsAsciiSpace(text[i])) ++i;
    if (i > begin && IsWord(text.substr(begin, i - begin))) ++count;
  }
  return count;
}

std::vector<CharSpan> SplitSentences(std::string_view s) {
  std::vector<CharSpan> spans;
  std::size_t start = 0;
  const std::size_t n = s.size();
  for (std::size_t i = 0; i < n; ++i) {
    char c = s[i];
    if (c == '.' || c == '?' || c == '!') {
      if (i + 1 < n && !IsAsciiSpace(s[i + 1])) continue;
      if (c == '.' && ClosesAbbreviation(s, i)) continue;
      EmitTrimmed(s, start, i + 1, &spans);
      start = i + 1;
    } else if (c == '\n') {
      std::size_t j = i + 1;
      while (j < n && IsAsciiSpace(s[j]) && s[j] != '\n') ++j;
      if (j < n && s[j] == '\n') {
        EmitTrimmed(s, start, i, &spans);
        start = j + 1;
        i = j;
      }
    }
  }
  EmitTrimmed(s, start, n, &spans);
  return spans;
}

Transcript SegmentTranscript(std::string_view raw_text, std::string transcript_id,
                             std::vector<std::string> defendant_aliases) {
  if (auto bad = FirstInvalidUtf8(raw_text))
    throw IngestionError("malformed UTF-8 in transcript '" + transcript_id + "'",
                         *bad);

  Transcript t;
  t.transcript_id = std::move(transcript_id);
  for (auto &alias : defendant_aliases) {
    std::string a = CollapseWhitespace(NormalizeText(alias));
    if (!a.empty() &&
        std::find(t.defendant_aliases.begin(), t.defendant_aliases.end(), a) ==
            t.defendant_aliases.end())
      t.defendant_aliases.push_back(std::move(a));
  }
  if (t.defendant_aliases.empty()) t.source_meta["aliases"] = "missing";

  const std::string normalized = NormalizeText(raw_text);
  for (const CharSpan &span : SplitSentences(normalized)) {
    std::string text = CollapseWhitespace(
        std::string_view(normalized).substr(span.begin, span.end - span.begin));
    if (CountWords(text) < 3) continue;
    t.sentences.push_back({t.sentences.size(), std::move(text), span});
  }
  return t;
}

bool IsValidTranscriptId(std::string_view id) {
  if (id.empty() || id.front() == '.') return false;
  return std::all_of(id.begin(), id.end(), [](char c) {
    return IsAsciiAlpha(static_cast<unsigned char>(c)) || (c >= '0' && c <= '9') ||
           c == '.' || c == '_' || c == '-';
  });
}

std::filesystem::path TranscriptPath(const std::filesystem::path &corpus_dir,
                                     std::string_view transcript_id) {
  return corpus_dir / (std::string(transcript_id) + ".transcript.jsonl");
}

void StoreTranscript(const Transcript &t, const std::filesystem::path &corpus_dir) {
  if (!IsValidTranscriptId(t.transcript_id))
    throw InputError("invalid transcript id '" + t.transcript_id + "'");
  std::vector<nlohmann::json> records;
  records.reserve(t.sentences.size() + 1);
  records.push_back({{"schema_version", kTranscriptSchemaVersion},
                     {"transcript_id", t.transcript_id},
                     {"defendant_aliases", t.defendant_aliases},
                     {"source_meta", t.source_meta}});
  for (const auto &s : t.sentences) {
    records.push_back({{"index", s.index},
                       {"text", s.text},
                       {"char_span", {s.char_span.begin, s.char_span.end}}});
  }
  WriteJsonLines(TranscriptPath(corpus_dir, t.transcript_id), records);
}

Transcript LoadTranscript(const std::filesystem::path &corpus_dir,
                          std::string_view transcript_id) {
  if (!IsValidTranscriptId(transcript_id))
    throw NotFoundError("transcript '" + std::string(transcript_id) + "' not found");
  const auto path = TranscriptPath(corpus_dir, transcript_id);
  if (!std::filesystem::exists(path))
    throw NotFoundError("transcript '" + std::string(transcript_id) +
                        "' not found in " + corpus_dir.string());
  const auto lines = ReadJsonLines(path);
  const std::string where = path.string();
  if (lines.empty()) throw InputError(where + ": missing header record");

  Transcript t;
  try {
    const auto &header = lines.front().value;
    int version = Require(header, "schema_version", where).get<int>();
    if (version != kTranscriptSchemaVersion)
      throw SchemaVersionError(version, kTranscriptSchemaVersion);
    t.transcript_id = Require(header, "transcript_id", where).get<std::string>();
    t.defendant_aliases =
        Require(header, "defendant_aliases", where).get<std::vector<std::string>>();
    if (header.contains("source_meta"))
      t.source_meta = header.at("source_meta").get<std::map<std::string, std::string>>();

    for (std::size_t k = 1; k < lines.size(); ++k) {
      const auto &rec = lines[k].value;
      const std::string at = where + " line " + std::to_string(lines[k].line);
      Sentence s;
      s.index = Require(rec, "index", at).get<std::size_t>();
      s.text = Require(rec, "text", at).get<std::string>();
      auto span = Require(rec, "char_span", at).get<std::vector<std::size_t>>();
      if (span.size() != 2 || span[0] > span[1])
        throw InputError(at + ": char_span must be [begin, end]");
      s.char_span = {span[0], span[1]};
      if (s.index != t.sentences.size())
        throw InputError(at + ": sentence index " + std::to_string(s.index) +
                         " breaks contiguity");
      t.sentences.push_back(std::move(s));
    }
  } catch (const nlohmann::json::exception &e) {
    throw InputError(where + ": " + e.what());
  }
  if (t.transcript_id != transcript_id)
    throw InputError(where + ": header names transcript '" + t.transcript_id + "'");
  return t;
}

std::vector<std::string> ListTranscripts(const std::filesystem::path &corpus_dir) {
  static constexpr std::string_view kSuffix = ".transcript.jsonl";
  std::vector<std::string> ids;
  if (!std::filesystem::is_directory(corpus_dir)) return ids;
  for (const auto &entry : std::filesystem::directory_iterator(corpus_dir)) {
    const std::string name = entry.path().filename().string();
    if (name.size() > kSuffix.size() &&
        name.compare(name.size() - kSuffix.size(), kSuffix.size(), kSuffix) == 0)
      ids.push_back(name.substr(0, name.size() - kSuffix.size()));
  }
  std::sort(ids.begin(), ids.end());
  return ids;
}

}  // namespace triage
