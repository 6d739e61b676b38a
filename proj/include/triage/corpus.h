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

#ifndef TRIAGE_CORPUS_H_
#define TRIAGE_CORPUS_H_

#include <cstddef>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace triage {

inline constexpr int kTranscriptSchemaVersion = 1;

// Half-open byte range [begin, end) into the normalized source text.
struct CharSpan {
  std::size_t begin = 0;
  std::size_t end = 0;
  bool operator==(const CharSpan &) const = default;
};

struct Sentence {
  std::size_t index = 0;
  std::string text;
  CharSpan char_span;
  bool operator==(const Sentence &) const = default;
};

// A segmented transcript. Sentences are lowercase, digit-free, have at least
// three words and are indexed 0..N-1 in source order. Immutable once built.
struct Transcript {
  std::string transcript_id;
  std::vector<std::string> defendant_aliases;
  std::vector<Sentence> sentences;
  std::map<std::string, std::string> source_meta;

  std::size_t size() const { return sentences.size(); }
  bool operator==(const Transcript &) const = default;
};

// Lowercases ASCII letters and deletes ASCII digits; nothing else changes.
std::string NormalizeText(std::string_view raw);

// A word is a whitespace-delimited token holding at least one alphabetic
// character (ASCII letter or any non-ASCII code point).
bool IsWord(std::string_view token);
std::size_t CountWords(std::string_view text);

// Splits normalized text into sentence spans. A boundary follows '.', '?'
// or '!' when the next byte is whitespace or the end of text, except a '.'
// closing one of the abbreviations mr, mrs, ms, dr, q, a, vs, st, jr, sr.
// A blank line (two newlines separated only by whitespace) also ends a
// sentence. Returned spans are trimmed of surrounding whitespace and never
// empty.
std::vector<CharSpan> SplitSentences(std::string_view normalized);

// Normalize, split, drop sentences with fewer than three words and reindex.
// Sentence text is the span's slice with runs of whitespace collapsed to a
// single space. Throws IngestionError on malformed UTF-8. Aliases are
// lowercased; an empty alias list is recorded as source_meta["aliases"] =
// "missing" rather than rejected.
Transcript SegmentTranscript(std::string_view raw_text,
                             std::string transcript_id,
                             std::vector<std::string> defendant_aliases);

// Transcript ids become file names, so they are restricted to
// [A-Za-z0-9._-] and must not start with '.'.
bool IsValidTranscriptId(std::string_view id);

std::filesystem::path TranscriptPath(const std::filesystem::path &corpus_dir,
                                     std::string_view transcript_id);

// One file per transcript: a header record followed by one record per
// sentence. load throws NotFoundError for unknown ids, SchemaVersionError on
// a version mismatch and InputError on malformed files.
void StoreTranscript(const Transcript &t, const std::filesystem::path &corpus_dir);
Transcript LoadTranscript(const std::filesystem::path &corpus_dir,
                          std::string_view transcript_id);

// Ids of every stored transcript, sorted.
std::vector<std::string> ListTranscripts(const std::filesystem::path &corpus_dir);

}  // namespace triage

#endif  // TRIAGE_CORPUS_H_
