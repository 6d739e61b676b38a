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

#include <gtest/gtest.h>

#include <cctype>
#include <random>
#include <sstream>

#include "test_support.h"
#include "triage/error.h"
#include "triage/jsonl.h"

namespace triage {
namespace {

using testing::ReadFile;
using testing::TempDir;

std::vector<std::string> Texts(const Transcript &t) {
  std::vector<std::string> out;
  for (const auto &s : t.sentences) out.push_back(s.text);
  return out;
}

TEST(Normalize, LowercasesAndDeletesDigitsOnly) {
  EXPECT_EQ(NormalizeText("She paid $100, ON 3/4."), "she paid $, on /.");
  EXPECT_EQ(NormalizeText("Ünïcode 7"), "Ünïcode ");
}

TEST(Words, NeedAnAlphabeticCharacter) {
  EXPECT_TRUE(IsWord("a."));
  EXPECT_TRUE(IsWord("--cr-."));
  EXPECT_TRUE(IsWord("é"));
  EXPECT_FALSE(IsWord("$"));
  EXPECT_FALSE(IsWord(",.?"));
  EXPECT_EQ(CountWords("she paid $ dollars."), 3u);
  EXPECT_EQ(CountWords("   "), 0u);
}

TEST(Segment, DropsShortSentencesAndDigits) {
  auto t = SegmentTranscript("The dog barked loudly. No. She paid 100 dollars.", "t", {"x"});
  EXPECT_EQ(Texts(t), (std::vector<std::string>{"the dog barked loudly.", "she paid dollars."}));
  ASSERT_EQ(t.size(), 2u);
  EXPECT_EQ(t.sentences[0].index, 0u);
  EXPECT_EQ(t.sentences[1].index, 1u);
}

TEST(Segment, EmptyInputGivesEmptyTranscript) {
  auto t = SegmentTranscript("", "empty", {"x"});
  EXPECT_EQ(t.size(), 0u);
  EXPECT_EQ(t.transcript_id, "empty");
}

TEST(Segment, CharSpansPointIntoNormalizedText) {
  const std::string raw = "The dog barked loudly. No. She paid 100 dollars.";
  const std::string norm = NormalizeText(raw);
  auto t = SegmentTranscript(raw, "t", {"x"});
  EXPECT_EQ(norm.substr(t.sentences[0].char_span.begin,
                        t.sentences[0].char_span.end - t.sentences[0].char_span.begin),
            "the dog barked loudly.");
  // Digit deletion leaves a double space in the slice; text collapses it.
  EXPECT_EQ(norm.substr(t.sentences[1].char_span.begin,
                        t.sentences[1].char_span.end - t.sentences[1].char_span.begin),
            "she paid  dollars.");
}

TEST(Segment, AbbreviationsDoNotSplit) {
  auto t = SegmentTranscript("Q. Did Mr. Brown see Dr. Who? A. He did not.", "t", {"x"});
  EXPECT_EQ(Texts(t), (std::vector<std::string>{"q. did mr. brown see dr. who?",
                                                "a. he did not."}));
}

TEST(Segment, BlankLineEndsSentence) {
  auto t = SegmentTranscript("first line has words\n  \t\nsecond line has words", "t", {"x"});
  EXPECT_EQ(Texts(t), (std::vector<std::string>{"first line has words",
                                                "second line has words"}));
}

TEST(Segment, SingleNewlineDoesNotSplit) {
  auto t = SegmentTranscript("one two\nthree four.", "t", {"x"});
  EXPECT_EQ(Texts(t), (std::vector<std::string>{"one two three four."}));
}

TEST(Segment, PunctuationNeedsFollowingWhitespace) {
  auto t = SegmentTranscript("see file.txt for more. ok then now", "t", {"x"});
  EXPECT_EQ(Texts(t), (std::vector<std::string>{"see file.txt for more.", "ok then now"}));
}

TEST(Segment, AliasesLowercasedAndMissingRecorded) {
  auto t = SegmentTranscript("words words words.", "t", {"Ms. Smith"});
  EXPECT_EQ(t.defendant_aliases, (std::vector<std::string>{"ms. smith"}));
  EXPECT_EQ(t.source_meta.count("aliases"), 0u);
  auto u = SegmentTranscript("words words words.", "t", {});
  EXPECT_EQ(u.source_meta.at("aliases"), "missing");
}

TEST(Segment, MalformedUtf8NamesByteOffset) {
  std::string raw = "valid text here. ";
  raw.push_back(static_cast<char>(0xC3));
  raw += "(";
  try {
    SegmentTranscript(raw, "t", {"x"});
    FAIL() << "expected IngestionError";
  } catch (const IngestionError &e) {
    EXPECT_EQ(e.byte_offset(), 17u);
  }
}

TEST(Segment, CourtroomGolden) {
  const std::string raw = ReadFile(std::string(TRIAGE_FIXTURES) + "/courtroom.txt");
  std::istringstream expected_in(ReadFile(std::string(TRIAGE_FIXTURES) +
                                          "/courtroom.expected.txt"));
  std::vector<std::string> expected;
  for (std::string line; std::getline(expected_in, line);) expected.push_back(line);
  auto t = SegmentTranscript(raw, "courtroom", {"ms. miller"});
  EXPECT_EQ(Texts(t), expected);
}

// Random text over an alphabet rich in splitter edge cases.
std::string RandomText(std::mt19937_64 &rng) {
  static const std::vector<std::string> kPieces = {
      "The", "dog", "Q.", "A.", "Mr.", "ms.", "vs.", "St.", "42", "7x", ".", "?", "!",
      " ", " ", " ", "\n", "\n\n", "\t", "$", "é", "Ab", "cD", "x.y", "...", "jr.", "DR."};
  std::uniform_int_distribution<std::size_t> len(0, 80), pick(0, kPieces.size() - 1);
  std::string s;
  for (std::size_t n = len(rng), k = 0; k < n; ++k) {
    s += kPieces[pick(rng)];
    if (pick(rng) % 2 == 0) s.push_back(' ');
  }
  return s;
}

TEST(SegmentProperty, NoDigitsNoUppercaseAtLeastThreeWords) {
  std::mt19937_64 rng(testing::TestSeed());
  for (int trial = 0; trial < 500; ++trial) {
    auto t = SegmentTranscript(RandomText(rng), "p", {"x"});
    for (std::size_t i = 0; i < t.size(); ++i) {
      const auto &s = t.sentences[i];
      EXPECT_EQ(s.index, i);
      EXPECT_GE(CountWords(s.text), 3u) << s.text;
      for (char c : s.text) {
        EXPECT_FALSE(c >= '0' && c <= '9') << s.text;
        EXPECT_FALSE(c >= 'A' && c <= 'Z') << s.text;
      }
    }
  }
}

TEST(SegmentProperty, Idempotent) {
  std::mt19937_64 rng(testing::TestSeed() + 1);
  for (int trial = 0; trial < 500; ++trial) {
    auto t = SegmentTranscript(RandomText(rng), "p", {"x"});
    std::string joined;
    for (const auto &s : t.sentences) joined += s.text + "\n\n";
    auto again = SegmentTranscript(joined, "p", {"x"});
    EXPECT_EQ(Texts(again), Texts(t)) << joined;
  }
}

TEST(SegmentProperty, StoreLoadRoundTrip) {
  TempDir dir;
  std::mt19937_64 rng(testing::TestSeed() + 2);
  for (int trial = 0; trial < 50; ++trial) {
    auto t = SegmentTranscript(RandomText(rng), "rt-" + std::to_string(trial),
                               trial % 3 == 0 ? std::vector<std::string>{}
                                              : std::vector<std::string>{"Ms. X", "x"});
    StoreTranscript(t, dir.path());
    EXPECT_EQ(LoadTranscript(dir.path(), t.transcript_id), t);
  }
}

TEST(Store, SmallRoundTrip) {
  TempDir dir;
  auto t = SegmentTranscript("The dog barked loudly. No. She paid 100 dollars.", "trial-A",
                             {"ms. smith"});
  StoreTranscript(t, dir.path());
  EXPECT_EQ(LoadTranscript(dir.path(), "trial-A"), t);
  EXPECT_EQ(ListTranscripts(dir.path()), (std::vector<std::string>{"trial-A"}));
}

TEST(Store, TenThousandSentences) {
  TempDir dir;
  auto t = testing::FillerTranscript("big", 10000);
  StoreTranscript(t, dir.path());
  auto back = LoadTranscript(dir.path(), "big");
  EXPECT_EQ(back, t);
  auto lines = ReadJsonLines(TranscriptPath(dir.path(), "big"));
  ASSERT_EQ(lines.size(), 10001u);
  EXPECT_EQ(lines[0].value.at("schema_version"), kTranscriptSchemaVersion);
  EXPECT_EQ(lines[10000].value.at("index"), 9999);
}

TEST(Store, MissingIdIsNotFound) {
  TempDir dir;
  EXPECT_THROW(LoadTranscript(dir.path(), "missing-id"), NotFoundError);
}

TEST(Store, SchemaVersionMismatch) {
  TempDir dir;
  testing::WriteFile(TranscriptPath(dir.path(), "old"),
                     R"({"schema_version":99,"transcript_id":"old","defendant_aliases":[],"source_meta":{}})"
                     "\n");
  try {
    LoadTranscript(dir.path(), "old");
    FAIL() << "expected SchemaVersionError";
  } catch (const SchemaVersionError &e) {
    EXPECT_EQ(e.found(), 99);
  }
}

TEST(Store, IndexGapIsRejected) {
  TempDir dir;
  testing::WriteFile(
      TranscriptPath(dir.path(), "gap"),
      R"({"schema_version":1,"transcript_id":"gap","defendant_aliases":["x"],"source_meta":{}})"
      "\n"
      R"({"index":0,"text":"one two three","char_span":[0,13]})"
      "\n"
      R"({"index":2,"text":"four five six","char_span":[14,27]})"
      "\n");
  EXPECT_THROW(LoadTranscript(dir.path(), "gap"), InputError);
}

TEST(Store, RejectsUnsafeIds) {
  EXPECT_TRUE(IsValidTranscriptId("trial-A_1.v2"));
  EXPECT_FALSE(IsValidTranscriptId(""));
  EXPECT_FALSE(IsValidTranscriptId("../etc"));
  EXPECT_FALSE(IsValidTranscriptId(".hidden"));
  EXPECT_FALSE(IsValidTranscriptId("a/b"));
}

}  // namespace
}  // namespace triage
