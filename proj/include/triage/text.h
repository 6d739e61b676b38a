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

#ifndef TRIAGE_TEXT_H_
#define TRIAGE_TEXT_H_

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace triage {

// Word-level token used for lexicon and alias matching. Tokens are maximal
// runs of ASCII letters, ASCII digits or non-ASCII bytes, lowercased; all
// other bytes (punctuation, apostrophes, whitespace) separate tokens, so
// "Ms. Smith's" yields {"ms", "smith", "s"}.
struct Token {
  std::string text;
  std::size_t begin;  // byte offsets into the tokenized string
  std::size_t end;
};

std::vector<Token> Tokenize(std::string_view text);
std::vector<std::string> TokenTexts(std::string_view text);

// Start positions (token indices) of every occurrence of `phrase` in
// `tokens`. An empty phrase never matches.
std::vector<std::size_t> FindPhrase(const std::vector<Token> &tokens,
                                    const std::vector<std::string> &phrase);

// Byte offset of the first byte that does not start a well-formed UTF-8
// sequence, or nullopt when the input is valid.
std::optional<std::size_t> FirstInvalidUtf8(std::string_view bytes);

inline bool IsAsciiSpace(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' ||
         c == '\v';
}

}  // namespace triage

#endif  // TRIAGE_TEXT_H_
