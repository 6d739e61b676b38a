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

#ifndef TRIAGE_THEME_H_
#define TRIAGE_THEME_H_

#include <array>
#include <optional>
#include <string_view>

namespace triage {

// The four gender-stereotype themes annotated in the transcripts.
enum class Theme { kEmot, kSex, kNorm, kMom };

inline constexpr std::array<Theme, 4> kAllThemes = {Theme::kEmot, Theme::kSex,
                                                   Theme::kNorm, Theme::kMom};

std::string_view ThemeCode(Theme theme);
std::string_view ThemeName(Theme theme);
std::string_view ThemeDescription(Theme theme);

// Accepts the upper-case code ("EMOT"); case-sensitive.
std::optional<Theme> ParseTheme(std::string_view code);

// Like ParseTheme but throws InputError for unknown codes.
Theme ThemeFromCode(std::string_view code);

}  // namespace triage

#endif  // TRIAGE_THEME_H_
