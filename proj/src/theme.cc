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

#include "triage/theme.h"

#include <string>

#include "triage/error.h"

namespace triage {

std::string_view ThemeCode(Theme theme) {
  switch (theme) {
    case Theme::kEmot: return "EMOT";
    case Theme::kSex: return "SEX";
    case Theme::kNorm: return "NORM";
    case Theme::kMom: return "MOM";
  }
  return "?";
}

std::string_view ThemeName(Theme theme) {
  switch (theme) {
    case Theme::kEmot: return "Emotions";
    case Theme::kSex: return "Hypersexualization";
    case Theme::kNorm: return "Betrayal of Gender Norms";
    case Theme::kMom: return "Bad Mother";
  }
  return "?";
}

std::string_view ThemeDescription(Theme theme) {
  switch (theme) {
    case Theme::kEmot:
      return "Describing the defendant's emotions, including emotional, "
             "emotionless, inappropriate joy or happiness, remorseful, or "
             "remorseless.";
    case Theme::kSex:
      return "Describing the defendant as promiscuous, loose, an adulterer; "
             "attacking the defendant's sexual expression, or demonizing "
             "their sexual practices.";
    case Theme::kNorm:
      return "Describing the defendant as manipulative, greedy, evil, "
             "deceitful.";
    case Theme::kMom:
      return "Describing the defendant as a bad mother.";
  }
  return "";
}

std::optional<Theme> ParseTheme(std::string_view code) {
  for (Theme t : kAllThemes)
    if (ThemeCode(t) == code) return t;
  return std::nullopt;
}

Theme ThemeFromCode(std::string_view code) {
  if (auto t = ParseTheme(code)) return *t;
  throw InputError("unknown theme code '" + std::string(code) + "'");
}

}  // namespace triage
