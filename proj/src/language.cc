// Copyright 2026 The Detox Authors.
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

#include "detox/language.h"

#include <string>

#include "detox/errors.h"

namespace detox {

std::string_view LanguageCode(Language language) {
  switch (language) {
    case Language::kXhosa:
      return "xh";
    case Language::kYoruba:
      return "yo";
  }
  return "??";
}

std::optional<Language> ParseLanguage(std::string_view code) {
  for (Language language : kAllLanguages) {
    if (LanguageCode(language) == code) return language;
  }
  return std::nullopt;
}

Language LanguageFromCode(std::string_view code) {
  if (auto language = ParseLanguage(code)) return *language;
  throw ConfigError("unsupported language code '" + std::string(code) +
                    "' (expected xh or yo)");
}

double DefaultThreshold(Language language) {
  return language == Language::kXhosa ? 0.45 : 0.50;
}

}  // namespace detox
