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

#ifndef DETOX_LANGUAGE_H_
#define DETOX_LANGUAGE_H_

#include <array>
#include <optional>
#include <string_view>

namespace detox {

enum class Language { kXhosa, kYoruba };

inline constexpr std::array<Language, 2> kAllLanguages = {Language::kXhosa,
                                                          Language::kYoruba};

// Two-letter code used in files and on the wire ("xh", "yo").
std::string_view LanguageCode(Language language);

std::optional<Language> ParseLanguage(std::string_view code);

// Like ParseLanguage but throws ConfigError on unknown codes.
Language LanguageFromCode(std::string_view code);

// Per-language decision threshold: 0.45 for isiXhosa, 0.50 for Yoruba.
double DefaultThreshold(Language language);

}  // namespace detox

#endif  // DETOX_LANGUAGE_H_
