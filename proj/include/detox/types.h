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

#ifndef DETOX_TYPES_H_
#define DETOX_TYPES_H_

#include <map>
#include <string>

#include "detox/language.h"

namespace detox {

enum class Label : int { kNonToxic = 0, kToxic = 1 };

inline int ToInt(Label label) { return static_cast<int>(label); }

// One toxic sentence aligned with its detoxified rewrite. Both sides keep
// their original orthography.
struct ParallelPair {
  std::string toxic_text;
  std::string detox_text;
  Language language = Language::kXhosa;

  bool operator==(const ParallelPair&) const = default;
};

struct LabeledExample {
  std::string text;
  Label label = Label::kNonToxic;
  Language language = Language::kXhosa;
};

// Normalized toxic token (or two-token phrase) -> neutral replacement.
// Keys are stored in normalized form; replacements keep their diacritics.
struct Lexicon {
  Language language = Language::kXhosa;
  std::map<std::string, std::string> entries;
};

}  // namespace detox

#endif  // DETOX_TYPES_H_
