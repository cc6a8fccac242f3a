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

#ifndef DETOX_NORMALIZER_H_
#define DETOX_NORMALIZER_H_

#include <string>
#include <string_view>
#include <vector>

namespace detox {

// Canonical matching form of a sentence: lowercase, no combining marks,
// no punctuation, tokens separated by exactly one space.
struct NormalizedSentence {
  std::string text;
  std::vector<std::string> tokens;

  bool operator==(const NormalizedSentence&) const = default;
};

// Applies, in order: canonical decomposition (NFD), removal of nonspacing
// marks (Mn), replacement of punctuation (P*) by a space, default Unicode
// lowercasing, whitespace collapse and trim. Invalid UTF-8 sequences are
// decoded as U+FFFD.
NormalizedSentence Normalize(std::string_view raw);

// Splits already-normalized text on whitespace. Never yields empty tokens.
std::vector<std::string> Tokenize(std::string_view normalized_text);
inline std::vector<std::string> Tokenize(const NormalizedSentence& sentence) {
  return Tokenize(sentence.text);
}

// Splits raw text on Unicode whitespace, keeping each word's original bytes.
std::vector<std::string_view> SplitOnWhitespace(std::string_view raw);

// A raw word with its leading and trailing punctuation separated out, so
// that "ẹ." can be rewritten as "<replacement>." without losing the period.
// A run of raw bytes between separators (whitespace or punctuation) and
// the single normalized token it yields.
struct TokenSpan {
  size_t begin = 0;
  size_t end = 0;
  std::string token;

  bool operator==(const TokenSpan&) const = default;
};

// Spans whose tokens, in order, equal Normalize(raw).tokens. Runs that
// normalize to nothing (e.g. lone combining marks) are omitted.
std::vector<TokenSpan> TokenSpans(std::string_view raw);

bool IsValidUtf8(std::string_view bytes);

// Number of code points; invalid bytes count as one each.
size_t CodePointCount(std::string_view utf8);

}  // namespace detox

#endif  // DETOX_NORMALIZER_H_
