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

#include "detox/normalizer.h"

#include <unicode/locid.h>
#include <unicode/normalizer2.h>
#include <unicode/uchar.h>
#include <unicode/unistr.h>
#include <unicode/utf8.h>

#include <stdexcept>

namespace detox {
namespace {

const icu::Normalizer2& NfdInstance() {
  UErrorCode status = U_ZERO_ERROR;
  const icu::Normalizer2* nfd = icu::Normalizer2::getNFDInstance(status);
  if (U_FAILURE(status) || nfd == nullptr) {
    throw std::runtime_error(std::string("ICU NFD unavailable: ") +
                             u_errorName(status));
  }
  return *nfd;
}

bool IsPunctuation(UChar32 c) {
  switch (u_charType(c)) {
    case U_CONNECTOR_PUNCTUATION:
    case U_DASH_PUNCTUATION:
    case U_START_PUNCTUATION:
    case U_END_PUNCTUATION:
    case U_INITIAL_PUNCTUATION:
    case U_FINAL_PUNCTUATION:
    case U_OTHER_PUNCTUATION:
      return true;
    default:
      return false;
  }
}

bool IsNonspacingMark(UChar32 c) { return u_charType(c) == U_NON_SPACING_MARK; }

// True when c, after canonical decomposition, is whitespace or punctuation.
bool IsSeparator(UChar32 c) {
  icu::UnicodeString decomposition;
  if (!NfdInstance().getDecomposition(c, decomposition)) {
    return IsPunctuation(c) || u_isUWhiteSpace(c);
  }
  for (int32_t i = 0; i < decomposition.length();) {
    UChar32 d = decomposition.char32At(i);
    i += U16_LENGTH(d);
    if (IsPunctuation(d) || u_isUWhiteSpace(d)) return true;
  }
  return false;
}

icu::UnicodeString Decompose(const icu::UnicodeString& text) {
  UErrorCode status = U_ZERO_ERROR;
  icu::UnicodeString out = NfdInstance().normalize(text, status);
  if (U_FAILURE(status)) {
    throw std::runtime_error(std::string("ICU normalize failed: ") +
                             u_errorName(status));
  }
  return out;
}

// Drops Mn and maps punctuation and whitespace to a plain space.
icu::UnicodeString StripMarksAndPunctuation(const icu::UnicodeString& text) {
  icu::UnicodeString out;
  for (int32_t i = 0; i < text.length();) {
    UChar32 c = text.char32At(i);
    i += U16_LENGTH(c);
    if (IsNonspacingMark(c)) continue;
    if (IsPunctuation(c) || u_isUWhiteSpace(c)) {
      out.append(static_cast<UChar>(u' '));
    } else {
      out.append(c);
    }
  }
  return out;
}

}  // namespace

NormalizedSentence Normalize(std::string_view raw) {
  icu::UnicodeString text = icu::UnicodeString::fromUTF8(
      icu::StringPiece(raw.data(), static_cast<int32_t>(raw.size())));
  text = StripMarksAndPunctuation(Decompose(text));
  text.toLower(icu::Locale::getRoot());
  // Lowercasing may emit characters that decompose or carry marks (e.g.
  // U+0130); a second pass keeps the output free of Mn and idempotent.
  text = StripMarksAndPunctuation(Decompose(text));

  std::string utf8;
  text.toUTF8String(utf8);

  NormalizedSentence result;
  result.tokens = Tokenize(utf8);
  for (const std::string& token : result.tokens) {
    if (!result.text.empty()) result.text.push_back(' ');
    result.text += token;
  }
  return result;
}

std::vector<std::string> Tokenize(std::string_view normalized_text) {
  std::vector<std::string> tokens;
  for (std::string_view word : SplitOnWhitespace(normalized_text)) {
    tokens.emplace_back(word);
  }
  return tokens;
}

std::vector<std::string_view> SplitOnWhitespace(std::string_view raw) {
  std::vector<std::string_view> words;
  const auto* bytes = reinterpret_cast<const uint8_t*>(raw.data());
  const auto length = static_cast<int32_t>(raw.size());
  int32_t start = -1;
  for (int32_t i = 0; i < length;) {
    int32_t begin = i;
    UChar32 c;
    U8_NEXT(bytes, i, length, c);
    bool space = c >= 0 && u_isUWhiteSpace(c);
    if (space) {
      if (start >= 0) words.push_back(raw.substr(start, begin - start));
      start = -1;
    } else if (start < 0) {
      start = begin;
    }
  }
  if (start >= 0) words.push_back(raw.substr(start));
  return words;
}

std::vector<TokenSpan> TokenSpans(std::string_view raw) {
  std::vector<TokenSpan> spans;
  const auto* bytes = reinterpret_cast<const uint8_t*>(raw.data());
  const auto length = static_cast<int32_t>(raw.size());
  auto close = [&](int32_t start, int32_t end) {
    NormalizedSentence normalized = Normalize(raw.substr(start, end - start));
    if (!normalized.text.empty()) {
      spans.push_back({static_cast<size_t>(start), static_cast<size_t>(end),
                       std::move(normalized.text)});
    }
  };
  int32_t start = -1;
  for (int32_t i = 0; i < length;) {
    int32_t begin = i;
    UChar32 c;
    U8_NEXT(bytes, i, length, c);
    if (c >= 0 && IsSeparator(c)) {
      if (start >= 0) close(start, begin);
      start = -1;
    } else if (start < 0) {
      start = begin;
    }
  }
  if (start >= 0) close(start, length);
  return spans;
}

bool IsValidUtf8(std::string_view bytes) {
  const auto* data = reinterpret_cast<const uint8_t*>(bytes.data());
  const auto length = static_cast<int32_t>(bytes.size());
  for (int32_t i = 0; i < length;) {
    UChar32 c;
    U8_NEXT(data, i, length, c);
    if (c < 0) return false;
  }
  return true;
}

size_t CodePointCount(std::string_view utf8) {
  const auto* data = reinterpret_cast<const uint8_t*>(utf8.data());
  const auto length = static_cast<int32_t>(utf8.size());
  size_t count = 0;
  for (int32_t i = 0; i < length; ++count) {
    UChar32 c;
    U8_NEXT(data, i, length, c);
  }
  return count;
}

}  // namespace detox
