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

#include "detox/rewriter.h"

#include "detox/classifier.h"
#include "detox/errors.h"
#include "detox/normalizer.h"

namespace detox {
namespace {

std::string_view TrimAscii(std::string_view s) {
  constexpr std::string_view kSpace = " \t\r\n\f\v";
  size_t begin = s.find_first_not_of(kSpace);
  if (begin == std::string_view::npos) return {};
  size_t end = s.find_last_not_of(kSpace);
  return s.substr(begin, end - begin + 1);
}

}  // namespace

std::string_view DetoxMethodName(DetoxMethod method) {
  switch (method) {
    case DetoxMethod::kPassthrough:
      return "passthrough";
    case DetoxMethod::kCorpusLookup:
      return "corpus_lookup";
    case DetoxMethod::kTokenSubstitution:
      return "token_substitution";
  }
  return "unknown";
}

CorpusIndex CorpusIndex::Build(std::span<const ParallelPair> pairs,
                               LookupMode mode) {
  CorpusIndex index;
  index.mode_ = mode;
  std::unordered_map<std::string, size_t> row_of;
  for (size_t row = 0; row < pairs.size(); ++row) {
    const ParallelPair& pair = pairs[row];
    if (!index.language_) index.language_ = pair.language;
    if (*index.language_ != pair.language) {
      throw ConfigError("corpus mixes languages");
    }
    std::string key = index.Key(pair.toxic_text);
    auto [it, inserted] = row_of.emplace(key, row);
    if (!inserted) {
      throw DuplicateKeyError("corpus rows " + std::to_string(it->second + 1) +
                              " and " + std::to_string(row + 1) +
                              " share the lookup key '" + key + "'");
    }
    index.entries_.emplace(std::move(key), pair.detox_text);
  }
  return index;
}

std::string CorpusIndex::Key(std::string_view sentence) const {
  if (mode_ == LookupMode::kStrict) return std::string(TrimAscii(sentence));
  return Normalize(sentence).text;
}

std::optional<std::string_view> CorpusIndex::Find(
    std::string_view sentence) const {
  auto it = entries_.find(Key(sentence));
  if (it == entries_.end()) return std::nullopt;
  return it->second;
}

Substitution SubstituteTokens(std::string_view sentence,
                              const Lexicon& lexicon) {
  std::vector<TokenSpan> spans = TokenSpans(sentence);
  Substitution result;
  size_t copied = 0;
  auto replace = [&](size_t begin, size_t end, const std::string& with) {
    result.text.append(sentence.substr(copied, begin - copied));
    result.text += with;
    result.replaced.push_back(
        {std::string(sentence.substr(begin, end - begin)), with});
    copied = end;
  };
  for (size_t i = 0; i < spans.size();) {
    if (i + 1 < spans.size()) {
      auto it = lexicon.entries.find(spans[i].token + " " + spans[i + 1].token);
      if (it != lexicon.entries.end()) {
        replace(spans[i].begin, spans[i + 1].end, it->second);
        i += 2;
        continue;
      }
    }
    auto it = lexicon.entries.find(spans[i].token);
    if (it != lexicon.entries.end()) {
      replace(spans[i].begin, spans[i].end, it->second);
    }
    ++i;
  }
  result.text.append(sentence.substr(copied));
  return result;
}

DetoxResult Detoxify(std::string_view text, const TrainedModel& model,
                     const CorpusIndex& corpus, const Lexicon& lexicon) {
  if (lexicon.language != model.language ||
      (corpus.language() && *corpus.language() != model.language)) {
    throw ConfigError("model, corpus and lexicon must share one language");
  }

  Prediction prediction = Predict(model, text);
  DetoxResult result;
  result.input_text = std::string(text);
  result.label = prediction.label;
  result.probability = prediction.probability;

  if (prediction.label == Label::kNonToxic) {
    result.method = DetoxMethod::kPassthrough;
    result.output_text = result.input_text;
    return result;
  }
  if (auto counterpart = corpus.Find(text)) {
    result.method = DetoxMethod::kCorpusLookup;
    result.output_text = std::string(*counterpart);
    return result;
  }
  Substitution substitution = SubstituteTokens(text, lexicon);
  result.method = DetoxMethod::kTokenSubstitution;
  result.output_text = std::move(substitution.text);
  result.replaced_tokens = std::move(substitution.replaced);
  return result;
}

}  // namespace detox
