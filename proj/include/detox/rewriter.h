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

#ifndef DETOX_REWRITER_H_
#define DETOX_REWRITER_H_

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "detox/model.h"
#include "detox/types.h"

namespace detox {

enum class DetoxMethod { kPassthrough, kCorpusLookup, kTokenSubstitution };

std::string_view DetoxMethodName(DetoxMethod method);

// How corpus lookup keys are compared.
enum class LookupMode {
  kNormalized,  // normalize(input) == normalize(toxic side)
  kStrict,      // byte-exact match on the trimmed sentence
};

// Sentence-level lookup table built from the parallel corpus.
class CorpusIndex {
 public:
  CorpusIndex() = default;

  // Throws DuplicateKeyError naming both rows when two pairs share a key.
  static CorpusIndex Build(std::span<const ParallelPair> pairs,
                           LookupMode mode = LookupMode::kNormalized);

  // Detoxified counterpart of `sentence`, if the corpus has one.
  std::optional<std::string_view> Find(std::string_view sentence) const;

  size_t size() const { return entries_.size(); }
  LookupMode mode() const { return mode_; }
  // Unset for an index built from no pairs.
  std::optional<Language> language() const { return language_; }

 private:
  std::string Key(std::string_view sentence) const;

  LookupMode mode_ = LookupMode::kNormalized;
  std::optional<Language> language_;
  std::unordered_map<std::string, std::string> entries_;
};

struct Replacement {
  std::string original;
  std::string replacement;

  bool operator==(const Replacement&) const = default;
};

struct DetoxResult {
  std::string input_text;
  Label label = Label::kNonToxic;
  double probability = 0.0;
  std::string output_text;
  DetoxMethod method = DetoxMethod::kPassthrough;
  std::vector<Replacement> replaced_tokens;
};

struct Substitution {
  std::string text;
  std::vector<Replacement> replaced;
};

// Token-level rewrite: splits `sentence` on whitespace, replaces words (or
// adjacent word pairs, tried first) whose normalized form is a lexicon key,
// keeps any punctuation around the replaced words, and rejoins with single
// spaces.
Substitution SubstituteTokens(std::string_view sentence,
                              const Lexicon& lexicon);

// Classifies `text`; non-toxic input is returned unchanged, toxic input is
// rewritten by corpus lookup or, failing that, token substitution.
// Throws ConfigError if model, index and lexicon disagree on language.
DetoxResult Detoxify(std::string_view text, const TrainedModel& model,
                     const CorpusIndex& corpus, const Lexicon& lexicon);

}  // namespace detox

#endif  // DETOX_REWRITER_H_
