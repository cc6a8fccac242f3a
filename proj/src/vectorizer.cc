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

#include "detox/vectorizer.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <unordered_set>

#include "detox/errors.h"

namespace detox {

Vocabulary::Vocabulary(std::vector<std::string> terms,
                       std::vector<int> doc_freq, int corpus_size)
    : terms_(std::move(terms)),
      doc_freq_(std::move(doc_freq)),
      corpus_size_(corpus_size) {
  if (terms_.size() != doc_freq_.size()) {
    throw IntegrityError("vocabulary has " + std::to_string(terms_.size()) +
                         " terms but " + std::to_string(doc_freq_.size()) +
                         " document frequencies");
  }
  if (corpus_size_ < 1 && !terms_.empty()) {
    throw IntegrityError("vocabulary corpus size must be positive");
  }
  idf_.reserve(terms_.size());
  index_.reserve(terms_.size());
  for (size_t i = 0; i < terms_.size(); ++i) {
    if (doc_freq_[i] < 1 || doc_freq_[i] > corpus_size_) {
      throw IntegrityError("document frequency of '" + terms_[i] +
                           "' outside [1, N]");
    }
    if (!index_.emplace(terms_[i], i).second) {
      throw IntegrityError("duplicate vocabulary term '" + terms_[i] + "'");
    }
    idf_.push_back(std::log(static_cast<double>(corpus_size_) /
                            static_cast<double>(doc_freq_[i])));
  }
}

std::optional<size_t> Vocabulary::Find(const std::string& term) const {
  auto it = index_.find(term);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

double FeatureVector::Dot(std::span<const double> dense) const {
  double sum = 0.0;
  for (const auto& [index, value] : entries) sum += dense[index] * value;
  return sum;
}

std::set<std::string> DeriveStopwords(std::span<const LabeledExample> examples,
                                      const StopwordConfig& config) {
  if (examples.empty()) {
    throw InvalidArgumentError("cannot derive stopwords from no examples");
  }
  struct Counts {
    int total = 0;
    int toxic = 0;
  };
  std::map<std::string, Counts> counts;
  int toxic_sentences = 0;
  for (const LabeledExample& example : examples) {
    bool toxic = example.label == Label::kToxic;
    toxic_sentences += toxic ? 1 : 0;
    NormalizedSentence sentence = Normalize(example.text);
    std::unordered_set<std::string> seen(sentence.tokens.begin(),
                                         sentence.tokens.end());
    for (const std::string& token : seen) {
      Counts& c = counts[token];
      ++c.total;
      c.toxic += toxic ? 1 : 0;
    }
  }
  const auto n = static_cast<int>(examples.size());
  if (toxic_sentences == 0 || toxic_sentences == n) {
    throw InvalidArgumentError("stopword derivation needs both classes");
  }

  std::set<std::string> stopwords;
  const double min_df = config.min_df_fraction * n;
  for (const auto& [token, c] : counts) {
    if (c.total < min_df) continue;
    double balance = static_cast<double>(c.toxic) / c.total;
    if (balance >= config.balance_low && balance <= config.balance_high) {
      stopwords.insert(token);
    }
  }
  return stopwords;
}

std::vector<std::string> ExtractTerms(const std::vector<std::string>& tokens,
                                      const std::set<std::string>& stopwords) {
  std::vector<std::string> terms;
  terms.reserve(tokens.size() * 2);
  for (size_t i = 0; i < tokens.size(); ++i) {
    bool stop = stopwords.contains(tokens[i]);
    if (!stop) terms.push_back(tokens[i]);
    if (i + 1 < tokens.size() && !stop && !stopwords.contains(tokens[i + 1])) {
      terms.push_back(tokens[i] + " " + tokens[i + 1]);
    }
  }
  return terms;
}

Vocabulary BuildVocabulary(std::span<const LabeledExample> examples,
                           const std::set<std::string>& stopwords) {
  if (examples.empty()) {
    throw InvalidArgumentError("cannot build a vocabulary from no examples");
  }
  std::map<std::string, int> doc_freq;
  for (const LabeledExample& example : examples) {
    std::vector<std::string> terms =
        ExtractTerms(Normalize(example.text).tokens, stopwords);
    std::sort(terms.begin(), terms.end());
    terms.erase(std::unique(terms.begin(), terms.end()), terms.end());
    for (std::string& term : terms) ++doc_freq[std::move(term)];
  }
  if (doc_freq.empty()) {
    throw InvalidArgumentError("vocabulary is empty after stopword filtering");
  }
  std::vector<std::string> terms;
  std::vector<int> df;
  terms.reserve(doc_freq.size());
  df.reserve(doc_freq.size());
  for (auto& [term, count] : doc_freq) {
    terms.push_back(term);
    df.push_back(count);
  }
  return Vocabulary(std::move(terms), std::move(df),
                    static_cast<int>(examples.size()));
}

FeatureVector ComputeTfidf(const NormalizedSentence& sentence,
                           const Vocabulary& vocabulary) {
  std::map<size_t, int> tf;
  // Stopwords never enter the vocabulary, so an empty stopword set yields
  // the same in-vocabulary terms as the training-time filter.
  static const std::set<std::string> kNoStopwords;
  for (const std::string& term : ExtractTerms(sentence.tokens, kNoStopwords)) {
    if (auto index = vocabulary.Find(term)) ++tf[*index];
  }
  FeatureVector vector;
  vector.dimension = vocabulary.size();
  vector.entries.reserve(tf.size());
  for (const auto& [index, count] : tf) {
    vector.entries.emplace_back(index, count * vocabulary.Idf(index));
  }
  return vector;
}

}  // namespace detox
