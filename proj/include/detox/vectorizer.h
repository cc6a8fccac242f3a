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

#ifndef DETOX_VECTORIZER_H_
#define DETOX_VECTORIZER_H_

#include <cstddef>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "detox/normalizer.h"
#include "detox/types.h"

namespace detox {

// Ordered unigram + bigram inventory with document frequencies. Bigram
// terms are the two tokens joined by a single space.
class Vocabulary {
 public:
  Vocabulary() = default;
  // Throws IntegrityError unless terms are unique, sizes agree and
  // 1 <= df <= corpus_size for every term.
  Vocabulary(std::vector<std::string> terms, std::vector<int> doc_freq,
             int corpus_size);

  size_t size() const { return terms_.size(); }
  const std::vector<std::string>& terms() const { return terms_; }
  const std::vector<int>& doc_freq() const { return doc_freq_; }
  int corpus_size() const { return corpus_size_; }
  std::optional<size_t> Find(const std::string& term) const;

  // Natural-log inverse document frequency, ln(N / df).
  double Idf(size_t index) const { return idf_[index]; }

 private:
  std::vector<std::string> terms_;
  std::vector<int> doc_freq_;
  int corpus_size_ = 0;
  std::vector<double> idf_;
  std::unordered_map<std::string, size_t> index_;
};

// Sparse TF-IDF vector. entries are sorted by index and hold every
// vocabulary term present in the sentence (weight may be 0 when df = N).
struct FeatureVector {
  std::vector<std::pair<size_t, double>> entries;
  size_t dimension = 0;

  double Dot(std::span<const double> dense) const;
};

struct StopwordConfig {
  // Minimum document frequency, as a fraction of all sentences.
  double min_df_fraction = 0.20;
  // Admissible band for the toxic share of containing sentences.
  double balance_low = 0.35;
  double balance_high = 0.65;
};

// Frequent tokens that occur about equally in both classes. Throws
// InvalidArgumentError on empty or single-class input.
std::set<std::string> DeriveStopwords(std::span<const LabeledExample> examples,
                                      const StopwordConfig& config = {});

// Unigrams and adjacent bigrams of a token stream, skipping stopwords and
// any bigram with a stopword component. Order follows the stream.
std::vector<std::string> ExtractTerms(const std::vector<std::string>& tokens,
                                      const std::set<std::string>& stopwords);

// Throws InvalidArgumentError on empty input and when nothing survives
// stopword filtering. Terms are sorted lexicographically (bytewise).
Vocabulary BuildVocabulary(std::span<const LabeledExample> examples,
                           const std::set<std::string>& stopwords);

// v_j = tf(t_j) * ln(N / df(t_j)); out-of-vocabulary terms are ignored.
FeatureVector ComputeTfidf(const NormalizedSentence& sentence,
                           const Vocabulary& vocabulary);

}  // namespace detox

#endif  // DETOX_VECTORIZER_H_
