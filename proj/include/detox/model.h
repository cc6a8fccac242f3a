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

#ifndef DETOX_MODEL_H_
#define DETOX_MODEL_H_

#include <set>
#include <string>
#include <vector>

#include "detox/language.h"
#include "detox/vectorizer.h"

namespace detox {

// Provenance recorded by Train; informational only.
struct TrainingMetadata {
  double l2_strength = 0.0;
  int iterations = 0;
  bool converged = false;
  std::vector<std::string> warnings;

  bool operator==(const TrainingMetadata&) const = default;
};

// Everything needed to classify a raw sentence: the feature space, the
// logistic-regression parameters and the decision threshold.
struct TrainedModel {
  Language language = Language::kXhosa;
  Vocabulary vocabulary;
  std::vector<double> weights;
  double bias = 0.0;
  double threshold = 0.5;
  std::set<std::string> stopwords;
  std::string trained_at;
  std::string config_fingerprint;
  TrainingMetadata training;
};

}  // namespace detox

#endif  // DETOX_MODEL_H_
