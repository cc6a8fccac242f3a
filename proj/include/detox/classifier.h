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

#ifndef DETOX_CLASSIFIER_H_
#define DETOX_CLASSIFIER_H_

#include <cstdint>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "detox/model.h"
#include "detox/types.h"
#include "detox/vectorizer.h"

namespace detox {

struct TrainConfig {
  // Candidate L2 strengths; the best by inner cross-validated toxic-class
  // F1 is used for the final fit.
  std::vector<double> l2_strength_grid = {0.001, 0.01, 0.1, 1.0};
  int max_iterations = 1000;
  // Gradient infinity-norm at which descent stops.
  double convergence_tolerance = 1e-8;
  uint64_t seed = 42;
  double threshold = 0.5;
  int inner_folds = 3;
  StopwordConfig stopwords;
  // Copied into the model verbatim; not part of the fingerprint.
  std::string trained_at = "1970-01-01T00:00:00Z";

  // Throws ConfigError when a field is out of range.
  void Validate() const;
};

// Library defaults with the language's threshold.
TrainConfig DefaultTrainConfig(Language language);

// Content hash of every setting that influences training.
std::string ConfigFingerprint(const TrainConfig& config);

struct Prediction {
  double probability = 0.0;
  Label label = Label::kNonToxic;
  double score = 0.0;  // logit, w.v + b
};

double Sigmoid(double z);

// Toxic iff probability >= threshold.
inline Label ApplyThreshold(double probability, double threshold) {
  return probability >= threshold ? Label::kToxic : Label::kNonToxic;
}

// Per-example weights N / (2 * N_c) for each example's class c.
std::vector<double> BalancedSampleWeights(std::span<const Label> labels);

// sum_i s_i * [log(1 + e^{z_i}) - y_i z_i] + (lambda / 2) * |w|^2 with
// z_i = w.x_i + b. The bias is not regularized.
class LogisticObjective {
 public:
  LogisticObjective(std::span<const FeatureVector> rows,
                    std::span<const Label> labels,
                    std::span<const double> sample_weights, size_t dimension,
                    double l2_strength);

  size_t dimension() const { return dimension_; }
  double Value(std::span<const double> weights, double bias) const;
  // Returns the value; writes d/dw into grad_weights and d/db into grad_bias.
  double ValueAndGradient(std::span<const double> weights, double bias,
                          std::span<double> grad_weights,
                          double& grad_bias) const;

 private:
  std::span<const FeatureVector> rows_;
  std::span<const Label> labels_;
  std::span<const double> sample_weights_;
  size_t dimension_;
  double l2_strength_;
};

struct FitOptions {
  double l2_strength = 0.01;
  int max_iterations = 1000;
  double tolerance = 1e-8;
  bool record_history = false;
};

struct FitResult {
  std::vector<double> weights;
  double bias = 0.0;
  int iterations = 0;
  bool converged = false;
  std::vector<double> loss_history;  // filled when record_history is set
};

// Full-batch gradient descent from w = 0, b = 0 with Armijo backtracking,
// using balanced sample weights.
FitResult FitLogisticRegression(std::span<const FeatureVector> rows,
                                std::span<const Label> labels, size_t dimension,
                                const FitOptions& options);

// Trains on `examples` over a vocabulary built from the same examples.
// Throws InvalidArgumentError when a class is missing. Non-convergence is
// recorded in model.training.warnings.
TrainedModel Train(std::span<const LabeledExample> examples,
                   const Vocabulary& vocabulary,
                   const std::set<std::string>& stopwords,
                   const TrainConfig& config);

// DeriveStopwords + BuildVocabulary + Train.
TrainedModel TrainPipeline(std::span<const LabeledExample> examples,
                           const TrainConfig& config);

Prediction Predict(const TrainedModel& model, std::string_view text);
Prediction PredictFeatures(const TrainedModel& model,
                           const FeatureVector& features);

struct TermWeight {
  std::string term;
  double weight = 0.0;

  bool operator==(const TermWeight&) const = default;
};

struct FeatureRanking {
  std::vector<TermWeight> positive;  // descending weight, toxic-indicative
  std::vector<TermWeight> negative;  // ascending weight
};

// Top-k positive and negative terms, ties broken by term. Requires
// 1 <= k <= vocabulary size.
FeatureRanking FeatureWeights(const TrainedModel& model, size_t k);

// Signed per-term contributions weight * tfidf for one sentence, largest
// magnitude first, zero contributions omitted. k = 0 returns all.
std::vector<TermWeight> TermContributions(const TrainedModel& model,
                                          std::string_view text, size_t k);

}  // namespace detox

#endif  // DETOX_CLASSIFIER_H_
