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

#ifndef DETOX_EVALUATOR_H_
#define DETOX_EVALUATOR_H_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "detox/classifier.h"
#include "detox/types.h"
#include "json.hpp"

namespace detox {

struct ConfusionMatrix {
  int tp = 0;
  int fp = 0;
  int tn = 0;
  int fn = 0;

  void Add(Label truth, Label predicted);
  int total() const { return tp + fp + tn + fn; }
  double Accuracy() const;
  // 0/0 is defined as 0 for the three ratios below.
  double Precision() const;
  double Recall() const;
  double F1() const;

  bool operator==(const ConfusionMatrix&) const = default;
};

struct ScoredLabel {
  double probability = 0.0;
  Label label = Label::kNonToxic;
};

struct RocPoint {
  double fpr = 0.0;
  double tpr = 0.0;

  bool operator==(const RocPoint&) const = default;
};

struct RocCurve {
  double auc = 0.0;
  std::vector<RocPoint> points;  // (0,0) ... (1,1), one point per score level
};

// Trapezoidal area under the ROC step curve; tied scores contribute 1/2.
// Throws InvalidArgumentError unless both labels occur.
RocCurve ComputeRocAuc(std::span<const ScoredLabel> scores);

// Partitions indices 0..n-1 into k folds. Each class is shuffled with the
// seed and dealt round-robin, the second class continuing where the first
// stopped, so per-fold class counts are floor or ceil of n_c / k and fold
// sizes differ by at most one. Indices within a fold are ascending.
std::vector<std::vector<size_t>> StratifiedKFoldSplit(
    std::span<const Label> labels, int k, uint64_t seed);
std::vector<std::vector<size_t>> StratifiedKFoldSplit(
    std::span<const LabeledExample> examples, int k, uint64_t seed);

struct FoldMetrics {
  int fold_index = 0;
  ConfusionMatrix confusion;
  double accuracy = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  double roc_auc = 0.0;
  std::vector<RocPoint> roc_points;
  FeatureRanking top_features;
  size_t train_size = 0;
  size_t test_size = 0;
  size_t vocabulary_size = 0;
  double l2_strength = 0.0;
  bool converged = false;
};

struct AggregateMetrics {
  double accuracy = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  double roc_auc = 0.0;
  ConfusionMatrix pooled_confusion;  // sum over folds
};

struct EvalReport {
  Language language = Language::kXhosa;
  std::string mode;  // "kfold" or "holdout"
  int k = 0;
  uint64_t seed = 0;
  std::string config_fingerprint;
  std::vector<FoldMetrics> folds;
  AggregateMetrics aggregate;  // unweighted mean over folds
};

struct EvalOptions {
  bool parallel = true;
  size_t top_features = 20;
};

// Derives stopwords and vocabulary from `train` only, trains, and scores
// `test` at config.threshold.
FoldMetrics EvaluateFold(std::span<const LabeledExample> train,
                         std::span<const LabeledExample> test,
                         const TrainConfig& config, int fold_index,
                         size_t top_features = 20);

EvalReport EvaluateKFold(std::span<const ParallelPair> pairs,
                         const TrainConfig& config, int k, uint64_t seed,
                         const EvalOptions& options = {});

// Single stratified 80/20 split (the first of five stratified folds is held
// out).
EvalReport EvaluateHoldout(std::span<const ParallelPair> pairs,
                           const TrainConfig& config, uint64_t seed,
                           const EvalOptions& options = {});

nlohmann::json ReportToJson(const EvalReport& report);

// Plain-text table: one row per fold plus the aggregate row.
std::string RenderReportTable(const EvalReport& report);

}  // namespace detox

#endif  // DETOX_EVALUATOR_H_
