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

#include "detox/evaluator.h"

#include <algorithm>
#include <cstdio>
#include <future>
#include <random>
#include <sstream>

#include "detox/corpus_io.h"
#include "detox/errors.h"
#include "detox/hash.h"
#include "detox/normalizer.h"

namespace detox {
namespace {

double SafeRatio(double numerator, double denominator) {
  return denominator == 0.0 ? 0.0 : numerator / denominator;
}

// Uniform integer in [0, bound) from raw 64-bit draws. The standard
// distributions are implementation-defined, which would make fold
// assignment depend on the standard library.
uint64_t UniformBelow(std::mt19937_64& rng, uint64_t bound) {
  const uint64_t limit = std::numeric_limits<uint64_t>::max() -
                         std::numeric_limits<uint64_t>::max() % bound;
  uint64_t draw;
  do {
    draw = rng();
  } while (draw >= limit);
  return draw % bound;
}

void Shuffle(std::vector<size_t>& items, std::mt19937_64& rng) {
  for (size_t i = items.size(); i > 1; --i) {
    std::swap(items[i - 1], items[UniformBelow(rng, i)]);
  }
}

AggregateMetrics Aggregate(const std::vector<FoldMetrics>& folds) {
  AggregateMetrics aggregate;
  for (const FoldMetrics& fold : folds) {
    aggregate.accuracy += fold.accuracy;
    aggregate.precision += fold.precision;
    aggregate.recall += fold.recall;
    aggregate.f1 += fold.f1;
    aggregate.roc_auc += fold.roc_auc;
    aggregate.pooled_confusion.tp += fold.confusion.tp;
    aggregate.pooled_confusion.fp += fold.confusion.fp;
    aggregate.pooled_confusion.tn += fold.confusion.tn;
    aggregate.pooled_confusion.fn += fold.confusion.fn;
  }
  const auto n = static_cast<double>(folds.size());
  if (n > 0) {
    aggregate.accuracy /= n;
    aggregate.precision /= n;
    aggregate.recall /= n;
    aggregate.f1 /= n;
    aggregate.roc_auc /= n;
  }
  return aggregate;
}

std::vector<LabeledExample> Select(std::span<const LabeledExample> examples,
                                   const std::vector<size_t>& indices) {
  std::vector<LabeledExample> out;
  out.reserve(indices.size());
  for (size_t i : indices) out.push_back(examples[i]);
  return out;
}

// Runs the given folds (as test sets) and assembles results in fold order.
std::vector<FoldMetrics> RunFolds(std::span<const LabeledExample> examples,
                                  const std::vector<std::vector<size_t>>& folds,
                                  const std::vector<int>& test_folds,
                                  const TrainConfig& config,
                                  const EvalOptions& options) {
  auto run_one = [&](int f) {
    std::vector<size_t> train_idx;
    for (size_t g = 0; g < folds.size(); ++g) {
      if (static_cast<int>(g) != f) {
        train_idx.insert(train_idx.end(), folds[g].begin(), folds[g].end());
      }
    }
    std::sort(train_idx.begin(), train_idx.end());
    TrainConfig fold_config = config;
    fold_config.seed = MixSeed(config.seed, static_cast<uint64_t>(f) + 100);
    return EvaluateFold(Select(examples, train_idx), Select(examples, folds[f]),
                        fold_config, f, options.top_features);
  };

  std::vector<FoldMetrics> results;
  if (options.parallel && test_folds.size() > 1) {
    std::vector<std::future<FoldMetrics>> pending;
    for (int f : test_folds) {
      pending.push_back(std::async(std::launch::async, run_one, f));
    }
    for (auto& future : pending) results.push_back(future.get());
  } else {
    for (int f : test_folds) results.push_back(run_one(f));
  }
  return results;
}

nlohmann::json ConfusionToJson(const ConfusionMatrix& c) {
  return {{"tp", c.tp}, {"fp", c.fp}, {"tn", c.tn}, {"fn", c.fn}};
}

nlohmann::json TermsToJson(const std::vector<TermWeight>& terms) {
  nlohmann::json out = nlohmann::json::array();
  for (const TermWeight& t : terms) {
    out.push_back({{"term", t.term}, {"weight", t.weight}});
  }
  return out;
}

}  // namespace

void ConfusionMatrix::Add(Label truth, Label predicted) {
  if (truth == Label::kToxic) {
    (predicted == Label::kToxic ? tp : fn) += 1;
  } else {
    (predicted == Label::kToxic ? fp : tn) += 1;
  }
}

double ConfusionMatrix::Accuracy() const { return SafeRatio(tp + tn, total()); }
double ConfusionMatrix::Precision() const { return SafeRatio(tp, tp + fp); }
double ConfusionMatrix::Recall() const { return SafeRatio(tp, tp + fn); }
double ConfusionMatrix::F1() const {
  double p = Precision();
  double r = Recall();
  return SafeRatio(2.0 * p * r, p + r);
}

RocCurve ComputeRocAuc(std::span<const ScoredLabel> scores) {
  int64_t positives = 0;
  for (const ScoredLabel& s : scores) positives += s.label == Label::kToxic;
  const auto negatives = static_cast<int64_t>(scores.size()) - positives;
  if (positives == 0 || negatives == 0) {
    throw InvalidArgumentError("ROC-AUC is undefined without both labels");
  }

  std::vector<ScoredLabel> sorted(scores.begin(), scores.end());
  std::stable_sort(sorted.begin(), sorted.end(),
                   [](const ScoredLabel& a, const ScoredLabel& b) {
                     return a.probability > b.probability;
                   });

  RocCurve curve;
  curve.points.push_back({0.0, 0.0});
  // Twice the area in units of one (positive, negative) pair, kept in
  // integers so the result is exact up to the final division.
  int64_t twice_area = 0;
  int64_t tp = 0;
  int64_t fp = 0;
  for (size_t i = 0; i < sorted.size();) {
    int64_t group_tp = 0;
    int64_t group_fp = 0;
    size_t j = i;
    for (; j < sorted.size() && sorted[j].probability == sorted[i].probability;
         ++j) {
      (sorted[j].label == Label::kToxic ? group_tp : group_fp) += 1;
    }
    twice_area += group_fp * (2 * tp + group_tp);
    tp += group_tp;
    fp += group_fp;
    curve.points.push_back({static_cast<double>(fp) / negatives,
                            static_cast<double>(tp) / positives});
    i = j;
  }
  curve.auc = static_cast<double>(twice_area) /
              (2.0 * static_cast<double>(positives) * negatives);
  return curve;
}

std::vector<std::vector<size_t>> StratifiedKFoldSplit(
    std::span<const Label> labels, int k, uint64_t seed) {
  if (k < 2) throw InvalidArgumentError("k must be at least 2");
  std::vector<size_t> toxic;
  std::vector<size_t> clean;
  for (size_t i = 0; i < labels.size(); ++i) {
    (labels[i] == Label::kToxic ? toxic : clean).push_back(i);
  }
  const auto folds = static_cast<size_t>(k);
  if (toxic.size() < folds || clean.size() < folds) {
    throw InvalidArgumentError(
        "each class needs at least k = " + std::to_string(k) + " members");
  }
  std::mt19937_64 rng(seed);
  Shuffle(toxic, rng);
  Shuffle(clean, rng);

  std::vector<std::vector<size_t>> split(folds);
  size_t position = 0;
  for (const auto* members : {&toxic, &clean}) {
    for (size_t index : *members) split[position++ % folds].push_back(index);
  }
  for (auto& fold : split) std::sort(fold.begin(), fold.end());
  return split;
}

std::vector<std::vector<size_t>> StratifiedKFoldSplit(
    std::span<const LabeledExample> examples, int k, uint64_t seed) {
  std::vector<Label> labels;
  labels.reserve(examples.size());
  for (const LabeledExample& example : examples)
    labels.push_back(example.label);
  return StratifiedKFoldSplit(labels, k, seed);
}

FoldMetrics EvaluateFold(std::span<const LabeledExample> train,
                         std::span<const LabeledExample> test,
                         const TrainConfig& config, int fold_index,
                         size_t top_features) {
  TrainedModel model = TrainPipeline(train, config);

  FoldMetrics metrics;
  metrics.fold_index = fold_index;
  metrics.train_size = train.size();
  metrics.test_size = test.size();
  metrics.vocabulary_size = model.vocabulary.size();
  metrics.l2_strength = model.training.l2_strength;
  metrics.converged = model.training.converged;

  std::vector<ScoredLabel> scores;
  scores.reserve(test.size());
  for (const LabeledExample& example : test) {
    Prediction prediction = Predict(model, example.text);
    metrics.confusion.Add(example.label, prediction.label);
    scores.push_back({prediction.probability, example.label});
  }
  metrics.accuracy = metrics.confusion.Accuracy();
  metrics.precision = metrics.confusion.Precision();
  metrics.recall = metrics.confusion.Recall();
  metrics.f1 = metrics.confusion.F1();
  RocCurve roc = ComputeRocAuc(scores);
  metrics.roc_auc = roc.auc;
  metrics.roc_points = std::move(roc.points);
  if (top_features > 0) {
    metrics.top_features =
        FeatureWeights(model, std::min(top_features, model.vocabulary.size()));
  }
  return metrics;
}

EvalReport EvaluateKFold(std::span<const ParallelPair> pairs,
                         const TrainConfig& config, int k, uint64_t seed,
                         const EvalOptions& options) {
  config.Validate();
  std::vector<LabeledExample> examples = DeriveLabeledSet(pairs);
  auto folds = StratifiedKFoldSplit(examples, k, seed);
  std::vector<int> all(k);
  for (int f = 0; f < k; ++f) all[f] = f;

  EvalReport report;
  report.language = pairs.front().language;
  report.mode = "kfold";
  report.k = k;
  report.seed = seed;
  report.config_fingerprint = ConfigFingerprint(config);
  report.folds = RunFolds(examples, folds, all, config, options);
  report.aggregate = Aggregate(report.folds);
  return report;
}

EvalReport EvaluateHoldout(std::span<const ParallelPair> pairs,
                           const TrainConfig& config, uint64_t seed,
                           const EvalOptions& options) {
  config.Validate();
  std::vector<LabeledExample> examples = DeriveLabeledSet(pairs);
  auto folds = StratifiedKFoldSplit(examples, 5, seed);

  EvalReport report;
  report.language = pairs.front().language;
  report.mode = "holdout";
  report.k = 5;
  report.seed = seed;
  report.config_fingerprint = ConfigFingerprint(config);
  report.folds = RunFolds(examples, folds, {0}, config, options);
  report.aggregate = Aggregate(report.folds);
  return report;
}

nlohmann::json ReportToJson(const EvalReport& report) {
  nlohmann::json folds = nlohmann::json::array();
  for (const FoldMetrics& fold : report.folds) {
    nlohmann::json roc = nlohmann::json::array();
    for (const RocPoint& p : fold.roc_points) roc.push_back({p.fpr, p.tpr});
    folds.push_back({
        {"fold", fold.fold_index + 1},
        {"confusion", ConfusionToJson(fold.confusion)},
        {"accuracy", fold.accuracy},
        {"precision", fold.precision},
        {"recall", fold.recall},
        {"f1", fold.f1},
        {"roc_auc", fold.roc_auc},
        {"roc_points", roc},
        {"top_toxic_features", TermsToJson(fold.top_features.positive)},
        {"top_non_toxic_features", TermsToJson(fold.top_features.negative)},
        {"train_size", fold.train_size},
        {"test_size", fold.test_size},
        {"vocabulary_size", fold.vocabulary_size},
        {"l2_strength", fold.l2_strength},
        {"converged", fold.converged},
    });
  }
  const AggregateMetrics& a = report.aggregate;
  return {
      {"language", LanguageCode(report.language)},
      {"mode", report.mode},
      {"k", report.k},
      {"seed", report.seed},
      {"config_fingerprint", report.config_fingerprint},
      {"folds", folds},
      {"aggregate",
       {{"accuracy", a.accuracy},
        {"precision", a.precision},
        {"recall", a.recall},
        {"f1", a.f1},
        {"roc_auc", a.roc_auc},
        {"pooled_confusion", ConfusionToJson(a.pooled_confusion)}}},
  };
}

std::string RenderReportTable(const EvalReport& report) {
  std::ostringstream out;
  char line[160];
  std::snprintf(line, sizeof(line), "%-8s %-9s %8s %9s %7s %8s %7s\n",
                "Language", "Fold", "Accuracy", "Precision", "Recall",
                "F1-score", "ROC-AUC");
  out << line;
  const std::string language(LanguageCode(report.language));
  for (const FoldMetrics& f : report.folds) {
    std::snprintf(line, sizeof(line),
                  "%-8s %-9d %8.2f %9.2f %7.2f %8.2f %7.2f\n", language.c_str(),
                  f.fold_index + 1, f.accuracy, f.precision, f.recall, f.f1,
                  f.roc_auc);
    out << line;
  }
  const AggregateMetrics& a = report.aggregate;
  std::snprintf(line, sizeof(line), "%-8s %-9s %8.2f %9.2f %7.2f %8.2f %7.2f\n",
                language.c_str(), "mean", a.accuracy, a.precision, a.recall,
                a.f1, a.roc_auc);
  out << line;
  return out.str();
}

}  // namespace detox
