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

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "detox/corpus_io.h"
#include "detox/errors.h"
#include "oracles.h"
#include "test_support.h"

namespace detox {
namespace {

std::vector<Label> Labels(size_t toxic, size_t clean) {
  std::vector<Label> labels;
  for (size_t i = 0; i < toxic + clean; ++i) {
    labels.push_back(i % 2 == 0 && i / 2 < toxic ? Label::kToxic
                                                 : Label::kNonToxic);
  }
  // Interleaving above runs out once one class is exhausted; fix counts.
  size_t have = std::count(labels.begin(), labels.end(), Label::kToxic);
  for (size_t i = 0; have < toxic; ++i) {
    if (labels[i] == Label::kNonToxic) {
      labels[i] = Label::kToxic;
      ++have;
    }
  }
  return labels;
}

TrainConfig FastConfig(Language language) {
  TrainConfig config = DefaultTrainConfig(language);
  config.l2_strength_grid = {0.1, 1.0};
  return config;
}

TEST(ConfusionMatrixTest, MetricsFromCounts) {
  ConfusionMatrix m;
  for (int i = 0; i < 3; ++i) m.Add(Label::kToxic, Label::kToxic);
  m.Add(Label::kToxic, Label::kNonToxic);
  m.Add(Label::kNonToxic, Label::kToxic);
  for (int i = 0; i < 5; ++i) m.Add(Label::kNonToxic, Label::kNonToxic);
  EXPECT_EQ(m, (ConfusionMatrix{3, 1, 5, 1}));
  EXPECT_EQ(m.total(), 10);
  EXPECT_DOUBLE_EQ(m.Accuracy(), 0.8);
  EXPECT_DOUBLE_EQ(m.Precision(), 0.75);
  EXPECT_DOUBLE_EQ(m.Recall(), 0.75);
  EXPECT_DOUBLE_EQ(m.F1(), 0.75);
}

TEST(ConfusionMatrixTest, ZeroDenominatorsGiveZero) {
  ConfusionMatrix m;
  m.Add(Label::kNonToxic, Label::kNonToxic);
  EXPECT_EQ(m.Precision(), 0.0);
  EXPECT_EQ(m.Recall(), 0.0);
  EXPECT_EQ(m.F1(), 0.0);
  EXPECT_EQ(m.Accuracy(), 1.0);
}

TEST(RocTest, PerfectAndTiedScores) {
  std::vector<ScoredLabel> perfect = {{0.9, Label::kToxic},
                                      {0.8, Label::kToxic},
                                      {0.3, Label::kNonToxic},
                                      {0.1, Label::kNonToxic}};
  EXPECT_EQ(ComputeRocAuc(perfect).auc, 1.0);
  std::vector<ScoredLabel> tied = {{0.5, Label::kToxic},
                                   {0.5, Label::kNonToxic},
                                   {0.5, Label::kToxic},
                                   {0.5, Label::kNonToxic}};
  RocCurve curve = ComputeRocAuc(tied);
  EXPECT_EQ(curve.auc, 0.5);
  EXPECT_EQ(curve.points, (std::vector<RocPoint>{{0.0, 0.0}, {1.0, 1.0}}));
  std::vector<ScoredLabel> inverted = {{0.1, Label::kToxic},
                                       {0.9, Label::kNonToxic}};
  EXPECT_EQ(ComputeRocAuc(inverted).auc, 0.0);
}

TEST(RocTest, SingleClassIsRejected) {
  std::vector<ScoredLabel> one = {{0.1, Label::kToxic}, {0.4, Label::kToxic}};
  EXPECT_THROW(ComputeRocAuc(one), InvalidArgumentError);
  EXPECT_THROW(ComputeRocAuc({}), InvalidArgumentError);
}

TEST(RocPropertyTest, MatchesPairCountingOracle) {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 500; ++trial) {
    size_t n = 2 + testing::Pick(rng, 49);
    size_t levels = 1 + testing::Pick(rng, 12);
    std::vector<ScoredLabel> scores;
    for (size_t i = 0; i < n; ++i) {
      scores.push_back(
          {static_cast<double>(testing::Pick(rng, levels)) / 7.0,
           testing::Pick(rng, 2) ? Label::kToxic : Label::kNonToxic});
    }
    scores[0].label = Label::kToxic;
    scores[1].label = Label::kNonToxic;
    RocCurve curve = ComputeRocAuc(scores);
    ASSERT_NEAR(curve.auc, testing::PairwiseAuc(scores), 1e-9);
    ASSERT_EQ(curve.points.front(), (RocPoint{0.0, 0.0}));
    ASSERT_EQ(curve.points.back(), (RocPoint{1.0, 1.0}));
    for (size_t i = 1; i < curve.points.size(); ++i) {
      ASSERT_GE(curve.points[i].fpr, curve.points[i - 1].fpr);
      ASSERT_GE(curve.points[i].tpr, curve.points[i - 1].tpr);
    }
    // A strictly increasing transform leaves the curve unchanged.
    std::vector<ScoredLabel> squashed = scores;
    for (ScoredLabel& s : squashed) s.probability = std::exp(3 * s.probability);
    ASSERT_EQ(ComputeRocAuc(squashed).auc, curve.auc);
  }
}

TEST(SplitTest, FiveFoldsOverFullCorpusSize) {
  std::vector<Label> labels = Labels(178, 178);
  auto folds = StratifiedKFoldSplit(labels, 5, 42);
  ASSERT_EQ(folds.size(), 5u);
  std::vector<size_t> sizes;
  std::vector<size_t> seen;
  for (const auto& fold : folds) {
    sizes.push_back(fold.size());
    size_t toxic = 0;
    for (size_t i : fold) toxic += labels[i] == Label::kToxic;
    EXPECT_TRUE(toxic == 35 || toxic == 36) << toxic;
    EXPECT_TRUE(std::is_sorted(fold.begin(), fold.end()));
    seen.insert(seen.end(), fold.begin(), fold.end());
  }
  EXPECT_EQ(sizes, (std::vector<size_t>{72, 71, 71, 71, 71}));
  std::sort(seen.begin(), seen.end());
  for (size_t i = 0; i < seen.size(); ++i) ASSERT_EQ(seen[i], i);
}

TEST(SplitTest, SmallestValidInput) {
  auto folds = StratifiedKFoldSplit(Labels(5, 5), 5, 1);
  for (const auto& fold : folds) EXPECT_EQ(fold.size(), 2u);
  EXPECT_THROW(StratifiedKFoldSplit(Labels(4, 5), 5, 1), InvalidArgumentError);
  EXPECT_THROW(StratifiedKFoldSplit(Labels(5, 5), 1, 1), InvalidArgumentError);
}

TEST(SplitTest, DeterministicPerSeed) {
  auto labels = Labels(40, 40);
  EXPECT_EQ(StratifiedKFoldSplit(labels, 5, 9),
            StratifiedKFoldSplit(labels, 5, 9));
  EXPECT_NE(StratifiedKFoldSplit(labels, 5, 9),
            StratifiedKFoldSplit(labels, 5, 10));
}

TEST(SplitPropertyTest, ClassCountsWithinOneOfProportional) {
  std::mt19937_64 rng(37);
  for (int trial = 0; trial < 300; ++trial) {
    int k = 2 + static_cast<int>(testing::Pick(rng, 9));
    size_t toxic = k + testing::Pick(rng, 60);
    size_t clean = k + testing::Pick(rng, 60);
    std::vector<Label> labels = Labels(toxic, clean);
    std::shuffle(labels.begin(), labels.end(), rng);
    auto folds = StratifiedKFoldSplit(labels, k, rng());
    for (const auto& fold : folds) {
      double t = 0;
      for (size_t i : fold) t += labels[i] == Label::kToxic;
      double c = fold.size() - t;
      ASSERT_LE(std::abs(t - static_cast<double>(toxic) / k), 1.0);
      ASSERT_LE(std::abs(c - static_cast<double>(clean) / k), 1.0);
    }
  }
}

TEST(EvaluateTest, SeparableCorpusScoresPerfectly) {
  std::vector<ParallelPair> pairs;
  for (int i = 0; i < 60; ++i) {
    std::string n = std::to_string(i);
    pairs.push_back({"ke bad x" + n, "ke good y" + n, Language::kXhosa});
  }
  EvalReport report = EvaluateKFold(pairs, FastConfig(Language::kXhosa), 5, 1);
  ASSERT_EQ(report.folds.size(), 5u);
  for (const FoldMetrics& fold : report.folds) {
    EXPECT_EQ(fold.accuracy, 1.0) << fold.fold_index;
    EXPECT_EQ(fold.roc_auc, 1.0);
    EXPECT_EQ(fold.train_size + fold.test_size, 120u);
  }
  EXPECT_EQ(report.aggregate.accuracy, 1.0);
  EXPECT_EQ(report.aggregate.pooled_confusion.total(), 120);
}

TEST(EvaluateTest, AggregateIsMeanOfFolds) {
  auto pairs = testing::SyntheticCorpus(Language::kYoruba, 60, 4, 0.3);
  EvalReport report = EvaluateKFold(pairs, FastConfig(Language::kYoruba), 5, 2);
  double accuracy = 0, f1 = 0, auc = 0;
  ConfusionMatrix pooled;
  for (const FoldMetrics& fold : report.folds) {
    accuracy += fold.accuracy / 5;
    f1 += fold.f1 / 5;
    auc += fold.roc_auc / 5;
    pooled.tp += fold.confusion.tp;
    pooled.fp += fold.confusion.fp;
    pooled.tn += fold.confusion.tn;
    pooled.fn += fold.confusion.fn;
    EXPECT_NEAR(fold.accuracy, fold.confusion.Accuracy(), 0);
    EXPECT_LE(fold.top_features.positive.size(), 20u);
  }
  EXPECT_NEAR(report.aggregate.accuracy, accuracy, 1e-12);
  EXPECT_NEAR(report.aggregate.f1, f1, 1e-12);
  EXPECT_NEAR(report.aggregate.roc_auc, auc, 1e-12);
  EXPECT_EQ(report.aggregate.pooled_confusion, pooled);
  EXPECT_EQ(report.mode, "kfold");
  EXPECT_EQ(report.config_fingerprint,
            ConfigFingerprint(FastConfig(Language::kYoruba)));
}

TEST(EvaluateTest, TestFoldDoesNotInfluenceTraining) {
  auto examples =
      DeriveLabeledSet(testing::SyntheticCorpus(Language::kXhosa, 40, 6));
  std::vector<LabeledExample> train(examples.begin(), examples.begin() + 60);
  std::vector<LabeledExample> test(examples.begin() + 60, examples.end());
  std::vector<LabeledExample> other_test = test;
  for (LabeledExample& e : other_test) e.text = "unseen " + e.text + " tokens";
  TrainConfig config = FastConfig(Language::kXhosa);
  FoldMetrics a = EvaluateFold(train, test, config, 0);
  FoldMetrics b = EvaluateFold(train, other_test, config, 0);
  EXPECT_EQ(a.vocabulary_size, b.vocabulary_size);
  EXPECT_EQ(a.l2_strength, b.l2_strength);
  EXPECT_EQ(a.top_features.positive, b.top_features.positive);
  EXPECT_EQ(a.top_features.negative, b.top_features.negative);
}

TEST(EvaluateTest, ParallelAndSerialRunsAgree) {
  auto pairs = testing::SyntheticCorpus(Language::kYoruba, 50, 7);
  TrainConfig config = FastConfig(Language::kYoruba);
  EvalOptions serial;
  serial.parallel = false;
  EXPECT_EQ(ReportToJson(EvaluateKFold(pairs, config, 5, 3)).dump(),
            ReportToJson(EvaluateKFold(pairs, config, 5, 3, serial)).dump());
}

TEST(EvaluateTest, HoldoutUsesOneFifth) {
  auto pairs = testing::SyntheticCorpus(Language::kXhosa, 50, 8);
  EvalReport report = EvaluateHoldout(pairs, FastConfig(Language::kXhosa), 4);
  ASSERT_EQ(report.folds.size(), 1u);
  EXPECT_EQ(report.mode, "holdout");
  EXPECT_EQ(report.folds[0].test_size, 20u);
  EXPECT_EQ(report.folds[0].train_size, 80u);
}

TEST(ReportTest, JsonAndTableCarryTheMetrics) {
  auto pairs = testing::SyntheticCorpus(Language::kYoruba, 30, 9);
  EvalReport report = EvaluateKFold(pairs, FastConfig(Language::kYoruba), 3, 5);
  nlohmann::json doc = ReportToJson(report);
  EXPECT_EQ(doc["language"], "yo");
  EXPECT_EQ(doc["k"], 3);
  EXPECT_EQ(doc["folds"].size(), 3u);
  EXPECT_EQ(doc["folds"][0]["accuracy"].get<double>(),
            report.folds[0].accuracy);
  std::string table = RenderReportTable(report);
  EXPECT_NE(table.find("ROC-AUC"), std::string::npos);
  EXPECT_NE(table.find("mean"), std::string::npos);
  EXPECT_EQ(std::count(table.begin(), table.end(), '\n'), 5);
}

}  // namespace
}  // namespace detox
