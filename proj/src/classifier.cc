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

#include "detox/classifier.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "detox/errors.h"
#include "detox/evaluator.h"
#include "detox/hash.h"
#include "detox/normalizer.h"
#include "json.hpp"

namespace detox {
namespace {

// Armijo sufficient-decrease constant and step bounds for the line search.
constexpr double kArmijo = 1e-4;
constexpr double kMinStep = 1e-20;
constexpr double kMaxStep = 1e6;
// Relative rounding error tolerated in loss comparisons.
constexpr double kLossNoise = 1e-13;

double Softplus(double z) {
  return std::max(z, 0.0) + std::log1p(std::exp(-std::abs(z)));
}

void RequireBothClasses(std::span<const Label> labels, const char* what) {
  bool toxic = false;
  bool clean = false;
  for (Label label : labels) {
    (label == Label::kToxic ? toxic : clean) = true;
  }
  if (!toxic || !clean) {
    throw InvalidArgumentError(std::string(what) +
                               " requires both toxic and non-toxic examples");
  }
}

std::vector<FeatureVector> Featurize(std::span<const LabeledExample> examples,
                                     const Vocabulary& vocabulary) {
  std::vector<FeatureVector> rows;
  rows.reserve(examples.size());
  for (const LabeledExample& example : examples) {
    rows.push_back(ComputeTfidf(Normalize(example.text), vocabulary));
  }
  return rows;
}

template <typename T>
std::vector<T> Gather(std::span<const T> items,
                      const std::vector<size_t>& indices) {
  std::vector<T> out;
  out.reserve(indices.size());
  for (size_t i : indices) out.push_back(items[i]);
  return out;
}

struct Selection {
  double l2_strength;
  std::string note;
};

// Mean toxic-class F1 over stratified inner folds for each grid value.
Selection SelectL2Strength(std::span<const FeatureVector> rows,
                           std::span<const Label> labels, size_t dimension,
                           const TrainConfig& config) {
  const auto& grid = config.l2_strength_grid;
  if (grid.size() == 1) return {grid.front(), ""};

  int toxic =
      static_cast<int>(std::count(labels.begin(), labels.end(), Label::kToxic));
  int smallest_class = std::min(toxic, static_cast<int>(labels.size()) - toxic);
  int folds = std::min(config.inner_folds, smallest_class);
  if (folds < 2) {
    return {grid.front(),
            "too few examples for inner cross-validation; used first grid "
            "value"};
  }

  auto split = StratifiedKFoldSplit(labels, folds, MixSeed(config.seed, 1));
  double best_score = -1.0;
  double best = grid.front();
  for (double l2 : grid) {
    double f1_sum = 0.0;
    for (int f = 0; f < folds; ++f) {
      std::vector<size_t> train_idx;
      for (int g = 0; g < folds; ++g) {
        if (g != f) {
          train_idx.insert(train_idx.end(), split[g].begin(), split[g].end());
        }
      }
      std::sort(train_idx.begin(), train_idx.end());
      std::vector<FeatureVector> train_rows = Gather(rows, train_idx);
      std::vector<Label> train_labels = Gather(labels, train_idx);
      FitResult fit = FitLogisticRegression(
          train_rows, train_labels, dimension,
          {l2, config.max_iterations, config.convergence_tolerance, false});
      ConfusionMatrix confusion;
      for (size_t i : split[f]) {
        double p = Sigmoid(rows[i].Dot(fit.weights) + fit.bias);
        confusion.Add(labels[i], ApplyThreshold(p, config.threshold));
      }
      f1_sum += confusion.F1();
    }
    double score = f1_sum / folds;
    if (score > best_score) {
      best_score = score;
      best = l2;
    }
  }
  return {best, ""};
}

}  // namespace

void TrainConfig::Validate() const {
  if (l2_strength_grid.empty()) throw ConfigError("L2 grid is empty");
  for (double l2 : l2_strength_grid) {
    if (!(l2 > 0.0) || !std::isfinite(l2)) {
      throw ConfigError("L2 strengths must be positive and finite");
    }
  }
  if (max_iterations < 1) throw ConfigError("max_iterations must be >= 1");
  if (!(convergence_tolerance > 0.0)) {
    throw ConfigError("convergence tolerance must be positive");
  }
  if (!(threshold > 0.0 && threshold < 1.0)) {
    throw ConfigError("threshold must lie strictly between 0 and 1");
  }
  if (inner_folds < 2) throw ConfigError("inner_folds must be >= 2");
  if (!(stopwords.min_df_fraction >= 0.0 && stopwords.min_df_fraction <= 1.0) ||
      !(stopwords.balance_low <= stopwords.balance_high)) {
    throw ConfigError("invalid stopword thresholds");
  }
}

TrainConfig DefaultTrainConfig(Language language) {
  TrainConfig config;
  config.threshold = DefaultThreshold(language);
  return config;
}

std::string ConfigFingerprint(const TrainConfig& config) {
  nlohmann::json doc = {{"l2_strength_grid", config.l2_strength_grid},
                        {"max_iterations", config.max_iterations},
                        {"convergence_tolerance", config.convergence_tolerance},
                        {"seed", config.seed},
                        {"threshold", config.threshold},
                        {"inner_folds", config.inner_folds},
                        {"class_weighting", "balanced"},
                        {"optimizer", "gd-armijo"},
                        {"stopwords",
                         {{"min_df_fraction", config.stopwords.min_df_fraction},
                          {"balance_low", config.stopwords.balance_low},
                          {"balance_high", config.stopwords.balance_high}}}};
  return Fingerprint(doc.dump());
}

double Sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  double e = std::exp(z);
  return e / (1.0 + e);
}

std::vector<double> BalancedSampleWeights(std::span<const Label> labels) {
  const auto n = static_cast<double>(labels.size());
  double toxic = static_cast<double>(
      std::count(labels.begin(), labels.end(), Label::kToxic));
  double clean = n - toxic;
  std::vector<double> weights;
  weights.reserve(labels.size());
  for (Label label : labels) {
    double count = label == Label::kToxic ? toxic : clean;
    weights.push_back(n / (2.0 * count));
  }
  return weights;
}

LogisticObjective::LogisticObjective(std::span<const FeatureVector> rows,
                                     std::span<const Label> labels,
                                     std::span<const double> sample_weights,
                                     size_t dimension, double l2_strength)
    : rows_(rows),
      labels_(labels),
      sample_weights_(sample_weights),
      dimension_(dimension),
      l2_strength_(l2_strength) {
  if (rows.size() != labels.size() || rows.size() != sample_weights.size()) {
    throw InvalidArgumentError("rows, labels and weights differ in length");
  }
}

double LogisticObjective::Value(std::span<const double> weights,
                                double bias) const {
  double loss = 0.0;
  for (size_t i = 0; i < rows_.size(); ++i) {
    double z = rows_[i].Dot(weights) + bias;
    double y = ToInt(labels_[i]);
    loss += sample_weights_[i] * (Softplus(z) - y * z);
  }
  double norm2 = 0.0;
  for (double w : weights) norm2 += w * w;
  return loss + 0.5 * l2_strength_ * norm2;
}

double LogisticObjective::ValueAndGradient(std::span<const double> weights,
                                           double bias,
                                           std::span<double> grad_weights,
                                           double& grad_bias) const {
  double norm2 = 0.0;
  for (size_t j = 0; j < dimension_; ++j) {
    grad_weights[j] = l2_strength_ * weights[j];
    norm2 += weights[j] * weights[j];
  }
  grad_bias = 0.0;
  double loss = 0.0;
  for (size_t i = 0; i < rows_.size(); ++i) {
    double z = rows_[i].Dot(weights) + bias;
    double y = ToInt(labels_[i]);
    double s = sample_weights_[i];
    loss += s * (Softplus(z) - y * z);
    double residual = s * (Sigmoid(z) - y);
    for (const auto& [index, value] : rows_[i].entries) {
      grad_weights[index] += residual * value;
    }
    grad_bias += residual;
  }
  return loss + 0.5 * l2_strength_ * norm2;
}

FitResult FitLogisticRegression(std::span<const FeatureVector> rows,
                                std::span<const Label> labels, size_t dimension,
                                const FitOptions& options) {
  RequireBothClasses(labels, "training");
  std::vector<double> sample_weights = BalancedSampleWeights(labels);
  LogisticObjective objective(rows, labels, sample_weights, dimension,
                              options.l2_strength);

  FitResult result;
  result.weights.assign(dimension, 0.0);
  std::vector<double> grad(dimension);
  std::vector<double> candidate(dimension);
  double grad_bias = 0.0;
  double loss =
      objective.ValueAndGradient(result.weights, result.bias, grad, grad_bias);
  if (options.record_history) result.loss_history.push_back(loss);

  double step = 1.0;
  std::vector<double> candidate_grad(dimension);
  while (true) {
    double grad_inf = std::abs(grad_bias);
    double grad_norm2 = grad_bias * grad_bias;
    for (double g : grad) {
      grad_inf = std::max(grad_inf, std::abs(g));
      grad_norm2 += g * g;
    }
    if (grad_inf < options.tolerance) {
      result.converged = true;
      break;
    }
    if (result.iterations >= options.max_iterations) break;

    // Near the optimum the predicted decrease falls below the rounding
    // error of the loss; there a step is accepted when the loss does not
    // rise beyond that error and the gradient norm shrinks.
    const double noise = kLossNoise * std::max(1.0, std::abs(loss));
    step = std::min(step * 2.0, kMaxStep);
    double candidate_bias = 0.0;
    double candidate_grad_bias = 0.0;
    double candidate_loss = 0.0;
    while (step >= kMinStep) {
      for (size_t j = 0; j < dimension; ++j) {
        candidate[j] = result.weights[j] - step * grad[j];
      }
      candidate_bias = result.bias - step * grad_bias;
      candidate_loss = objective.ValueAndGradient(
          candidate, candidate_bias, candidate_grad, candidate_grad_bias);
      if (candidate_loss <= loss - kArmijo * step * grad_norm2) break;
      if (kArmijo * step * grad_norm2 <= noise &&
          candidate_loss <= loss + noise) {
        double candidate_norm2 = candidate_grad_bias * candidate_grad_bias;
        for (double g : candidate_grad) candidate_norm2 += g * g;
        if (candidate_norm2 < grad_norm2) break;
      }
      step *= 0.5;
    }
    // No representable step makes progress.
    if (step < kMinStep) break;

    result.weights.swap(candidate);
    grad.swap(candidate_grad);
    result.bias = candidate_bias;
    grad_bias = candidate_grad_bias;
    loss = candidate_loss;
    ++result.iterations;
    if (options.record_history) result.loss_history.push_back(loss);
  }
  return result;
}

TrainedModel Train(std::span<const LabeledExample> examples,
                   const Vocabulary& vocabulary,
                   const std::set<std::string>& stopwords,
                   const TrainConfig& config) {
  config.Validate();
  if (examples.empty()) throw InvalidArgumentError("no training examples");
  const Language language = examples.front().language;
  std::vector<Label> labels;
  labels.reserve(examples.size());
  for (const LabeledExample& example : examples) {
    if (example.language != language) {
      throw ConfigError("training examples mix languages");
    }
    labels.push_back(example.label);
  }
  RequireBothClasses(labels, "training");

  std::vector<FeatureVector> rows = Featurize(examples, vocabulary);
  Selection selection =
      SelectL2Strength(rows, labels, vocabulary.size(), config);
  FitResult fit =
      FitLogisticRegression(rows, labels, vocabulary.size(),
                            {selection.l2_strength, config.max_iterations,
                             config.convergence_tolerance, false});

  TrainedModel model;
  model.language = language;
  model.vocabulary = vocabulary;
  model.weights = std::move(fit.weights);
  model.bias = fit.bias;
  model.threshold = config.threshold;
  model.stopwords = stopwords;
  model.trained_at = config.trained_at;
  model.config_fingerprint = ConfigFingerprint(config);
  model.training.l2_strength = selection.l2_strength;
  model.training.iterations = fit.iterations;
  model.training.converged = fit.converged;
  if (!selection.note.empty())
    model.training.warnings.push_back(selection.note);
  if (!fit.converged) {
    std::ostringstream note;
    note << "gradient descent stopped after " << fit.iterations
         << " iterations without reaching tolerance "
         << config.convergence_tolerance;
    model.training.warnings.push_back(note.str());
  }
  return model;
}

TrainedModel TrainPipeline(std::span<const LabeledExample> examples,
                           const TrainConfig& config) {
  config.Validate();
  std::set<std::string> stopwords = DeriveStopwords(examples, config.stopwords);
  Vocabulary vocabulary = BuildVocabulary(examples, stopwords);
  return Train(examples, vocabulary, stopwords, config);
}

Prediction PredictFeatures(const TrainedModel& model,
                           const FeatureVector& features) {
  Prediction prediction;
  prediction.score = features.Dot(model.weights) + model.bias;
  prediction.probability = Sigmoid(prediction.score);
  prediction.label = ApplyThreshold(prediction.probability, model.threshold);
  return prediction;
}

Prediction Predict(const TrainedModel& model, std::string_view text) {
  return PredictFeatures(model,
                         ComputeTfidf(Normalize(text), model.vocabulary));
}

FeatureRanking FeatureWeights(const TrainedModel& model, size_t k) {
  if (k == 0 || k > model.vocabulary.size()) {
    throw InvalidArgumentError("k must lie in [1, vocabulary size]");
  }
  FeatureRanking ranking;
  const auto& terms = model.vocabulary.terms();
  for (size_t j = 0; j < model.weights.size(); ++j) {
    double w = model.weights[j];
    if (w > 0.0) ranking.positive.push_back({terms[j], w});
    if (w < 0.0) ranking.negative.push_back({terms[j], w});
  }
  auto by_weight = [](bool descending) {
    return [descending](const TermWeight& a, const TermWeight& b) {
      if (a.weight != b.weight) {
        return descending ? a.weight > b.weight : a.weight < b.weight;
      }
      return a.term < b.term;
    };
  };
  std::sort(ranking.positive.begin(), ranking.positive.end(), by_weight(true));
  std::sort(ranking.negative.begin(), ranking.negative.end(), by_weight(false));
  if (ranking.positive.size() > k) ranking.positive.resize(k);
  if (ranking.negative.size() > k) ranking.negative.resize(k);
  return ranking;
}

std::vector<TermWeight> TermContributions(const TrainedModel& model,
                                          std::string_view text, size_t k) {
  FeatureVector features = ComputeTfidf(Normalize(text), model.vocabulary);
  std::vector<TermWeight> contributions;
  for (const auto& [index, value] : features.entries) {
    double c = model.weights[index] * value;
    if (c != 0.0) {
      contributions.push_back({model.vocabulary.terms()[index], c});
    }
  }
  std::sort(contributions.begin(), contributions.end(),
            [](const TermWeight& a, const TermWeight& b) {
              if (std::abs(a.weight) != std::abs(b.weight)) {
                return std::abs(a.weight) > std::abs(b.weight);
              }
              return a.term < b.term;
            });
  if (k > 0 && contributions.size() > k) contributions.resize(k);
  return contributions;
}

}  // namespace detox
