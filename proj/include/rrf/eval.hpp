/*
 * Copyright 2026 The rrf Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef RRF_EVAL_HPP_
#define RRF_EVAL_HPP_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rrf/dataset.hpp"
#include "rrf/ensemble.hpp"

namespace rrf {

struct CVPlan {
  std::size_t folds = 2;
  std::size_t repeats = 10;
  std::uint64_t seed = 1;

  void Validate() const;
  bool operator==(const CVPlan&) const = default;
};

/// One evaluated setting: an optional feature selector run on each training
/// portion, followed by a classifier trained on the selected features.
struct Condition {
  std::string name;
  std::optional<EnsembleConfig> selector;
  EnsembleConfig classifier = EnsembleConfig::Evaluator();
};

struct EvalReport {
  std::string condition;
  CVPlan plan;
  double mean_accuracy = 0.0;
  double stderr_accuracy = 0.0;  // standard error of the per-repeat mean accuracies
  double mean_features = 0.0;
  std::vector<double> raw_scores;                    // index repeat * folds + fold
  std::vector<std::vector<std::size_t>> selections;  // features used per cell, same indexing
  double wall_seconds = 0.0;
};

/// Fold id (0..folds-1) per row. Rows of each class are shuffled and dealt
/// round robin, so every fold's class counts are within one of proportional.
std::vector<std::size_t> StratifiedFolds(const Dataset& data, std::size_t folds, Rng& rng);

struct FoldResult {
  double accuracy = 0.0;
  std::vector<std::size_t> features;  // selected F, or every feature without a selector
};

/// Selection (if any) and classifier training on `train_rows` only, scored on
/// `test_rows`. Seeds for the selector and classifier are taken verbatim from
/// the condition's configs.
FoldResult EvaluateFold(const Dataset& data, std::span<const std::size_t> train_rows,
                        std::span<const std::size_t> test_rows, const Condition& condition);

/// Repeated stratified k-fold cross-validation. Cell (r, k) reseeds the
/// selector and classifier from the plan seed, so results are independent of
/// `threads` and of the seeds inside the condition.
EvalReport CrossValidate(const Dataset& data, const Condition& condition, const CVPlan& plan,
                         std::size_t threads = 1);

struct CurvePoint {
  std::size_t features = 0;
  double accuracy = 0.0;
};

/// Half/half stratified train-test split; features are added one at a time in
/// a seeded random order and the classifier is retrained on every prefix.
/// The feature order used is written to `order` when non-null.
std::vector<CurvePoint> AccuracyCurve(const Dataset& data, const EnsembleConfig& classifier, std::uint64_t seed,
                                      std::vector<std::size_t>* order = nullptr);

/// Aligned plain-text comparison table, one row per report in the given order.
/// Throws Error(kInvalidArgument) when the reports used different plans.
std::string CompareReports(std::span<const EvalReport> reports);

}  // namespace rrf

#endif  // RRF_EVAL_HPP_
