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

#ifndef RRF_ENSEMBLE_HPP_
#define RRF_ENSEMBLE_HPP_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "rrf/dataset.hpp"
#include "rrf/tree.hpp"

namespace rrf {

enum class Method { kRRF, kRBoost, kPlainRF };

std::string MethodName(Method m);
Method ParseMethod(const std::string& name);  // "rrf", "rboost", "rf"

enum class Sampling {
  kBootstrap,  // N draws with replacement per tree
  kFull,       // every row, unit weight
};

struct EnsembleConfig {
  Method method = Method::kRRF;
  std::size_t n_trees = 100;
  RegConfig tree;
  Sampling sampling = Sampling::kBootstrap;  // RRF and PlainRF
  double weight_floor = 1e-8;                // RBoost instance-weight trimming
  std::uint64_t seed = 1;
  std::size_t threads = 1;                   // PlainRF only; results do not depend on it

  /// Defaults for the selectors: 100 regularized trees, lambda 0.5.
  static EnsembleConfig Selector(Method method, double lambda = 0.5, std::uint64_t seed = 1);
  /// Defaults for the evaluation forest: 200 plain random trees.
  static EnsembleConfig Evaluator(std::uint64_t seed = 1);

  void Validate() const;
};

struct EnsembleModel {
  Method method = Method::kRRF;
  std::vector<TreeModel> trees;
  std::vector<double> tree_weights;          // alpha_t; all 1 for RRF and PlainRF
  FeatureSet selected;                       // final F, in insertion order
  std::vector<std::size_t> first_tree;       // aligned with selected.order()
  std::shared_ptr<const Schema> schema;
  EnsembleConfig config;
};

/// Regularized random forest: trees grown in order on bootstrap samples, all
/// sharing one feature set F.
EnsembleModel BuildRRF(const Dataset& data, const EnsembleConfig& config);

/// Regularized boosted random trees: AdaBoost.M1 with instance re-weighting,
/// one shared F. Rounds with error 0 or >= 0.5 reset the weights to uniform
/// and get alpha = 1.
EnsembleModel BuildRBoost(const Dataset& data, const EnsembleConfig& config);

/// Bagged unregularized random trees.
EnsembleModel BuildPlainRF(const Dataset& data, const EnsembleConfig& config);

/// Dispatches on config.method.
EnsembleModel BuildEnsemble(const Dataset& data, const EnsembleConfig& config);

/// Per-class alpha-weighted vote fractions (sum to 1).
std::vector<double> VoteFractions(const EnsembleModel& model, std::span<const double> row);
/// Class with the largest weighted vote; lowest index on ties.
int PredictEnsemble(const EnsembleModel& model, std::span<const double> row);

/// Instance weights after each RBoost round, for inspection in tests.
/// Entry t holds the normalized weights used to grow tree t+1.
struct BoostTrace {
  std::vector<std::vector<double>> weights;
  std::vector<double> errors;
  std::vector<bool> degenerate;
};
EnsembleModel BuildRBoost(const Dataset& data, const EnsembleConfig& config, BoostTrace* trace);

}  // namespace rrf

#endif  // RRF_ENSEMBLE_HPP_
