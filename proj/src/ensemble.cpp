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

#include "rrf/ensemble.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

#include "rrf/error.hpp"

namespace rrf {

std::string MethodName(Method m) {
  switch (m) {
    case Method::kRRF: return "rrf";
    case Method::kRBoost: return "rboost";
    case Method::kPlainRF: return "rf";
  }
  return "?";
}

Method ParseMethod(const std::string& name) {
  if (name == "rrf") return Method::kRRF;
  if (name == "rboost") return Method::kRBoost;
  if (name == "rf") return Method::kPlainRF;
  Fail(ErrorKind::kInvalidArgument, "unknown method '" + name + "' (expected rrf, rboost or rf)");
}

EnsembleConfig EnsembleConfig::Selector(Method method, double lambda, std::uint64_t seed) {
  EnsembleConfig c;
  c.method = method;
  c.n_trees = 100;
  c.tree.mode = TreeMode::kRegularized;
  c.tree.lambda = lambda;
  c.seed = seed;
  return c;
}

EnsembleConfig EnsembleConfig::Evaluator(std::uint64_t seed) {
  EnsembleConfig c;
  c.method = Method::kPlainRF;
  c.n_trees = 200;
  c.tree.mode = TreeMode::kPlain;
  c.tree.lambda = 1.0;
  c.seed = seed;
  return c;
}

void EnsembleConfig::Validate() const {
  if (n_trees < 1) Fail(ErrorKind::kInvalidArgument, "an ensemble needs at least one tree");
  if (!(weight_floor > 0.0)) Fail(ErrorKind::kInvalidArgument, "boosting weight floor must be positive");
  tree.Validate();
}

namespace {

void CheckTrainable(const Dataset& data, const EnsembleConfig& config) {
  config.Validate();
  if (data.num_rows() == 0) Fail(ErrorKind::kData, "cannot train on an empty dataset");
  if (data.HasMissing()) Fail(ErrorKind::kData, "dataset has missing values; impute before training");
}

EnsembleModel Start(const Dataset& data, const EnsembleConfig& config, Method method) {
  EnsembleModel model;
  model.method = method;
  model.config = config;
  model.config.method = method;
  model.config.tree.mode = method == Method::kPlainRF ? TreeMode::kPlain : TreeMode::kRegularized;
  model.schema = Schema::Of(data);
  model.selected = FeatureSet(data.num_features());
  return model;
}

void Record(EnsembleModel& model, TreeModel tree, double weight, std::size_t before, std::size_t t) {
  for (std::size_t i = before; i < model.selected.size(); ++i) model.first_tree.push_back(t);
  tree.schema = model.schema;
  model.trees.push_back(std::move(tree));
  model.tree_weights.push_back(weight);
}

}  // namespace

EnsembleModel BuildRRF(const Dataset& data, const EnsembleConfig& config) {
  CheckTrainable(data, config);
  EnsembleModel model = Start(data, config, Method::kRRF);
  for (std::size_t t = 0; t < config.n_trees; ++t) {
    Rng sampler(DeriveSeed(config.seed, {kStreamBootstrap, t}));
    Rng grower(DeriveSeed(config.seed, {kStreamTree, t}));
    const RowView view =
        config.sampling == Sampling::kBootstrap ? Bootstrap(data, sampler, data.num_rows()) : RowView::All(data);
    const std::size_t before = model.selected.size();
    TreeModel tree = GrowTree(view, model.selected, model.config.tree, grower);
    Record(model, std::move(tree), 1.0, before, t);
  }
  return model;
}

EnsembleModel BuildRBoost(const Dataset& data, const EnsembleConfig& config) {
  return BuildRBoost(data, config, nullptr);
}

EnsembleModel BuildRBoost(const Dataset& data, const EnsembleConfig& config, BoostTrace* trace) {
  CheckTrainable(data, config);
  EnsembleModel model = Start(data, config, Method::kRBoost);
  const std::size_t n = data.num_rows();
  const double uniform = 1.0 / static_cast<double>(n);
  std::vector<double> w(n, uniform);
  std::vector<std::vector<double>> rows(n);
  for (std::size_t i = 0; i < n; ++i) rows[i] = data.Row(i);

  RowView view = RowView::All(data);
  std::vector<bool> wrong(n);
  for (std::size_t t = 0; t < config.n_trees; ++t) {
    if (trace) trace->weights.push_back(w);
    // Trees see weights with mean 1 so node totals stay comparable with the
    // min-node-size threshold; entropies are scale invariant.
    for (std::size_t i = 0; i < n; ++i) view.weights[i] = w[i] * static_cast<double>(n);
    Rng grower(DeriveSeed(config.seed, {kStreamTree, t}));
    const std::size_t before = model.selected.size();
    TreeModel tree = GrowTree(view, model.selected, model.config.tree, grower);

    double error = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      wrong[i] = Predict(tree, rows[i]) != data.label(i);
      if (wrong[i]) error += w[i];
    }
    const bool degenerate = error <= 0.0 || error >= 0.5;
    double alpha = 1.0;
    if (degenerate) {
      std::fill(w.begin(), w.end(), uniform);
    } else {
      const double ratio = (1.0 - error) / error;
      alpha = std::log(ratio);
      for (std::size_t i = 0; i < n; ++i)
        if (wrong[i]) w[i] *= ratio;
      for (int pass = 0; pass < 2; ++pass) {
        double sum = 0.0;
        for (double& x : w) {
          x = std::max(x, config.weight_floor);
          sum += x;
        }
        for (double& x : w) x /= sum;
      }
    }
    if (trace) {
      trace->errors.push_back(error);
      trace->degenerate.push_back(degenerate);
    }
    Record(model, std::move(tree), alpha, before, t);
  }
  return model;
}

EnsembleModel BuildPlainRF(const Dataset& data, const EnsembleConfig& config) {
  CheckTrainable(data, config);
  EnsembleModel model = Start(data, config, Method::kPlainRF);
  std::vector<TreeModel> trees(config.n_trees);
  auto grow = [&](std::size_t t) {
    Rng sampler(DeriveSeed(config.seed, {kStreamBootstrap, t}));
    Rng grower(DeriveSeed(config.seed, {kStreamTree, t}));
    const RowView view =
        config.sampling == Sampling::kBootstrap ? Bootstrap(data, sampler, data.num_rows()) : RowView::All(data);
    FeatureSet unused(data.num_features());
    trees[t] = GrowTree(view, unused, model.config.tree, grower);
  };
  const std::size_t workers = std::min(std::max<std::size_t>(1, config.threads), config.n_trees);
  if (workers == 1) {
    for (std::size_t t = 0; t < config.n_trees; ++t) grow(t);
  } else {
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::jthread> pool;
    for (std::size_t k = 0; k < workers; ++k)
      pool.emplace_back([&] {
        for (std::size_t t; (t = next++) < config.n_trees;) {
          try {
            grow(t);
          } catch (...) {
            std::lock_guard lock(failure_mutex);
            if (!failure) failure = std::current_exception();
          }
        }
      });
    pool.clear();
    if (failure) std::rethrow_exception(failure);
  }
  for (std::size_t t = 0; t < trees.size(); ++t) Record(model, std::move(trees[t]), 1.0, 0, t);
  return model;
}

EnsembleModel BuildEnsemble(const Dataset& data, const EnsembleConfig& config) {
  switch (config.method) {
    case Method::kRRF: return BuildRRF(data, config);
    case Method::kRBoost: return BuildRBoost(data, config);
    case Method::kPlainRF: return BuildPlainRF(data, config);
  }
  Fail(ErrorKind::kInternal, "unknown ensemble method");
}

std::vector<double> VoteFractions(const EnsembleModel& model, std::span<const double> row) {
  if (!model.schema || row.size() != model.schema->num_features())
    Fail(ErrorKind::kData, "row has " + std::to_string(row.size()) + " feature values, model expects " +
                               std::to_string(model.schema ? model.schema->num_features() : 0));
  std::vector<double> votes(model.schema->num_classes(), 0.0);
  double total = 0.0;
  for (std::size_t t = 0; t < model.trees.size(); ++t) {
    votes[static_cast<std::size_t>(Predict(model.trees[t], row))] += model.tree_weights[t];
    total += model.tree_weights[t];
  }
  if (total > 0)
    for (double& v : votes) v /= total;
  return votes;
}

int PredictEnsemble(const EnsembleModel& model, std::span<const double> row) {
  const std::vector<double> votes = VoteFractions(model, row);
  return static_cast<int>(std::max_element(votes.begin(), votes.end()) - votes.begin());
}

}  // namespace rrf
