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

#include "rrf/eval.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <mutex>
#include <numeric>
#include <sstream>
#include <thread>

#include "rrf/error.hpp"

namespace rrf {

void CVPlan::Validate() const {
  if (folds < 2) Fail(ErrorKind::kInvalidArgument, "cross-validation needs at least 2 folds");
  if (repeats < 1) Fail(ErrorKind::kInvalidArgument, "cross-validation needs at least 1 repeat");
}

std::vector<std::size_t> StratifiedFolds(const Dataset& data, std::size_t folds, Rng& rng) {
  std::vector<std::vector<std::size_t>> by_class(data.num_classes());
  for (std::size_t i = 0; i < data.num_rows(); ++i) by_class[static_cast<std::size_t>(data.label(i))].push_back(i);
  std::vector<std::size_t> fold(data.num_rows());
  std::size_t dealt = 0;
  for (auto& rows : by_class) {
    Shuffle(rows.begin(), rows.end(), rng);
    for (std::size_t r : rows) fold[r] = dealt++ % folds;
  }
  return fold;
}

FoldResult EvaluateFold(const Dataset& data, std::span<const std::size_t> train_rows,
                        std::span<const std::size_t> test_rows, const Condition& condition) {
  const Dataset train = data.SelectRows(train_rows);
  FoldResult out;
  EnsembleConfig classifier = condition.classifier;
  if (condition.selector) {
    const EnsembleModel selector = BuildEnsemble(train, *condition.selector);
    out.features = selector.selected.order();
    classifier.tree.feature_pool = out.features;
  } else if (classifier.tree.feature_pool) {
    out.features = *classifier.tree.feature_pool;
  } else {
    out.features.resize(data.num_features());
    std::iota(out.features.begin(), out.features.end(), 0);
  }
  const EnsembleModel model = BuildEnsemble(train, classifier);
  std::size_t correct = 0;
  std::vector<double> row;
  for (std::size_t r : test_rows) {
    row = data.Row(r);
    if (PredictEnsemble(model, row) == data.label(r)) ++correct;
  }
  out.accuracy = test_rows.empty() ? 0.0 : static_cast<double>(correct) / static_cast<double>(test_rows.size());
  return out;
}

EvalReport CrossValidate(const Dataset& data, const Condition& condition, const CVPlan& plan, std::size_t threads) {
  plan.Validate();
  const auto started = std::chrono::steady_clock::now();
  const std::size_t cells = plan.folds * plan.repeats;

  std::vector<std::vector<std::size_t>> assignment(plan.repeats);
  for (std::size_t r = 0; r < plan.repeats; ++r) {
    Rng rng(DeriveSeed(plan.seed, {kStreamFolds, r}));
    assignment[r] = StratifiedFolds(data, plan.folds, rng);
    std::vector<std::vector<std::size_t>> per_fold(plan.folds, std::vector<std::size_t>(data.num_classes(), 0));
    std::vector<std::size_t> total(data.num_classes(), 0);
    for (std::size_t i = 0; i < data.num_rows(); ++i) {
      per_fold[assignment[r][i]][static_cast<std::size_t>(data.label(i))]++;
      total[static_cast<std::size_t>(data.label(i))]++;
    }
    for (std::size_t k = 0; k < plan.folds; ++k)
      for (std::size_t c = 0; c < data.num_classes(); ++c)
        if (total[c] > 0 && total[c] == per_fold[k][c])
          Fail(ErrorKind::kData, "class '" + data.class_names()[c] + "' is absent from a training fold (" +
                                     std::to_string(total[c]) + " instances); use fewer folds");
  }

  std::vector<FoldResult> results(cells);
  auto run = [&](std::size_t cell) {
    const std::size_t r = cell / plan.folds;
    const std::size_t k = cell % plan.folds;
    std::vector<std::size_t> train, test;
    for (std::size_t i = 0; i < data.num_rows(); ++i) (assignment[r][i] == k ? test : train).push_back(i);
    Condition c = condition;
    if (c.selector) {
      c.selector->seed = DeriveSeed(plan.seed, {kStreamCell, r, k, kStreamSelector});
      c.selector->threads = 1;
    }
    c.classifier.seed = DeriveSeed(plan.seed, {kStreamCell, r, k, kStreamClassifier});
    c.classifier.threads = 1;
    results[cell] = EvaluateFold(data, train, test, c);
  };

  const std::size_t workers = std::min(std::max<std::size_t>(1, threads), cells);
  if (workers == 1) {
    for (std::size_t cell = 0; cell < cells; ++cell) run(cell);
  } else {
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    {
      std::vector<std::jthread> pool;
      for (std::size_t w = 0; w < workers; ++w)
        pool.emplace_back([&] {
          for (std::size_t cell; (cell = next++) < cells;) {
            try {
              run(cell);
            } catch (...) {
              std::lock_guard lock(failure_mutex);
              if (!failure) failure = std::current_exception();
            }
          }
        });
    }
    if (failure) std::rethrow_exception(failure);
  }

  EvalReport report;
  report.condition = condition.name;
  report.plan = plan;
  std::vector<double> repeat_means(plan.repeats, 0.0);
  double feature_sum = 0.0;
  for (std::size_t cell = 0; cell < cells; ++cell) {
    report.raw_scores.push_back(results[cell].accuracy);
    report.selections.push_back(results[cell].features);
    repeat_means[cell / plan.folds] += results[cell].accuracy / static_cast<double>(plan.folds);
    feature_sum += static_cast<double>(results[cell].features.size());
  }
  report.mean_features = feature_sum / static_cast<double>(cells);
  const double reps = static_cast<double>(plan.repeats);
  report.mean_accuracy = std::accumulate(repeat_means.begin(), repeat_means.end(), 0.0) / reps;
  if (plan.repeats > 1) {
    double ss = 0.0;
    for (double m : repeat_means) ss += (m - report.mean_accuracy) * (m - report.mean_accuracy);
    report.stderr_accuracy = std::sqrt(ss / (reps - 1.0)) / std::sqrt(reps);
  }
  report.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return report;
}

std::vector<CurvePoint> AccuracyCurve(const Dataset& data, const EnsembleConfig& classifier, std::uint64_t seed,
                                      std::vector<std::size_t>* order) {
  Rng split_rng(DeriveSeed(seed, {kStreamCurve, 0}));
  const std::vector<std::size_t> fold = StratifiedFolds(data, 2, split_rng);
  std::vector<std::size_t> train, test;
  for (std::size_t i = 0; i < data.num_rows(); ++i) (fold[i] == 0 ? train : test).push_back(i);

  std::vector<std::size_t> features(data.num_features());
  std::iota(features.begin(), features.end(), 0);
  Rng order_rng(DeriveSeed(seed, {kStreamCurve, 1}));
  Shuffle(features.begin(), features.end(), order_rng);
  if (order) *order = features;

  Condition c;
  c.classifier = classifier;
  c.classifier.seed = DeriveSeed(seed, {kStreamCurve, 2});
  std::vector<CurvePoint> curve;
  for (std::size_t k = 1; k <= features.size(); ++k) {
    c.classifier.tree.feature_pool = std::vector<std::size_t>(features.begin(), features.begin() + static_cast<std::ptrdiff_t>(k));
    curve.push_back({k, EvaluateFold(data, train, test, c).accuracy});
  }
  return curve;
}

std::string CompareReports(std::span<const EvalReport> reports) {
  for (const auto& r : reports)
    if (!(r.plan == reports.front().plan))
      Fail(ErrorKind::kInvalidArgument, "reports were produced with different cross-validation plans");
  std::size_t width = std::string("condition").size();
  for (const auto& r : reports) width = std::max(width, r.condition.size());
  std::ostringstream out;
  char buf[128];
  std::snprintf(buf, sizeof(buf), "%-*s  %8s  %8s  %8s\n", static_cast<int>(width), "condition", "accuracy", "stderr",
                "features");
  out << buf;
  for (const auto& r : reports) {
    std::snprintf(buf, sizeof(buf), "%-*s  %8.4f  %8.4f  %8.2f\n", static_cast<int>(width), r.condition.c_str(),
                  r.mean_accuracy, r.stderr_accuracy, r.mean_features);
    out << buf;
  }
  return out.str();
}

}  // namespace rrf
