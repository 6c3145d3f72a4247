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

#include "rrf/tree.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "rrf/error.hpp"

namespace rrf {

namespace {

std::size_t CeilSqrt(std::size_t n) {
  auto k = static_cast<std::size_t>(std::sqrt(static_cast<double>(n)));
  while (k * k < n) ++k;
  while (k > 0 && (k - 1) * (k - 1) >= n) --k;
  return k;
}

}  // namespace

void RegConfig::Validate() const {
  if (!(lambda >= 0.0 && lambda <= 1.0))
    Fail(ErrorKind::kInvalidArgument, "lambda must lie in [0, 1], got " + std::to_string(lambda));
  if (!(gain_epsilon >= 0.0)) Fail(ErrorKind::kInvalidArgument, "gain epsilon must be nonnegative");
}

std::size_t RegConfig::CandidateCount(std::size_t num_features) const {
  if (n_candidates > 0) return n_candidates;
  const std::size_t eligible = feature_pool ? feature_pool->size() : num_features;
  return std::max<std::size_t>(1, CeilSqrt(eligible));
}

bool FeatureSet::Insert(std::size_t j) {
  if (j >= mask_.size()) mask_.resize(j + 1, false);
  if (mask_[j]) return false;
  mask_[j] = true;
  order_.push_back(j);
  return true;
}

std::optional<std::size_t> SelectRegularized(std::span<const CandidateGain> evaluated, double lambda,
                                             double epsilon) {
  double best = 0.0;
  std::optional<std::size_t> arg;
  for (std::size_t i = 0; i < evaluated.size(); ++i) {
    const double g = GainRegularized(evaluated[i].gain, evaluated[i].in_set, lambda);
    if (g > best) {
      best = g;
      arg = i;
    }
  }
  if (best <= epsilon) return std::nullopt;
  return arg;
}

std::shared_ptr<const Schema> Schema::Of(const Dataset& d) {
  return std::make_shared<const Schema>(Schema{d.feature_names(), d.kinds(), d.class_names(), d.target_name()});
}

namespace {

SplitChoice Evaluate(const RowView& view, std::size_t feature, const ClassHistogram& parent) {
  SplitChoice c;
  c.feature = feature;
  if (view.data->kind(feature).categorical) {
    c.categorical = true;
    c.gain = CategoricalSplitGain(view, feature, parent);
  } else {
    const ThresholdSplit t = BestNumericThreshold(view, feature, parent);
    c.threshold = t.threshold;
    c.gain = t.gain;
  }
  return c;
}

// First `k` entries of a uniformly random permutation of `items`.
void RandomPrefix(std::vector<std::size_t>& items, std::size_t k, Rng& rng) {
  k = std::min(k, items.size());
  for (std::size_t i = 0; i < k; ++i) std::swap(items[i], items[i + UniformIndex(rng, items.size() - i)]);
  items.resize(k);
}

}  // namespace

std::optional<SplitChoice> SplitSearch(const RowView& view, const FeatureSet& selected, const RegConfig& config,
                                       Rng& rng, std::vector<CandidateGain>* trace) {
  const Dataset& d = *view.data;
  const std::size_t m = d.num_features();
  std::vector<bool> eligible(m, !config.feature_pool.has_value());
  if (config.feature_pool)
    for (std::size_t j : *config.feature_pool)
      if (j < m) eligible[j] = true;

  const bool regularized = config.mode == TreeMode::kRegularized;
  std::vector<std::size_t> order;
  for (std::size_t j = 0; j < m; ++j)
    if (eligible[j] && !(regularized && selected.Contains(j))) order.push_back(j);
  RandomPrefix(order, config.CandidateCount(m), rng);
  const std::size_t newcomers = order.size();
  if (regularized)
    for (std::size_t j : selected.order())
      if (j < m && eligible[j]) order.push_back(j);

  const ClassHistogram parent = ClassHistogram::FromView(view);
  std::vector<SplitChoice> choices;
  std::vector<CandidateGain> gains;
  choices.reserve(order.size());
  gains.reserve(order.size());
  for (std::size_t i = 0; i < order.size(); ++i) {
    choices.push_back(Evaluate(view, order[i], parent));
    gains.push_back({order[i], choices.back().gain, regularized && i >= newcomers});
  }
  if (trace) trace->insert(trace->end(), gains.begin(), gains.end());

  const double lambda = regularized ? config.lambda : 1.0;
  const auto best = SelectRegularized(gains, lambda, config.gain_epsilon);
  if (!best) return std::nullopt;
  SplitChoice out = choices[*best];
  out.gain_regularized = GainRegularized(out.gain, gains[*best].in_set, lambda);
  return out;
}

namespace {

class TreeBuilder {
 public:
  TreeBuilder(TreeModel& model, FeatureSet& selected, const RegConfig& config, Rng& rng)
      : model_(model), selected_(selected), config_(config), rng_(rng) {}

  std::int32_t Build(const RowView& view, std::size_t depth) {
    const auto idx = static_cast<std::int32_t>(model_.nodes.size());
    model_.nodes.emplace_back();
    ClassHistogram hist = ClassHistogram::FromView(view);
    {
      TreeNode& node = model_.nodes.back();
      node.predicted = hist.Argmax();
      node.distribution = hist;
    }
    if (hist.IsPure() || hist.total < static_cast<double>(config_.min_node_size) ||
        (config_.max_depth > 0 && depth >= config_.max_depth))
      return idx;

    const auto choice = SplitSearch(view, selected_, config_, rng_);
    if (!choice) return idx;
    if (config_.mode == TreeMode::kRegularized) selected_.Insert(choice->feature);

    const Dataset& d = *view.data;
    std::vector<RowView> parts;
    std::vector<std::int32_t> levels;
    if (choice->categorical) {
      const std::size_t arity = d.kind(choice->feature).arity();
      std::vector<RowView> by_level(arity);
      for (std::size_t i = 0; i < view.rows.size(); ++i) {
        const auto level = static_cast<std::size_t>(d.at(view.rows[i], choice->feature));
        by_level[level].rows.push_back(view.rows[i]);
        by_level[level].weights.push_back(view.weights[i]);
      }
      for (std::size_t l = 0; l < arity; ++l) {
        if (by_level[l].empty()) continue;
        by_level[l].data = &d;
        parts.push_back(std::move(by_level[l]));
        levels.push_back(static_cast<std::int32_t>(l));
      }
    } else {
      parts.resize(2);
      for (auto& p : parts) p.data = &d;
      for (std::size_t i = 0; i < view.rows.size(); ++i) {
        RowView& p = d.at(view.rows[i], choice->feature) <= choice->threshold ? parts[0] : parts[1];
        p.rows.push_back(view.rows[i]);
        p.weights.push_back(view.weights[i]);
      }
    }
    if (parts.size() < 2 || std::any_of(parts.begin(), parts.end(), [](const RowView& p) { return p.empty(); }))
      Fail(ErrorKind::kInternal, "split with positive gain produced fewer than two nonempty children");

    {
      TreeNode& node = model_.nodes[static_cast<std::size_t>(idx)];
      node.feature = static_cast<std::int32_t>(choice->feature);
      node.categorical = choice->categorical;
      node.threshold = choice->threshold;
      node.levels = std::move(levels);
    }
    std::vector<std::int32_t> children;
    for (const RowView& p : parts) children.push_back(Build(p, depth + 1));
    model_.nodes[static_cast<std::size_t>(idx)].children = std::move(children);
    return idx;
  }

 private:
  TreeModel& model_;
  FeatureSet& selected_;
  const RegConfig& config_;
  Rng& rng_;
};

std::size_t HeaviestChild(const TreeModel& model, const TreeNode& node) {
  std::size_t best = 0;
  double best_w = -1;
  for (std::size_t i = 0; i < node.children.size(); ++i) {
    const double w = model.nodes[static_cast<std::size_t>(node.children[i])].distribution.total;
    if (w > best_w) {
      best_w = w;
      best = i;
    }
  }
  return best;
}

const TreeNode& Route(const TreeModel& model, std::span<const double> row) {
  if (!model.schema || row.size() != model.schema->num_features())
    Fail(ErrorKind::kData, "row has " + std::to_string(row.size()) + " feature values, model expects " +
                               std::to_string(model.schema ? model.schema->num_features() : 0));
  const TreeNode* node = &model.nodes.front();
  while (!node->is_leaf()) {
    const double v = row[static_cast<std::size_t>(node->feature)];
    std::size_t next;
    if (IsMissing(v)) {
      next = HeaviestChild(model, *node);
    } else if (node->categorical) {
      auto it = std::find(node->levels.begin(), node->levels.end(), static_cast<std::int32_t>(v));
      next = (v == std::floor(v) && it != node->levels.end()) ? static_cast<std::size_t>(it - node->levels.begin())
                                                             : HeaviestChild(model, *node);
    } else {
      next = v <= node->threshold ? 0 : 1;
    }
    node = &model.nodes[static_cast<std::size_t>(node->children[next])];
  }
  return *node;
}

}  // namespace

TreeModel GrowTree(const RowView& view, FeatureSet& selected, const RegConfig& config, Rng& rng) {
  config.Validate();
  if (view.empty() || view.data == nullptr) Fail(ErrorKind::kInvalidArgument, "cannot grow a tree on an empty view");
  if (view.weights.size() != view.rows.size()) Fail(ErrorKind::kInvalidArgument, "row view weights misaligned");
  if (view.data->HasMissing()) Fail(ErrorKind::kData, "dataset has missing values; impute before training");
  if (selected.universe() < view.data->num_features()) {
    FeatureSet grown(view.data->num_features());
    for (std::size_t j : selected.order()) grown.Insert(j);
    selected = std::move(grown);
  }
  TreeModel model;
  model.schema = Schema::Of(*view.data);
  model.config = config;
  TreeBuilder(model, selected, config, rng).Build(view, 0);
  return model;
}

int Predict(const TreeModel& model, std::span<const double> row) { return Route(model, row).predicted; }

const ClassHistogram& PredictDistribution(const TreeModel& model, std::span<const double> row) {
  return Route(model, row).distribution;
}

std::size_t TreeModel::depth() const {
  std::size_t best = 0;
  std::vector<std::pair<std::size_t, std::size_t>> stack{{0, 0}};
  while (!stack.empty()) {
    auto [i, d] = stack.back();
    stack.pop_back();
    best = std::max(best, d);
    for (auto c : nodes[i].children) stack.emplace_back(static_cast<std::size_t>(c), d + 1);
  }
  return best;
}

std::size_t TreeModel::num_leaves() const {
  return static_cast<std::size_t>(std::count_if(nodes.begin(), nodes.end(), [](const TreeNode& n) { return n.is_leaf(); }));
}

std::vector<std::size_t> TreeModel::SplitFeatures() const {
  FeatureSet seen;
  for (const TreeNode& n : nodes)
    if (!n.is_leaf()) seen.Insert(static_cast<std::size_t>(n.feature));
  return seen.order();
}

}  // namespace rrf
