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

#ifndef RRF_TREE_HPP_
#define RRF_TREE_HPP_

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rrf/dataset.hpp"
#include "rrf/infotheory.hpp"
#include "rrf/random.hpp"

namespace rrf {

enum class TreeMode {
  kRegularized,  // gain_R over all features in F plus up to K random newcomers
  kPlain,        // K random candidates, raw gain, F ignored
};

struct RegConfig {
  TreeMode mode = TreeMode::kRegularized;
  double lambda = 0.5;
  std::size_t n_candidates = 0;  // K; 0 selects ceil(sqrt(number of eligible features))
  std::size_t min_node_size = 2;
  std::size_t max_depth = 0;     // 0 means unlimited
  double gain_epsilon = 1e-10;
  // Features the tree may split on; nullopt means all of them. Used to train
  // a classifier on a selected subset without reshaping the data.
  std::optional<std::vector<std::size_t>> feature_pool;

  /// Throws Error(kInvalidArgument) when lambda is outside [0, 1].
  void Validate() const;
  /// K for a dataset with `num_features` columns under this config.
  std::size_t CandidateCount(std::size_t num_features) const;
};

/// Ordered set of distinct feature indices, in insertion order.
class FeatureSet {
 public:
  FeatureSet() = default;
  explicit FeatureSet(std::size_t num_features) : mask_(num_features, false) {}

  bool Contains(std::size_t j) const { return j < mask_.size() && mask_[j]; }
  /// Appends j unless present; returns whether it was added.
  bool Insert(std::size_t j);
  std::size_t size() const { return order_.size(); }
  bool empty() const { return order_.empty(); }
  const std::vector<std::size_t>& order() const { return order_; }
  std::size_t universe() const { return mask_.size(); }

  bool operator==(const FeatureSet&) const = default;

 private:
  std::vector<std::size_t> order_;
  std::vector<bool> mask_;
};

/// Regularized gain: lambda * gain for a feature outside F, gain otherwise.
inline double GainRegularized(double gain, bool in_set, double lambda) { return in_set ? gain : lambda * gain; }

/// One evaluated candidate, listed in evaluation order.
struct CandidateGain {
  std::size_t feature = 0;
  double gain = 0.0;  // raw information gain
  bool in_set = false;
};

/// Picks the candidate with strictly greatest gain_R, starting from a best of
/// zero, so the first candidate encountered wins ties. Returns its position in
/// `evaluated`, or nullopt when the best gain_R does not exceed `epsilon`.
std::optional<std::size_t> SelectRegularized(std::span<const CandidateGain> evaluated, double lambda,
                                             double epsilon);

struct SplitChoice {
  std::size_t feature = 0;
  bool categorical = false;
  double threshold = 0.0;  // numeric only
  double gain = 0.0;
  double gain_regularized = 0.0;
};

/// Chooses the split of a node. Regularized mode evaluates a random
/// permutation of the features outside F (at most K of them) followed by every
/// member of F in insertion order. Plain mode evaluates K random features.
/// The evaluated candidates are appended to `trace` when it is non-null.
std::optional<SplitChoice> SplitSearch(const RowView& view, const FeatureSet& selected, const RegConfig& config,
                                       Rng& rng, std::vector<CandidateGain>* trace = nullptr);

struct Schema {
  std::vector<std::string> feature_names;
  std::vector<FeatureKind> kinds;
  std::vector<std::string> class_names;
  std::string target_name = "class";

  static std::shared_ptr<const Schema> Of(const Dataset& d);
  std::size_t num_features() const { return kinds.size(); }
  std::size_t num_classes() const { return class_names.size(); }
  bool operator==(const Schema&) const = default;
};

struct TreeNode {
  std::int32_t feature = -1;  // -1 marks a leaf
  bool categorical = false;
  double threshold = 0.0;          // numeric: value <= threshold goes to children[0]
  std::vector<std::int32_t> levels;  // categorical: level routed to each child
  std::vector<std::int32_t> children;
  ClassHistogram distribution;  // training weight per class reaching the node
  std::int32_t predicted = 0;

  bool is_leaf() const { return feature < 0; }
};

struct TreeModel {
  std::vector<TreeNode> nodes;  // nodes[0] is the root
  std::shared_ptr<const Schema> schema;
  RegConfig config;

  std::size_t depth() const;
  std::size_t num_leaves() const;
  /// Distinct split features in first-use (pre-order) order.
  std::vector<std::size_t> SplitFeatures() const;
};

/// Induces one tree on `view`. In regularized mode every feature that wins a
/// split and is not yet in `selected` is appended to it before the node's
/// children are grown.
TreeModel GrowTree(const RowView& view, FeatureSet& selected, const RegConfig& config, Rng& rng);

/// Class index for a row of feature values (length must match the schema).
/// Unseen categorical levels and missing values follow the heaviest child.
int Predict(const TreeModel& model, std::span<const double> row);
/// Leaf class distribution reached by the row.
const ClassHistogram& PredictDistribution(const TreeModel& model, std::span<const double> row);

}  // namespace rrf

#endif  // RRF_TREE_HPP_
