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

#include "rrf/mdscheme.hpp"

#include <algorithm>
#include <map>
#include <numeric>

#include "rrf/error.hpp"
#include "rrf/infotheory.hpp"

namespace rrf::oracle {

namespace {

void RequireCategorical(const Dataset& data) {
  for (std::size_t j = 0; j < data.num_features(); ++j)
    if (!data.kind(j).categorical)
      Fail(ErrorKind::kUnsupported,
           "feature '" + data.feature_name(j) + "' is numeric; the oracles accept categorical features only");
  if (data.HasMissing()) Fail(ErrorKind::kData, "oracles need a table without missing values; impute first");
}

// Dense id per distinct joint assignment of `features`, one per row.
std::vector<std::size_t> JointIds(const Dataset& data, std::span<const std::size_t> features) {
  std::map<std::vector<int>, std::size_t> ids;
  std::vector<std::size_t> out(data.num_rows());
  std::vector<int> key(features.size());
  for (std::size_t i = 0; i < data.num_rows(); ++i) {
    for (std::size_t k = 0; k < features.size(); ++k) key[k] = static_cast<int>(data.at(i, features[k]));
    out[i] = ids.try_emplace(key, ids.size()).first->second;
  }
  return out;
}

// H(Y | G) for a row grouping G, frequency weighted.
double ConditionalTargetEntropy(const Dataset& data, std::span<const std::size_t> rows,
                                std::span<const std::size_t> group) {
  std::map<std::size_t, ClassHistogram> hists;
  for (std::size_t r : rows) {
    auto [it, fresh] = hists.try_emplace(group[r], data.num_classes());
    it->second.Add(data.label(r), 1.0);
  }
  std::vector<ClassHistogram> parts;
  parts.reserve(hists.size());
  for (auto& [id, h] : hists) parts.push_back(std::move(h));
  return ConditionalEntropy(parts);
}

std::vector<std::size_t> Combine(std::span<const std::size_t> a, std::span<const std::size_t> b) {
  std::map<std::pair<std::size_t, std::size_t>, std::size_t> ids;
  std::vector<std::size_t> out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = ids.try_emplace({a[i], b[i]}, ids.size()).first->second;
  return out;
}

std::vector<std::size_t> AllRows(const Dataset& data) {
  std::vector<std::size_t> rows(data.num_rows());
  std::iota(rows.begin(), rows.end(), 0);
  return rows;
}

double JointCMIUnchecked(const Dataset& data, std::span<const std::size_t> set, std::span<const std::size_t> given) {
  const auto rows = AllRows(data);
  const auto g = JointIds(data, given);
  const auto ag = Combine(JointIds(data, set), g);
  return std::max(0.0, ConditionalTargetEntropy(data, rows, g) - ConditionalTargetEntropy(data, rows, ag));
}

std::vector<std::size_t> Remaining(std::size_t m, std::span<const std::size_t> chosen) {
  std::vector<std::size_t> rest;
  for (std::size_t j = 0; j < m; ++j)
    if (std::find(chosen.begin(), chosen.end(), j) == chosen.end()) rest.push_back(j);
  return rest;
}

}  // namespace

double ConditionalMI(const Dataset& data, std::size_t a, std::span<const std::size_t> given) {
  RequireCategorical(data);
  if (a >= data.num_features()) Fail(ErrorKind::kInvalidArgument, "feature index out of range");
  const std::size_t one[] = {a};
  return JointCMIUnchecked(data, one, given);
}

double JointConditionalMI(const Dataset& data, std::span<const std::size_t> set, std::span<const std::size_t> given) {
  RequireCategorical(data);
  return JointCMIUnchecked(data, set, given);
}

std::vector<std::size_t> MdSelect(const Dataset& data, std::size_t max_steps) {
  RequireCategorical(data);
  std::vector<std::size_t> chosen;
  while (chosen.size() < max_steps && chosen.size() < data.num_features()) {
    const auto rest = Remaining(data.num_features(), chosen);
    double best = 0.0;
    std::size_t arg = rest.front();
    for (std::size_t j : rest) {
      const std::size_t one[] = {j};
      const double v = JointCMIUnchecked(data, one, chosen);
      if (v > best) {
        best = v;
        arg = j;
      }
    }
    // A zero first-order score only ends the search when nothing is left to
    // explain; interactions such as XOR need a zero-score step first.
    if (best <= kSelectionEpsilon && JointCMIUnchecked(data, rest, chosen) <= kSelectionEpsilon) break;
    chosen.push_back(arg);
  }
  return chosen;
}

namespace {

// Mutual information between feature j and Y over the rows of one node.
double NodeMI(const Dataset& data, std::span<const std::size_t> rows, std::size_t j) {
  ClassHistogram parent(data.num_classes());
  std::vector<ClassHistogram> children(data.kind(j).arity(), ClassHistogram(data.num_classes()));
  for (std::size_t r : rows) {
    parent.Add(data.label(r), 1.0);
    children[static_cast<std::size_t>(data.at(r, j))].Add(data.label(r), 1.0);
  }
  return InfoGain(parent, children);
}

// Mutual information between the joint variable of `set` and Y over one node.
double NodeJointMI(const Dataset& data, std::span<const std::size_t> rows, std::span<const std::size_t> set) {
  ClassHistogram parent(data.num_classes());
  std::map<std::vector<int>, ClassHistogram> children;
  std::vector<int> key(set.size());
  for (std::size_t r : rows) {
    parent.Add(data.label(r), 1.0);
    for (std::size_t k = 0; k < set.size(); ++k) key[k] = static_cast<int>(data.at(r, set[k]));
    children.try_emplace(key, data.num_classes()).first->second.Add(data.label(r), 1.0);
  }
  std::vector<ClassHistogram> parts;
  for (auto& [k, h] : children) parts.push_back(std::move(h));
  return InfoGain(parent, parts);
}

}  // namespace

std::vector<std::size_t> MdTreeSelect(const Dataset& data, std::size_t max_levels) {
  RequireCategorical(data);
  const double n = static_cast<double>(data.num_rows());
  std::vector<std::vector<std::size_t>> level{AllRows(data)};
  std::vector<std::size_t> chosen;
  while (chosen.size() < max_levels && chosen.size() < data.num_features()) {
    const auto rest = Remaining(data.num_features(), chosen);
    double best = 0.0;
    std::size_t arg = rest.front();
    for (std::size_t j : rest) {
      double score = 0.0;
      for (const auto& node : level) score += (static_cast<double>(node.size()) / n) * NodeMI(data, node, j);
      if (score > best) {
        best = score;
        arg = j;
      }
    }
    if (best <= kSelectionEpsilon) {
      double residual = 0.0;
      for (const auto& node : level) residual += (static_cast<double>(node.size()) / n) * NodeJointMI(data, node, rest);
      if (residual <= kSelectionEpsilon) break;
    }
    chosen.push_back(arg);
    std::vector<std::vector<std::size_t>> next;
    for (const auto& node : level) {
      std::vector<std::vector<std::size_t>> kids(data.kind(arg).arity());
      for (std::size_t r : node) kids[static_cast<std::size_t>(data.at(r, arg))].push_back(r);
      for (auto& k : kids)
        if (!k.empty()) next.push_back(std::move(k));
    }
    level = std::move(next);
  }
  return chosen;
}

std::vector<std::vector<std::size_t>> MarkovBlanketBruteforce(const Dataset& data) {
  RequireCategorical(data);
  const std::size_t m = data.num_features();
  if (m > kMaxBlanketFeatures)
    Fail(ErrorKind::kUnsupported, "brute-force Markov blanket search refuses " + std::to_string(m) +
                                      " features (limit " + std::to_string(kMaxBlanketFeatures) + ")");
  for (std::size_t size = 0; size <= m; ++size) {
    std::vector<std::vector<std::size_t>> found;
    // Lexicographic enumeration of size-element subsets via a selection mask.
    std::vector<bool> mask(m, false);
    std::fill(mask.begin(), mask.begin() + static_cast<std::ptrdiff_t>(size), true);
    do {
      std::vector<std::size_t> subset, rest;
      for (std::size_t j = 0; j < m; ++j) (mask[j] ? subset : rest).push_back(j);
      const double info = rest.empty() ? 0.0 : JointCMIUnchecked(data, rest, subset);
      if (info <= kIndependenceEpsilon) found.push_back(std::move(subset));
    } while (std::prev_permutation(mask.begin(), mask.end()));
    if (!found.empty()) return found;
  }
  Fail(ErrorKind::kInternal, "full feature set failed the independence test");
}

}  // namespace rrf::oracle
