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

#include "rrf/infotheory.hpp"

#include <algorithm>
#include <cmath>

#include "rrf/error.hpp"

namespace rrf {

ClassHistogram ClassHistogram::FromCounts(std::vector<double> counts) {
  ClassHistogram h;
  h.counts = std::move(counts);
  for (double c : h.counts) h.total += c;
  return h;
}

ClassHistogram ClassHistogram::FromView(const RowView& view) {
  ClassHistogram h(view.data->num_classes());
  for (std::size_t i = 0; i < view.rows.size(); ++i) h.Add(view.data->label(view.rows[i]), view.weights[i]);
  return h;
}

int ClassHistogram::Argmax() const {
  int best = 0;
  for (std::size_t c = 1; c < counts.size(); ++c)
    if (counts[c] > counts[static_cast<std::size_t>(best)]) best = static_cast<int>(c);
  return best;
}

std::size_t ClassHistogram::NumNonEmpty() const {
  return static_cast<std::size_t>(std::count_if(counts.begin(), counts.end(), [](double c) { return c > 0; }));
}

double EntropyOfWeights(std::span<const double> weights) {
  double total = 0;
  for (double w : weights) total += w;
  if (!(total > 0)) Fail(ErrorKind::kDomain, "entropy of a distribution with zero total weight");
  double h = 0;
  for (double w : weights) {
    if (w <= 0) continue;
    const double p = w / total;
    h -= p * std::log2(p);
  }
  return std::max(h, 0.0);
}

double Entropy(const ClassHistogram& hist) {
  if (!(hist.total > 0)) Fail(ErrorKind::kDomain, "entropy of an empty histogram");
  double h = 0;
  for (double w : hist.counts) {
    if (w <= 0) continue;
    const double p = w / hist.total;
    h -= p * std::log2(p);
  }
  return std::max(h, 0.0);
}

double ConditionalEntropy(std::span<const ClassHistogram> children) {
  double grand = 0;
  for (const auto& c : children) grand += c.total;
  if (!(grand > 0)) Fail(ErrorKind::kDomain, "conditional entropy with all child totals zero");
  double h = 0;
  for (const auto& c : children)
    if (c.total > 0) h += (c.total / grand) * Entropy(c);
  return h;
}

double InfoGain(const ClassHistogram& parent, std::span<const ClassHistogram> children) {
  return std::max(0.0, Entropy(parent) - ConditionalEntropy(children));
}

double SymmetricUncertainty(const std::vector<std::vector<double>>& joint) {
  if (joint.empty()) Fail(ErrorKind::kDomain, "symmetric uncertainty of an empty table");
  const std::size_t nb = joint.front().size();
  std::vector<double> pa(joint.size(), 0.0), pb(nb, 0.0);
  double total = 0;
  for (std::size_t a = 0; a < joint.size(); ++a) {
    if (joint[a].size() != nb) Fail(ErrorKind::kInvalidArgument, "contingency table rows differ in length");
    for (std::size_t b = 0; b < nb; ++b) {
      pa[a] += joint[a][b];
      pb[b] += joint[a][b];
      total += joint[a][b];
    }
  }
  if (!(total > 0)) Fail(ErrorKind::kDomain, "symmetric uncertainty of a table with zero total");
  const double ha = EntropyOfWeights(pa);
  const double hb = EntropyOfWeights(pb);
  if (!(ha + hb > 0)) Fail(ErrorKind::kDomain, "symmetric uncertainty undefined: both variables are constant");
  // H(A|B) = sum_b p(b) H(A | B=b)
  double ha_given_b = 0;
  std::vector<double> column(joint.size());
  for (std::size_t b = 0; b < nb; ++b) {
    if (!(pb[b] > 0)) continue;
    for (std::size_t a = 0; a < joint.size(); ++a) column[a] = joint[a][b];
    ha_given_b += (pb[b] / total) * EntropyOfWeights(column);
  }
  const double mi = std::max(0.0, ha - ha_given_b);
  return std::clamp(2.0 * mi / (ha + hb), 0.0, 1.0);
}

namespace {

struct Cell {
  double value;
  int cls;
  double weight;
};

constexpr double kTieTolerance = 1e-12;

}  // namespace

ThresholdSplit BestNumericThreshold(const RowView& view, std::size_t feature, const ClassHistogram& parent) {
  const Dataset& d = *view.data;
  std::vector<Cell> cells(view.rows.size());
  for (std::size_t i = 0; i < view.rows.size(); ++i)
    cells[i] = {d.at(view.rows[i], feature), d.label(view.rows[i]), view.weights[i]};
  std::sort(cells.begin(), cells.end(), [](const Cell& a, const Cell& b) { return a.value < b.value; });

  ThresholdSplit best{cells.empty() ? 0.0 : cells.front().value, 0.0};
  if (cells.size() < 2) return best;

  const double parent_entropy = Entropy(parent);
  std::vector<ClassHistogram> children(2, ClassHistogram(parent.num_classes()));
  ClassHistogram& left = children[0];
  ClassHistogram& right = children[1];
  bool found = false;
  for (std::size_t i = 0; i + 1 < cells.size(); ++i) {
    left.Add(cells[i].cls, cells[i].weight);
    if (!(cells[i].value < cells[i + 1].value)) continue;
    right.total = 0;
    for (std::size_t c = 0; c < parent.num_classes(); ++c) {
      right.counts[c] = std::max(0.0, parent.counts[c] - left.counts[c]);
      right.total += right.counts[c];
    }
    const double gain = std::max(0.0, parent_entropy - ConditionalEntropy(children));
    if (!found || gain > best.gain + kTieTolerance) {
      const double a = cells[i].value;
      const double b = cells[i + 1].value;
      double t = a + (b - a) / 2;
      if (!(t < b)) t = a;
      best = {t, gain};
      found = true;
    }
  }
  return best;
}

double CategoricalSplitGain(const RowView& view, std::size_t feature, const ClassHistogram& parent,
                            std::size_t* arity) {
  const Dataset& d = *view.data;
  std::vector<ClassHistogram> children(d.kind(feature).arity(), ClassHistogram(parent.num_classes()));
  for (std::size_t i = 0; i < view.rows.size(); ++i) {
    const auto level = static_cast<std::size_t>(d.at(view.rows[i], feature));
    children[level].Add(d.label(view.rows[i]), view.weights[i]);
  }
  std::erase_if(children, [](const ClassHistogram& h) { return !(h.total > 0); });
  if (arity) *arity = children.size();
  if (children.size() < 2) return 0.0;
  return InfoGain(parent, children);
}

}  // namespace rrf
