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

#ifndef RRF_INFOTHEORY_HPP_
#define RRF_INFOTHEORY_HPP_

#include <cstddef>
#include <span>
#include <vector>

#include "rrf/dataset.hpp"

// Weighted information-theoretic kernels. All quantities are in bits.
namespace rrf {

struct ClassHistogram {
  std::vector<double> counts;
  double total = 0.0;

  ClassHistogram() = default;
  explicit ClassHistogram(std::size_t num_classes) : counts(num_classes, 0.0) {}
  /// Builds a histogram from explicit counts; total is their sum.
  static ClassHistogram FromCounts(std::vector<double> counts);
  /// Weighted class counts of the rows in a view.
  static ClassHistogram FromView(const RowView& view);

  void Add(int cls, double w) {
    counts[static_cast<std::size_t>(cls)] += w;
    total += w;
  }
  std::size_t num_classes() const { return counts.size(); }
  /// Index of the largest count, lowest index on ties.
  int Argmax() const;
  /// Number of classes with positive weight.
  std::size_t NumNonEmpty() const;
  bool IsPure() const { return NumNonEmpty() <= 1; }
};

double Entropy(const ClassHistogram& hist);

/// Child entropies averaged with weights child.total / sum of totals.
double ConditionalEntropy(std::span<const ClassHistogram> children);

/// entropy(parent) - conditional_entropy(children), floored at 0.
double InfoGain(const ClassHistogram& parent, std::span<const ClassHistogram> children);

/// Entropy in bits of a nonnegative weight vector (need not be normalized).
double EntropyOfWeights(std::span<const double> weights);

/// Symmetric uncertainty 2 I(A;B) / (H(A) + H(B)) of a contingency table
/// indexed [a][b]. Throws Error(kDomain) when both marginals are constant.
double SymmetricUncertainty(const std::vector<std::vector<double>>& joint);

struct ThresholdSplit {
  double threshold = 0.0;
  double gain = 0.0;
};

/// Best binary split {x <= t, x > t} of a numeric feature over the midpoints
/// between consecutive distinct values. Ties go to the smallest threshold.
ThresholdSplit BestNumericThreshold(const RowView& view, std::size_t feature, const ClassHistogram& parent);

/// Information gain of the gamma-way split on every categorical level present
/// in the view. Also reports how many children the split has.
double CategoricalSplitGain(const RowView& view, std::size_t feature, const ClassHistogram& parent,
                            std::size_t* arity = nullptr);

}  // namespace rrf

#endif  // RRF_INFOTHEORY_HPP_
