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

#ifndef RRF_DATASET_HPP_
#define RRF_DATASET_HPP_

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <limits>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "rrf/random.hpp"

namespace rrf {

/// Cell value used for a missing entry in any feature column.
inline constexpr double kMissing = std::numeric_limits<double>::quiet_NaN();
inline bool IsMissing(double v) { return std::isnan(v); }

/// Level name introduced by Impute() for missing categorical cells.
inline constexpr std::string_view kMissingLevel = "\xC2\xABmissing\xC2\xBB";

struct FeatureKind {
  bool categorical = false;
  std::vector<std::string> levels;  // categorical only, first-appearance order

  static FeatureKind Numeric() { return {}; }
  static FeatureKind Categorical(std::vector<std::string> levels) { return {true, std::move(levels)}; }
  std::size_t arity() const { return levels.size(); }
  bool operator==(const FeatureKind&) const = default;
};

/// Columnar table of M features and a categorical target.
///
/// Categorical cells store the level index as a double, numeric cells store
/// the finite value; either may hold kMissing. The target never has missing
/// values. Instances are immutable once constructed through Make().
class Dataset {
 public:
  Dataset() = default;

  /// Validates every invariant and throws Error(kData) on violation.
  static Dataset Make(std::vector<std::string> feature_names, std::vector<FeatureKind> kinds,
                      std::vector<std::vector<double>> columns, std::vector<int> target,
                      std::vector<std::string> class_names, std::string target_name = "class");

  std::size_t num_rows() const { return target_.size(); }
  std::size_t num_features() const { return columns_.size(); }
  std::size_t num_classes() const { return class_names_.size(); }

  const std::vector<std::string>& feature_names() const { return feature_names_; }
  const std::string& feature_name(std::size_t j) const { return feature_names_[j]; }
  const FeatureKind& kind(std::size_t j) const { return kinds_[j]; }
  const std::vector<FeatureKind>& kinds() const { return kinds_; }
  std::span<const double> column(std::size_t j) const { return columns_[j]; }
  double at(std::size_t row, std::size_t j) const { return columns_[j][row]; }
  std::span<const int> target() const { return target_; }
  int label(std::size_t row) const { return target_[row]; }
  const std::vector<std::string>& class_names() const { return class_names_; }
  const std::string& target_name() const { return target_name_; }

  /// Feature values of one row, in feature order.
  std::vector<double> Row(std::size_t row) const;

  bool HasMissing() const;
  bool AllCategorical() const;

  /// New dataset holding the given rows (duplicates allowed) with the same
  /// schema: feature kinds and class names are kept even when a level or
  /// class does not occur in the subset.
  Dataset SelectRows(std::span<const std::size_t> rows) const;

  /// Copy with every label replaced; schema unchanged.
  Dataset WithTarget(std::vector<int> target) const;

  bool operator==(const Dataset& other) const;

 private:
  std::vector<std::string> feature_names_;
  std::vector<FeatureKind> kinds_;
  std::vector<std::vector<double>> columns_;
  std::vector<int> target_;
  std::vector<std::string> class_names_;
  std::string target_name_ = "class";
};

struct CsvOptions {
  std::string target;             // column name, or a 0-based index (negative counts from the end)
  std::string missing_token = "?";
};

Dataset LoadCsv(const std::string& path, const CsvOptions& options);
Dataset ParseCsv(std::istream& in, const CsvOptions& options);

/// Writes the dataset in canonical form: header row, features in order then
/// the target column last, numbers in shortest round-trip notation, missing
/// cells as `missing_token`.
void WriteCsv(std::ostream& out, const Dataset& dataset, const std::string& missing_token = "?");

/// Reads rows against a known schema: the header must list `feature_names`
/// in order, optionally plus a column named `ignore_column` anywhere.
/// Categorical cells are mapped by level name; a level not in `kinds` maps to
/// an out-of-range index. Missing cells become kMissing.
std::vector<std::vector<double>> ReadRowsForSchema(std::istream& in, const std::vector<std::string>& feature_names,
                                                   const std::vector<FeatureKind>& kinds,
                                                   const std::string& ignore_column,
                                                   const std::string& missing_token = "?");

/// Numeric missing cells become the column median; categorical missing cells
/// become an explicit extra level. Throws Error(kData) for a numeric column
/// with no observed value.
Dataset Impute(const Dataset& dataset);

/// Rows of a dataset with per-row weights. Row ids may repeat.
struct RowView {
  const Dataset* data = nullptr;
  std::vector<std::uint32_t> rows;
  std::vector<double> weights;

  std::size_t size() const { return rows.size(); }
  bool empty() const { return rows.empty(); }
  double total_weight() const;

  static RowView All(const Dataset& data, double weight = 1.0);
};

/// `n_draw` row ids drawn uniformly with replacement, unit weights.
RowView Bootstrap(const Dataset& data, Rng& rng, std::size_t n_draw);

}  // namespace rrf

#endif  // RRF_DATASET_HPP_
