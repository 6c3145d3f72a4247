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

#ifndef RRF_SERIALIZE_HPP_
#define RRF_SERIALIZE_HPP_

#include <span>

#include "json.hpp"
#include "rrf/ensemble.hpp"
#include "rrf/eval.hpp"
#include "rrf/tree.hpp"

// JSON documents. Every document carries "format" and "version"; readers
// reject other formats and newer versions with Error(kData).
namespace rrf {

using Json = nlohmann::json;

inline constexpr int kFormatVersion = 1;

Json ToJson(const RegConfig& config);
RegConfig RegConfigFromJson(const Json& j, RegConfig defaults = {});

Json ToJson(const EnsembleConfig& config);
/// Missing keys keep the values of `defaults`.
EnsembleConfig EnsembleConfigFromJson(const Json& j, EnsembleConfig defaults);

Json ToJson(const Schema& schema);
Schema SchemaFromJson(const Json& j);

/// Flat node array; node ids are array positions, node 0 is the root.
Json NodesToJson(const TreeModel& tree);

Json ToJson(const TreeModel& tree);  // "rrf-tree"
TreeModel TreeFromJson(const Json& j);

Json ToJson(const EnsembleModel& model);  // "rrf-ensemble"
EnsembleModel EnsembleFromJson(const Json& j);

/// "rrf-selection": ordered selected features with first-tree indices.
Json SelectionToJson(const EnsembleModel& model);

/// Report body without wall time, so equal inputs give identical bytes.
Json ToJson(const EvalReport& report);
Json ToJson(const CVPlan& plan);

/// "rrf-comparison": one entry per report in the given order.
Json ComparisonToJson(std::span<const EvalReport> reports);

Json CurveToJson(std::span<const CurvePoint> curve, std::span<const std::size_t> order, const Schema& schema);

}  // namespace rrf

#endif  // RRF_SERIALIZE_HPP_
