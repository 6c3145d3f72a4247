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

#ifndef RRF_MDSCHEME_HPP_
#define RRF_MDSCHEME_HPP_

#include <cstddef>
#include <span>
#include <vector>

#include "rrf/dataset.hpp"

// Reference selectors on categorical tables. Probabilities are empirical
// frequencies; intended for small exact tables used as test oracles.
namespace rrf::oracle {

inline constexpr double kSelectionEpsilon = 1e-10;
inline constexpr double kIndependenceEpsilon = 1e-9;
inline constexpr std::size_t kMaxBlanketFeatures = 15;

/// I(X_a ; Y | X_given) in bits: the instance-weighted average over joint
/// assignments of `given` of the within-group mutual information.
double ConditionalMI(const Dataset& data, std::size_t a, std::span<const std::size_t> given);

/// I(X_A ; Y | X_given) with X_A the joint variable of the features in `set`.
double JointConditionalMI(const Dataset& data, std::span<const std::size_t> set, std::span<const std::size_t> given);

/// Greedy Max-Dependency selection: each step adds the feature with the
/// largest conditional MI given the features chosen so far (lowest index on
/// ties). Stops after `max_steps` or once the remaining features jointly carry
/// no information about Y given the chosen ones.
std::vector<std::size_t> MdSelect(const Dataset& data, std::size_t max_steps);

/// Level-wise MD tree: one feature per level, chosen by the node-weighted sum
/// of per-node mutual information; every node splits on that feature. Same
/// stopping rule as MdSelect.
std::vector<std::size_t> MdTreeSelect(const Dataset& data, std::size_t max_levels);

/// Every minimum-size S with I(rest ; Y | S) <= kIndependenceEpsilon, in
/// lexicographic order. Refuses tables with more than kMaxBlanketFeatures.
std::vector<std::vector<std::size_t>> MarkovBlanketBruteforce(const Dataset& data);

}  // namespace rrf::oracle

#endif  // RRF_MDSCHEME_HPP_
