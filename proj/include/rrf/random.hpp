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

#ifndef RRF_RANDOM_HPP_
#define RRF_RANDOM_HPP_

#include <cstdint>
#include <initializer_list>
#include <random>

namespace rrf {

using Rng = std::mt19937_64;

// Seed derivation scheme. Every internal random stream is seeded with
//   DeriveSeed(master, {c0, c1, ...})
// which folds each counter into the master seed through one SplitMix64 round.
// Counters used by the library:
//   ensemble tree t:        {kStreamTree, t} and {kStreamBootstrap, t}
//   CV repeat r / fold k:   {kStreamFolds, r} and {kStreamCell, r, k, ...}
//   accuracy curve:         {kStreamCurve, ...}
inline std::uint64_t SplitMix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t DeriveSeed(std::uint64_t master, std::initializer_list<std::uint64_t> counters) {
  std::uint64_t s = SplitMix64(master);
  for (std::uint64_t c : counters) s = SplitMix64(s ^ SplitMix64(c + 0x632be59bd9b4e019ULL));
  return s;
}

enum StreamId : std::uint64_t {
  kStreamTree = 1,
  kStreamBootstrap = 2,
  kStreamFolds = 3,
  kStreamCell = 4,
  kStreamCurve = 5,
  kStreamSelector = 6,
  kStreamClassifier = 7,
};

// Uniform integer in [0, n) by rejection; unlike std::uniform_int_distribution
// the result sequence does not depend on the standard library vendor.
inline std::uint64_t UniformIndex(Rng& rng, std::uint64_t n) {
  const std::uint64_t limit = Rng::max() - (Rng::max() % n);
  std::uint64_t x;
  do {
    x = rng();
  } while (x >= limit);
  return x % n;
}

template <class RandomIt>
void Shuffle(RandomIt first, RandomIt last, Rng& rng) {
  const auto n = static_cast<std::uint64_t>(last - first);
  for (std::uint64_t i = n; i > 1; --i) {
    const std::uint64_t j = UniformIndex(rng, i);
    std::swap(first[i - 1], first[j]);
  }
}

}  // namespace rrf

#endif  // RRF_RANDOM_HPP_
