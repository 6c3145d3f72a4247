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

#include <doctest.h>

#include <cmath>
#include <map>
#include <random>
#include <set>

#include "rrf/error.hpp"
#include "rrf/mdscheme.hpp"
#include "test_support.hpp"

namespace rrf::oracle {
namespace {

using testing::Categorical;
using testing::ConditionalMIJoint;

// H(Y | X_vars) from joint frequencies.
double CondEntropyY(const Dataset& d, const std::vector<std::size_t>& vars) {
  std::map<std::vector<int>, std::map<int, double>> groups;
  for (std::size_t i = 0; i < d.num_rows(); ++i) {
    std::vector<int> key;
    for (std::size_t j : vars) key.push_back(static_cast<int>(d.at(i, j)));
    groups[key][d.label(i)] += 1;
  }
  double h = 0;
  for (const auto& [key, ys] : groups) {
    double n = 0;
    for (const auto& [y, c] : ys) n += c;
    for (const auto& [y, c] : ys) h -= c / d.num_rows() * std::log2(c / n);
  }
  return h;
}

// Greedy selection written directly from the definition.
std::vector<std::size_t> MdReference(const Dataset& d) {
  std::vector<std::size_t> chosen, all;
  for (std::size_t j = 0; j < d.num_features(); ++j) all.push_back(j);
  while (chosen.size() < d.num_features()) {
    std::size_t best = 0;
    double best_score = -1;
    for (std::size_t j = 0; j < d.num_features(); ++j) {
      if (std::find(chosen.begin(), chosen.end(), j) != chosen.end()) continue;
      const double s = ConditionalMIJoint(d, j, chosen);
      if (s > best_score + 1e-12) best_score = s, best = j;
    }
    const double residual = CondEntropyY(d, chosen) - CondEntropyY(d, all);
    if (best_score <= kSelectionEpsilon && residual <= kSelectionEpsilon) break;
    chosen.push_back(best);
  }
  return chosen;
}

Dataset RandomTable(std::mt19937_64& rng, std::size_t rows, std::size_t features, int arity, int classes) {
  std::vector<std::vector<int>> x(rows, std::vector<int>(features));
  std::vector<int> y(rows);
  for (std::size_t i = 0; i < rows; ++i) {
    for (auto& v : x[i]) v = static_cast<int>(rng() % arity);
    y[i] = static_cast<int>(rng() % classes);
  }
  return Categorical(x, y, arity, classes);
}

// The 256 labelings of the exhaustive three-binary-feature table.
Dataset ExhaustiveTable(unsigned labels) {
  std::vector<std::vector<int>> x;
  std::vector<int> y;
  for (int r = 0; r < 8; ++r) {
    x.push_back({(r >> 2) & 1, (r >> 1) & 1, r & 1});
    y.push_back(static_cast<int>((labels >> r) & 1));
  }
  return Categorical(x, y);
}

TEST_SUITE("mdscheme") {
  TEST_CASE("conditional MI on XOR") {
    const Dataset d = testing::XorTable(false);
    CHECK(d.num_rows() == 4);
    const std::vector<std::size_t> none, x2{1};
    CHECK(ConditionalMI(d, 0, none) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(ConditionalMI(d, 0, x2) == doctest::Approx(1.0).epsilon(1e-12));
    const std::vector<std::size_t> both{0, 1};
    CHECK(JointConditionalMI(d, both, none) == doctest::Approx(1.0).epsilon(1e-12));
  }

  TEST_CASE("conditional MI is zero for a member of the conditioning set") {
    std::mt19937_64 rng(4);
    for (int t = 0; t < 50; ++t) {
      const Dataset d = RandomTable(rng, 12, 3, 3, 2);
      const std::vector<std::size_t> g{0, 2};
      CHECK(ConditionalMI(d, 0, g) == doctest::Approx(0.0).epsilon(1e-12));
      CHECK(ConditionalMI(d, 1, g) >= 0.0);
    }
  }

  TEST_CASE("independent within every group") {
    // Within each X2 group, X1 and Y are independent by construction.
    const Dataset d = Categorical({{0, 0}, {0, 0}, {1, 0}, {1, 0}, {0, 1}, {1, 1}, {0, 1}, {1, 1}},
                                  {0, 1, 0, 1, 1, 1, 0, 0});
    const std::vector<std::size_t> g{1};
    CHECK(ConditionalMI(d, 0, g) == doctest::Approx(0.0).epsilon(1e-12));
  }

  TEST_CASE("conditional MI matches the joint-distribution formula") {
    std::mt19937_64 rng(1);
    for (int t = 0; t < 100; ++t) {
      const Dataset d = RandomTable(rng, 10 + rng() % 30, 3, 2 + static_cast<int>(rng() % 2), 2 + rng() % 2);
      const std::size_t a = rng() % 3;
      std::vector<std::size_t> given;
      for (std::size_t j = 0; j < 3; ++j)
        if (j != a && (rng() & 1)) given.push_back(j);
      CHECK(std::abs(ConditionalMI(d, a, given) - ConditionalMIJoint(d, a, given)) <= 1e-9);
    }
  }

  TEST_CASE("MD picks the copied feature first") {
    std::mt19937_64 rng(3);
    std::vector<std::vector<int>> x;
    std::vector<int> y;
    for (int i = 0; i < 40; ++i) {
      x.push_back({int(rng() % 2), int(rng() % 2), int(rng() % 2), int(rng() % 2)});
      y.push_back(x.back()[2]);
    }
    const Dataset d = Categorical(x, y);
    const auto sel = MdSelect(d, 4);
    REQUIRE_FALSE(sel.empty());
    CHECK(sel[0] == 2);
  }

  TEST_CASE("MD step one is the pairwise MI argmax") {
    std::mt19937_64 rng(8);
    for (int t = 0; t < 30; ++t) {
      const Dataset d = RandomTable(rng, 30, 4, 3, 3);
      const auto sel = MdSelect(d, 1);
      if (sel.empty()) continue;
      for (std::size_t j = 0; j < 4; ++j) CHECK(ConditionalMIJoint(d, j, {}) <= ConditionalMIJoint(d, sel[0], {}) + 1e-12);
    }
  }

  TEST_CASE("MD skips a duplicate while informative features remain") {
    std::mt19937_64 rng(5);
    std::vector<std::vector<int>> x;
    std::vector<int> y;
    for (int i = 0; i < 64; ++i) {
      const int a = int(rng() % 2), b = int(rng() % 2);
      x.push_back({a, a, b});
      y.push_back(a + 2 * b);
    }
    const Dataset d = Categorical(x, y, 2, 4);
    const auto sel = MdSelect(d, 3);
    REQUIRE(sel.size() >= 2);
    CHECK(sel[0] != 1);
    CHECK(std::find(sel.begin(), sel.end(), 2) != sel.end());
    CHECK(std::find(sel.begin(), sel.end(), 1) == sel.end());
  }

  TEST_CASE("MD on XOR with noise") {
    for (bool noise : {false, true}) {
      const auto sel = MdSelect(testing::XorTable(noise), 3);
      CHECK(sel.size() == 2);
      CHECK(std::set<std::size_t>(sel.begin(), sel.end()) == std::set<std::size_t>{0, 1});
    }
  }

  TEST_CASE("MD agrees with the reference greedy on random tables") {
    std::mt19937_64 rng(10);
    for (int t = 0; t < 60; ++t) {
      const Dataset d = RandomTable(rng, 8 + rng() % 20, 3 + rng() % 2, 2, 2 + rng() % 2);
      CHECK(MdSelect(d, d.num_features()) == MdReference(d));
    }
  }

  TEST_CASE("MD tree equals MD on exhaustive tables") {
    for (unsigned labels = 0; labels < 256; ++labels) {
      const Dataset d = ExhaustiveTable(labels);
      const auto a = MdSelect(d, 3);
      const auto b = MdTreeSelect(d, 3);
      CHECK(std::set<std::size_t>(a.begin(), a.end()) == std::set<std::size_t>(b.begin(), b.end()));
    }
  }

  TEST_CASE("MD tree edge cases") {
    CHECK(MdTreeSelect(ExhaustiveTable(0), 3).empty());
    CHECK(MdTreeSelect(ExhaustiveTable(0xFF), 3).empty());
    // Y = X1: the first feature is the high bit of the row index.
    CHECK(MdTreeSelect(ExhaustiveTable(0xF0), 3) == std::vector<std::size_t>{0});
    CHECK(MdSelect(ExhaustiveTable(0xF0), 3) == std::vector<std::size_t>{0});
  }

  TEST_CASE("Markov blankets") {
    using Sets = std::vector<std::vector<std::size_t>>;
    CHECK(MarkovBlanketBruteforce(testing::XorTable(true)) == Sets{{0, 1}});
    CHECK(MarkovBlanketBruteforce(testing::RedundantPairTable()) == Sets{{1}});
    const Dataset indep = Categorical({{0, 0}, {0, 1}, {1, 0}, {1, 1}, {0, 0}, {0, 1}, {1, 0}, {1, 1}},
                                      {0, 0, 0, 0, 1, 1, 1, 1});
    CHECK(MarkovBlanketBruteforce(indep) == Sets{{}});
    // Two exact copies give two minimal blankets.
    const Dataset twins = Categorical({{0, 0, 1}, {1, 1, 0}, {0, 0, 0}, {1, 1, 1}}, {0, 1, 0, 1});
    CHECK(MarkovBlanketBruteforce(twins) == Sets{{0}, {1}});
  }

  TEST_CASE("returned blankets are inclusion-minimal") {
    std::mt19937_64 rng(2);
    for (int t = 0; t < 40; ++t) {
      const Dataset d = RandomTable(rng, 16, 4, 2, 2);
      for (const auto& b : MarkovBlanketBruteforce(d)) {
        std::vector<std::size_t> rest;
        for (std::size_t j = 0; j < 4; ++j)
          if (std::find(b.begin(), b.end(), j) == b.end()) rest.push_back(j);
        std::vector<std::size_t> all{0, 1, 2, 3};
        CHECK(CondEntropyY(d, b) - CondEntropyY(d, all) <= kIndependenceEpsilon);
        for (std::size_t k = 0; k < b.size(); ++k) {
          auto smaller = b;
          smaller.erase(smaller.begin() + static_cast<std::ptrdiff_t>(k));
          CHECK(CondEntropyY(d, smaller) - CondEntropyY(d, all) > kIndependenceEpsilon);
        }
      }
    }
  }

  TEST_CASE("input restrictions") {
    const Dataset num = testing::Numeric({{1}, {2}}, {0, 1});
    CHECK_THROWS_AS(MdSelect(num, 1), Error);
    CHECK_THROWS_AS(MarkovBlanketBruteforce(num), Error);
    std::mt19937_64 rng(1);
    const Dataset wide = RandomTable(rng, 8, 16, 2, 2);
    try {
      MarkovBlanketBruteforce(wide);
      FAIL("expected a refusal");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::kUnsupported);
    }
  }
}

}  // namespace
}  // namespace rrf::oracle
