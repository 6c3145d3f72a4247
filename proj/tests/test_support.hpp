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

// Fixtures and brute-force reference computations shared by the tests. The
// oracles here are written from the definitions and deliberately avoid the
// library's own kernels.

#ifndef RRF_TESTS_TEST_SUPPORT_HPP_
#define RRF_TESTS_TEST_SUPPORT_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "rrf/dataset.hpp"
#include "rrf/random.hpp"

namespace rrf::testing {

inline std::string DataPath(const std::string& name) { return std::string(RRF_DATA_DIR) + "/" + name; }

inline Dataset LoadBundled(const std::string& name) { return Impute(LoadCsv(DataPath(name), {"-1", "?"})); }

// All-categorical dataset from small integer codes. Level names are "0", "1",
// ...; class names "c0", "c1", ... with `num_classes` classes.
inline Dataset Categorical(const std::vector<std::vector<int>>& rows, const std::vector<int>& y, int arity = 2,
                           int num_classes = 2) {
  const std::size_t m = rows.empty() ? 0 : rows[0].size();
  std::vector<std::string> names, levels, classes;
  for (std::size_t j = 0; j < m; ++j) names.push_back("X" + std::to_string(j + 1));
  for (int v = 0; v < arity; ++v) levels.push_back(std::to_string(v));
  for (int c = 0; c < num_classes; ++c) classes.push_back("c" + std::to_string(c));
  std::vector<std::vector<double>> cols(m);
  for (const auto& r : rows)
    for (std::size_t j = 0; j < m; ++j) cols[j].push_back(r[j]);
  return Dataset::Make(names, std::vector<FeatureKind>(m, FeatureKind::Categorical(levels)), cols, y, classes, "Y");
}

// Numeric dataset from row-major values.
inline Dataset Numeric(const std::vector<std::vector<double>>& rows, const std::vector<int>& y, int num_classes = 2) {
  const std::size_t m = rows.empty() ? 0 : rows[0].size();
  std::vector<std::string> names, classes;
  for (std::size_t j = 0; j < m; ++j) names.push_back("X" + std::to_string(j + 1));
  for (int c = 0; c < num_classes; ++c) classes.push_back("c" + std::to_string(c));
  std::vector<std::vector<double>> cols(m);
  for (const auto& r : rows)
    for (std::size_t j = 0; j < m; ++j) cols[j].push_back(r[j]);
  return Dataset::Make(names, std::vector<FeatureKind>(m, FeatureKind::Numeric()), cols, y, classes, "Y");
}

// Y = X1 xor X2 with X3 as noise, every assignment once (8 rows).
inline Dataset XorTable(bool with_noise = true) {
  std::vector<std::vector<int>> rows;
  std::vector<int> y;
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      for (int c = 0; c < (with_noise ? 2 : 1); ++c) {
        rows.push_back(with_noise ? std::vector<int>{a, b, c} : std::vector<int>{a, b});
        y.push_back(a ^ b);
      }
  return Categorical(rows, y);
}

// Two features where X2 alone determines the class and X1 agrees with X2 on
// most rows but carries nothing beyond it.
inline Dataset RedundantPairTable() {
  return Categorical({{0, 0}, {0, 0}, {0, 0}, {1, 0}, {1, 1}, {1, 1}, {1, 1}, {0, 1}}, {0, 0, 0, 0, 1, 1, 1, 1});
}

// Numeric version: X2 thresholds the class perfectly, X1 only partly.
inline Dataset RedundantPairNumeric(Rng& rng, std::size_t n) {
  std::vector<std::vector<double>> rows;
  std::vector<int> y;
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (std::size_t i = 0; i < n; ++i) {
    const double x2 = u(rng);
    const int cls = x2 > 0.5 ? 1 : 0;
    const double x1 = cls + 0.9 * (u(rng) - 0.5) * 2.0;  // overlapping ranges
    rows.push_back({x1, x2});
    y.push_back(cls);
  }
  return Numeric(rows, y);
}

// Appends exact copies of the listed columns, named "<name>_copy".
inline Dataset WithCopies(const Dataset& d, const std::vector<std::size_t>& which) {
  std::vector<std::string> names = d.feature_names();
  std::vector<FeatureKind> kinds = d.kinds();
  std::vector<std::vector<double>> cols;
  for (std::size_t j = 0; j < d.num_features(); ++j) cols.emplace_back(d.column(j).begin(), d.column(j).end());
  for (std::size_t j : which) {
    names.push_back(d.feature_name(j) + "_copy");
    kinds.push_back(d.kind(j));
    cols.emplace_back(d.column(j).begin(), d.column(j).end());
  }
  return Dataset::Make(names, kinds, cols, std::vector<int>(d.target().begin(), d.target().end()), d.class_names(),
                       d.target_name());
}

// -- oracles -----------------------------------------------------------------

inline double EntropyFormula(const std::vector<double>& counts) {
  double total = 0.0;
  for (double c : counts) total += c;
  double h = 0.0;
  for (double c : counts)
    if (c > 0) h -= (c / total) * std::log2(c / total);
  return h;
}

inline double GainFormula(const std::vector<double>& parent, const std::vector<std::vector<double>>& children) {
  double total = 0.0;
  for (double c : parent) total += c;
  double cond = 0.0;
  for (const auto& ch : children) {
    double t = 0.0;
    for (double c : ch) t += c;
    if (t > 0) cond += t / total * EntropyFormula(ch);
  }
  return std::max(0.0, EntropyFormula(parent) - cond);
}

struct ThresholdOracle {
  double threshold = 0.0;
  double gain = 0.0;
};

// Every midpoint between consecutive distinct values, evaluated from scratch.
inline ThresholdOracle BestThresholdBruteForce(const std::vector<double>& x, const std::vector<int>& y,
                                               const std::vector<double>& w, int num_classes) {
  std::vector<double> distinct(x);
  std::sort(distinct.begin(), distinct.end());
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
  std::vector<double> parent(num_classes, 0.0);
  for (std::size_t i = 0; i < x.size(); ++i) parent[y[i]] += w[i];
  ThresholdOracle best;
  bool any = false;
  for (std::size_t k = 0; k + 1 < distinct.size(); ++k) {
    const double t = (distinct[k] + distinct[k + 1]) / 2.0;
    std::vector<double> left(num_classes, 0.0), right(num_classes, 0.0);
    for (std::size_t i = 0; i < x.size(); ++i) (x[i] <= t ? left : right)[y[i]] += w[i];
    const double g = GainFormula(parent, {left, right});
    if (!any || g > best.gain + 1e-12) {
      best = {t, g};
      any = true;
    }
  }
  return best;
}

// I(A;Y | G) straight from the joint distribution p(a, y, g).
inline double ConditionalMIJoint(const Dataset& d, std::size_t a, const std::vector<std::size_t>& given) {
  std::map<std::vector<int>, double> pagy, pag, pgy, pg;
  const double n = static_cast<double>(d.num_rows());
  for (std::size_t i = 0; i < d.num_rows(); ++i) {
    std::vector<int> g;
    for (std::size_t j : given) g.push_back(static_cast<int>(d.at(i, j)));
    const int av = static_cast<int>(d.at(i, a));
    const int yv = d.label(i);
    auto ag = g, gy = g, agy = g;
    ag.push_back(av);
    gy.push_back(-1 - yv);
    agy.push_back(av);
    agy.push_back(-1 - yv);
    pagy[agy] += 1 / n;
    pag[ag] += 1 / n;
    pgy[gy] += 1 / n;
    pg[g] += 1 / n;
  }
  double mi = 0.0;
  for (const auto& [key, p] : pagy) {
    std::vector<int> g(key.begin(), key.end() - 2);
    auto ag = g, gy = g;
    ag.push_back(key[key.size() - 2]);
    gy.push_back(key.back());
    mi += p * std::log2(p * pg[g] / (pag[ag] * pgy[gy]));
  }
  return mi;
}

inline std::vector<double> Ranks(const std::vector<double>& v) {
  std::vector<std::size_t> idx(v.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
  std::vector<double> r(v.size());
  for (std::size_t i = 0; i < idx.size();) {
    std::size_t j = i;
    while (j + 1 < idx.size() && v[idx[j + 1]] == v[idx[i]]) ++j;
    for (std::size_t k = i; k <= j; ++k) r[idx[k]] = (i + j) / 2.0 + 1;
    i = j + 1;
  }
  return r;
}

// Spearman rank correlation with average ranks for ties.
inline double Spearman(const std::vector<double>& a, const std::vector<double>& b) {
  const auto ra = Ranks(a), rb = Ranks(b);
  const double n = static_cast<double>(a.size());
  const double ma = std::accumulate(ra.begin(), ra.end(), 0.0) / n;
  const double mb = std::accumulate(rb.begin(), rb.end(), 0.0) / n;
  double sab = 0, saa = 0, sbb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    sab += (ra[i] - ma) * (rb[i] - mb);
    saa += (ra[i] - ma) * (ra[i] - ma);
    sbb += (rb[i] - mb) * (rb[i] - mb);
  }
  if (saa == 0 || sbb == 0) return 0.0;
  return sab / std::sqrt(saa * sbb);
}

}  // namespace rrf::testing

#endif  // RRF_TESTS_TEST_SUPPORT_HPP_
