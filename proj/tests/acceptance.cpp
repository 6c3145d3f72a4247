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

// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any
// criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "rrf/ensemble.hpp"
#include "rrf/eval.hpp"
#include "rrf/infotheory.hpp"
#include "rrf/mdscheme.hpp"
#include "rrf/serialize.hpp"
#include "test_support.hpp"

namespace rrf {
namespace {

namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

double Seconds(Clock::time_point since) { return std::chrono::duration<double>(Clock::now() - since).count(); }

std::string Fmt(const char* format, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof(buf), format, args...);
  return buf;
}

struct Outcome {
  bool pass = false;
  std::string detail;
};

// 1. Mean |F| on sonar over 10 seeds, lambda 0.5, default selectors.
Outcome FeatureCounts() {
  const Dataset d = testing::LoadBundled("sonar.csv");
  double slowest = 0;
  auto mean_count = [&](Method m) {
    double sum = 0;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
      const auto t0 = Clock::now();
      sum += static_cast<double>(BuildEnsemble(d, EnsembleConfig::Selector(m, 0.5, seed)).selected.size());
      slowest = std::max(slowest, Seconds(t0));
    }
    return sum / 10;
  };
  const double rrf = mean_count(Method::kRRF);
  const double rboost = mean_count(Method::kRBoost);
  const bool ok = rrf >= 10 && rrf <= 35 && rboost >= 10 && rboost <= 40 && slowest < 30;
  return {ok, Fmt("sonar mean |F|: RRF %.1f (band [10,35]), RBoost %.1f (band [10,40]); slowest run %.2fs (< 30s)",
                  rrf, rboost, slowest)};
}

// 2. 10x2 stratified CV: RF(200) on the RRF subset vs RF(200) on all features.
Outcome AccuracyPreserved() {
  bool ok = true;
  std::string detail;
  for (const char* name : {"sonar.csv", "german.csv"}) {
    const Dataset d = testing::LoadBundled(name);
    const auto t0 = Clock::now();
    Condition all;
    all.name = "all";
    Condition rrf;
    rrf.name = "rrf";
    rrf.selector = EnsembleConfig::Selector(Method::kRRF, 0.5);
    const CVPlan plan;  // 2 folds, 10 repeats
    const EvalReport a = CrossValidate(d, all, plan);
    const EvalReport r = CrossValidate(d, rrf, plan);
    const double secs = Seconds(t0);
    const double diff = std::abs(a.mean_accuracy - r.mean_accuracy);
    ok = ok && diff <= 0.06 && secs < 300;
    detail += Fmt("%s%s: all %.4f vs rrf %.4f (|diff| %.4f <= 0.06, %.1f features), %.1fs", detail.empty() ? "" : "; ",
                  name, a.mean_accuracy, r.mean_accuracy, diff, r.mean_features, secs);
  }
  return {ok, detail};
}

// 3. lambda = 0 selects nothing; lambda = 1 makes gain_R the raw gain.
Outcome LambdaExtremes() {
  std::size_t nonempty = 0, runs = 0;
  for (const char* name : {"sonar.csv", "german.csv", "vehicle.csv"}) {
    const Dataset d = testing::LoadBundled(name);
    for (Method m : {Method::kRRF, Method::kRBoost})
      for (std::uint64_t seed = 1; seed <= 3; ++seed) {
        ++runs;
        nonempty += !BuildEnsemble(d, EnsembleConfig::Selector(m, 0.0, seed)).selected.empty();
      }
  }
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::size_t mismatches = 0, vectors = 10000;
  for (std::size_t t = 0; t < vectors; ++t) {
    std::vector<CandidateGain> g(1 + rng() % 12);
    for (std::size_t i = 0; i < g.size(); ++i) {
      const double raw = (rng() % 3 == 0) ? std::floor(u(rng) * 4) / 4 : u(rng);
      g[i] = {i, raw, (rng() & 1) != 0};
      if (GainRegularized(raw, g[i].in_set, 1.0) != raw) ++mismatches;
    }
    std::optional<std::size_t> want;
    double best = 0;
    for (std::size_t i = 0; i < g.size(); ++i)
      if (g[i].gain > best) best = g[i].gain, want = i;
    if (best <= 1e-10) want.reset();
    if (SelectRegularized(g, 1.0, 1e-10) != want) ++mismatches;
  }
  return {nonempty == 0 && mismatches == 0,
          Fmt("lambda=0: %zu/%zu selector runs non-empty; lambda=1: %zu mismatches over %zu gain vectors", nonempty,
              runs, mismatches, vectors)};
}

// 4. A newcomer that loses at lambda1 never wins at lambda2 < lambda1.
Outcome MonotonePenalty() {
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::size_t violations = 0, checked = 0;
  for (int t = 0; t < 1000; ++t) {
    std::vector<CandidateGain> g(2 + rng() % 10);
    for (std::size_t i = 0; i < g.size(); ++i)
      g[i] = {i, (rng() % 4 == 0) ? std::floor(u(rng) * 8) / 8 : u(rng), (rng() % 3) == 0};
    // F members come after the newcomers in evaluation order.
    std::stable_partition(g.begin(), g.end(), [](const CandidateGain& c) { return !c.in_set; });
    double l1 = u(rng), l2 = u(rng);
    if (l1 < l2) std::swap(l1, l2);
    if (l1 == l2) continue;
    const auto at1 = SelectRegularized(g, l1, 1e-10);
    const auto at2 = SelectRegularized(g, l2, 1e-10);
    for (std::size_t i = 0; i < g.size(); ++i) {
      if (g[i].in_set || at1 == i) continue;
      ++checked;
      if (at2 == i) ++violations;
    }
  }
  return {violations == 0, Fmt("%zu violations over 1000 triples (%zu losing newcomers checked)", violations, checked)};
}

// 5. Exact copies of 5 features never join F next to their original.
Outcome DuplicateExclusion() {
  std::size_t violations = 0, runs = 0;
  for (const char* name : {"sonar.csv", "german.csv"}) {
    const Dataset base = testing::LoadBundled(name);
    const std::vector<std::size_t> originals{0, 3, 6, 9, 12};
    const Dataset d = testing::WithCopies(base, originals);
    for (Method m : {Method::kRRF, Method::kRBoost})
      for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        ++runs;
        const EnsembleModel model = BuildEnsemble(d, EnsembleConfig::Selector(m, 0.5, seed));
        for (std::size_t k = 0; k < originals.size(); ++k)
          if (model.selected.Contains(originals[k]) && model.selected.Contains(base.num_features() + k)) ++violations;
      }
  }
  return {violations == 0, Fmt("%zu violations over %zu selector runs (sonar, german; RRF and RBoost; 20 seeds)",
                               violations, runs)};
}

// 6. Oracle equivalences.
Outcome OracleEquivalences() {
  std::size_t md_mismatch = 0;
  for (unsigned labels = 0; labels < 256; ++labels) {
    std::vector<std::vector<int>> x;
    std::vector<int> y;
    for (int r = 0; r < 8; ++r) {
      x.push_back({(r >> 2) & 1, (r >> 1) & 1, r & 1});
      y.push_back(static_cast<int>((labels >> r) & 1));
    }
    const Dataset d = testing::Categorical(x, y);
    const auto a = oracle::MdSelect(d, 3);
    const auto b = oracle::MdTreeSelect(d, 3);
    md_mismatch += std::set<std::size_t>(a.begin(), a.end()) != std::set<std::size_t>(b.begin(), b.end());
  }
  using Sets = std::vector<std::vector<std::size_t>>;
  const bool xor_ok = oracle::MarkovBlanketBruteforce(testing::XorTable(true)) == Sets{{0, 1}};
  const bool fig_ok = oracle::MarkovBlanketBruteforce(testing::RedundantPairTable()) == Sets{{1}};
  std::mt19937_64 rng(6);
  double worst = 0;
  for (int t = 0; t < 100; ++t) {
    const std::size_t n = 10 + rng() % 40;
    std::vector<std::vector<int>> x(n, std::vector<int>(3));
    std::vector<int> y(n);
    for (std::size_t i = 0; i < n; ++i) {
      for (auto& v : x[i]) v = static_cast<int>(rng() % 3);
      y[i] = static_cast<int>(rng() % 2);
    }
    const Dataset d = testing::Categorical(x, y, 3);
    const std::size_t a = rng() % 3;
    std::vector<std::size_t> given;
    for (std::size_t j = 0; j < 3; ++j)
      if (j != a && (rng() & 1)) given.push_back(j);
    worst = std::max(worst, std::abs(oracle::ConditionalMI(d, a, given) - testing::ConditionalMIJoint(d, a, given)));
  }
  return {md_mismatch == 0 && xor_ok && fig_ok && worst <= 1e-9,
          Fmt("(a) %zu/256 MD-tree vs MD mismatches; (b) XOR blanket %s, two-feature construction blanket %s; "
              "(c) max |conditional MI error| %.2e bits (<= 1e-9)",
              md_mismatch, xor_ok ? "{X1,X2}" : "WRONG", fig_ok ? "{X2}" : "WRONG", worst)};
}

// 7. Entropy and gain kernels against the formula; threshold search against
// exhaustive midpoint evaluation.
Outcome KernelCorrectness() {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(0.0, 25.0);
  double worst = 0;
  for (int t = 0; t < 1000; ++t) {
    const std::size_t classes = 2 + rng() % 6;
    std::vector<std::vector<double>> ch(2 + rng() % 3, std::vector<double>(classes));
    std::vector<double> parent(classes, 0.0);
    for (auto& c : ch)
      for (std::size_t i = 0; i < classes; ++i) parent[i] += c[i] = (rng() % 4 == 0) ? 0.0 : u(rng);
    std::vector<ClassHistogram> hs;
    for (auto& c : ch) hs.push_back(ClassHistogram::FromCounts(c));
    const auto ph = ClassHistogram::FromCounts(parent);
    worst = std::max(worst, std::abs(Entropy(ph) - testing::EntropyFormula(parent)));
    worst = std::max(worst, std::abs(InfoGain(ph, hs) - testing::GainFormula(parent, ch)));
  }
  std::size_t threshold_mismatch = 0;
  for (int t = 0; t < 200; ++t) {
    const std::size_t n = 2 + rng() % 49;
    const int classes = 2 + static_cast<int>(rng() % 3);
    std::vector<double> x(n), w(n, 1.0);
    std::vector<int> y(n);
    std::vector<std::vector<double>> rows;
    for (std::size_t i = 0; i < n; ++i) {
      x[i] = (rng() % 2) ? static_cast<double>(rng() % 10) : u(rng);
      y[i] = static_cast<int>(rng() % classes);
      rows.push_back({x[i]});
    }
    const Dataset d = testing::Numeric(rows, y, classes);
    const RowView v = RowView::All(d);
    const auto got = BestNumericThreshold(v, 0, ClassHistogram::FromView(v));
    const auto want = testing::BestThresholdBruteForce(x, y, w, classes);
    if (std::abs(got.gain - want.gain) > 1e-12 || (want.gain > 1e-12 && got.threshold != want.threshold))
      ++threshold_mismatch;
  }
  return {worst <= 1e-12 && threshold_mismatch == 0,
          Fmt("max kernel error %.2e over 1000 histograms (<= 1e-12); %zu/200 threshold mismatches", worst,
              threshold_mismatch)};
}

// 8. Accuracy keeps rising with more features for the forest; a single tree
// levels off. Curves are averaged over 5 seeds.
Outcome CurveTrend() {
  const Dataset d = testing::LoadBundled("vehicle.csv");
  const std::size_t m = d.num_features();
  auto mean_curve = [&](const EnsembleConfig& classifier) {
    std::vector<double> mean(m, 0.0);
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      const auto curve = AccuracyCurve(d, classifier, seed);
      for (std::size_t k = 0; k < m; ++k) mean[k] += curve[k].accuracy / 5;
    }
    return mean;
  };
  auto tree = EnsembleConfig::Evaluator();
  tree.n_trees = 1;
  tree.sampling = Sampling::kFull;
  const auto forest_curve = mean_curve(EnsembleConfig::Evaluator());
  const auto tree_curve = mean_curve(tree);
  std::vector<double> count(m);
  for (std::size_t k = 0; k < m; ++k) count[k] = static_cast<double>(k + 1);
  const std::size_t half = m / 2;
  auto tail = [&](const std::vector<double>& v) { return std::vector<double>(v.begin() + half, v.end()); };
  const double rho_forest = testing::Spearman(count, forest_curve);
  const double tail_forest = testing::Spearman(tail(count), tail(forest_curve));
  const double tail_tree = testing::Spearman(tail(count), tail(tree_curve));
  return {rho_forest > 0.5 && tail_tree < tail_forest,
          Fmt("vehicle (18 features): RF(200) Spearman %.3f (> 0.5); last-half Spearman RF %.3f vs single tree %.3f; "
              "final accuracy RF %.3f, tree %.3f",
              rho_forest, tail_forest, tail_tree, forest_curve.back(), tree_curve.back())};
}

// 9. Every CLI command twice with identical flags: identical hashed regions.
std::string ReadFile(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string HashedRegion(const fs::path& p) {
  const std::string text = ReadFile(p);
  if (p.extension() != ".json") return text;
  Json doc = Json::parse(text);
  if (doc.contains("manifest")) doc["manifest"].erase("volatile");
  return doc.dump();
}

Outcome CliDeterminism() {
  const fs::path dir = fs::temp_directory_path() / ("rrf_acceptance_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  const std::string cli = RRF_CLI_PATH;
  const std::string data = RRF_DATA_DIR;
  const std::string fixtures = RRF_FIXTURE_DIR;
  struct Command {
    std::string name, args, out;
  };
  const std::vector<Command> commands{
      {"select", "select -i " + data + "/sonar.csv --seed 5", "sel.json"},
      {"select-rboost", "select -i " + data + "/german.csv --method rboost --seed 5", "selb.json"},
      {"train", "train -i " + data + "/sonar.csv --method rf --ntrees 40 --seed 5", "model.json"},
      {"train-subset", "train -i " + data + "/sonar.csv --method rf --ntrees 40 --features @sel.json", "model2.json"},
      {"predict", "predict --model @model.json -i " + data + "/sonar.csv", "pred.csv"},
      {"eval", "eval -i " + data + "/sonar.csv --repeats 2 --classifier-trees 50 --seed 5", "eval.json"},
      {"oracle-md", "oracle -i " + fixtures + "/xor.csv --mode md", "md.json"},
      {"oracle-mdtree", "oracle -i " + fixtures + "/xor.csv --mode mdtree", "mdtree.json"},
      {"oracle-mb", "oracle -i " + fixtures + "/xor.csv --mode mb", "mb.json"},
      {"curve", "curve -i " + data + "/vehicle.csv --classifier-trees 50 --seed 5", "curve.json"},
  };
  std::vector<std::string> differing;
  std::size_t failed = 0;
  for (int round = 0; round < 2; ++round) {
    const fs::path rdir = dir / std::to_string(round);
    fs::create_directories(rdir);
    for (const auto& c : commands) {
      std::string args = c.args;
      for (std::size_t at; (at = args.find('@')) != std::string::npos;) args.replace(at, 1, rdir.string() + "/");
      const std::string line = cli + " " + args + " --out " + (rdir / c.out).string() + " > /dev/null";
      if (std::system(line.c_str()) != 0) ++failed;
    }
  }
  for (const auto& c : commands)
    if (failed == 0 && HashedRegion(dir / "0" / c.out) != HashedRegion(dir / "1" / c.out)) differing.push_back(c.name);
  std::error_code ec;
  fs::remove_all(dir, ec);
  std::string names;
  for (const auto& n : differing) names += " " + n;
  return {failed == 0 && differing.empty(),
          Fmt("%zu commands run twice; %zu failed runs; differing outputs:%s", commands.size(), failed,
              names.empty() ? " none" : names.c_str())};
}

}  // namespace
}  // namespace rrf

int main() {
  using rrf::Outcome;
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"feature-count bands", rrf::FeatureCounts},
      {"accuracy preservation", rrf::AccuracyPreserved},
      {"lambda extremes", rrf::LambdaExtremes},
      {"monotone penalty", rrf::MonotonePenalty},
      {"duplicate exclusion", rrf::DuplicateExclusion},
      {"oracle equivalences", rrf::OracleEquivalences},
      {"information kernels", rrf::KernelCorrectness},
      {"accuracy curve trend", rrf::CurveTrend},
      {"CLI determinism", rrf::CliDeterminism},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failures += !o.pass;
    std::cout << (o.pass ? "PASS" : "FAIL") << "  criterion " << i + 1 << " (" << criteria[i].first
              << "): " << o.detail << std::endl;
  }
  std::cout << (failures == 0 ? "all acceptance criteria passed" : std::to_string(failures) + " criteria failed")
            << std::endl;
  return failures == 0 ? 0 : 1;
}
