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

#include "rrf/serialize.hpp"

#include "rrf/error.hpp"

namespace rrf {

namespace {

void CheckFormat(const Json& j, const char* format) {
  if (!j.is_object() || j.value("format", "") != format)
    Fail(ErrorKind::kData, std::string("not an ") + format + " document");
  if (j.value("version", 0) < 1 || j.value("version", 0) > kFormatVersion)
    Fail(ErrorKind::kData, std::string("unsupported ") + format + " version");
}

template <class F>
auto Guarded(const char* what, F&& f) {
  try {
    return f();
  } catch (const Json::exception& e) {
    Fail(ErrorKind::kData, std::string("malformed ") + what + ": " + e.what());
  }
}

std::string ModeName(TreeMode m) { return m == TreeMode::kPlain ? "plain" : "regularized"; }

}  // namespace

Json ToJson(const RegConfig& c) {
  Json j = {{"mode", ModeName(c.mode)},
            {"lambda", c.lambda},
            {"n_candidates", c.n_candidates},
            {"min_node_size", c.min_node_size},
            {"max_depth", c.max_depth},
            {"gain_epsilon", c.gain_epsilon}};
  j["feature_pool"] = c.feature_pool ? Json(*c.feature_pool) : Json(nullptr);
  return j;
}

RegConfig RegConfigFromJson(const Json& j, RegConfig c) {
  return Guarded("tree config", [&] {
    if (j.contains("mode")) {
      const std::string mode = j.at("mode").get<std::string>();
      if (mode != "plain" && mode != "regularized") Fail(ErrorKind::kInvalidArgument, "unknown tree mode '" + mode + "'");
      c.mode = mode == "plain" ? TreeMode::kPlain : TreeMode::kRegularized;
    }
    c.lambda = j.value("lambda", c.lambda);
    c.n_candidates = j.value("n_candidates", c.n_candidates);
    c.min_node_size = j.value("min_node_size", c.min_node_size);
    c.max_depth = j.value("max_depth", c.max_depth);
    c.gain_epsilon = j.value("gain_epsilon", c.gain_epsilon);
    if (j.contains("feature_pool") && !j.at("feature_pool").is_null())
      c.feature_pool = j.at("feature_pool").get<std::vector<std::size_t>>();
    c.Validate();
    return c;
  });
}

Json ToJson(const EnsembleConfig& c) {
  return {{"method", MethodName(c.method)},
          {"n_trees", c.n_trees},
          {"tree", ToJson(c.tree)},
          {"sampling", c.sampling == Sampling::kBootstrap ? "bootstrap" : "full"},
          {"weight_floor", c.weight_floor},
          {"seed", c.seed}};
}

EnsembleConfig EnsembleConfigFromJson(const Json& j, EnsembleConfig c) {
  return Guarded("ensemble config", [&] {
    if (j.contains("method")) c.method = ParseMethod(j.at("method").get<std::string>());
    c.n_trees = j.value("n_trees", c.n_trees);
    if (j.contains("tree")) c.tree = RegConfigFromJson(j.at("tree"), c.tree);
    if (j.contains("sampling")) {
      const std::string s = j.at("sampling").get<std::string>();
      if (s != "bootstrap" && s != "full") Fail(ErrorKind::kInvalidArgument, "unknown sampling '" + s + "'");
      c.sampling = s == "full" ? Sampling::kFull : Sampling::kBootstrap;
    }
    c.weight_floor = j.value("weight_floor", c.weight_floor);
    c.seed = j.value("seed", c.seed);
    c.threads = j.value("threads", c.threads);
    c.Validate();
    return c;
  });
}

Json ToJson(const Schema& s) {
  Json features = Json::array();
  for (std::size_t k = 0; k < s.kinds.size(); ++k) {
    Json f = {{"name", s.feature_names[k]}, {"kind", s.kinds[k].categorical ? "categorical" : "numeric"}};
    if (s.kinds[k].categorical) f["levels"] = s.kinds[k].levels;
    features.push_back(std::move(f));
  }
  return {{"features", std::move(features)}, {"target", s.target_name}, {"classes", s.class_names}};
}

Schema SchemaFromJson(const Json& j) {
  return Guarded("schema", [&] {
    Schema s;
    for (const Json& f : j.at("features")) {
      s.feature_names.push_back(f.at("name").get<std::string>());
      const std::string kind = f.at("kind").get<std::string>();
      if (kind == "categorical")
        s.kinds.push_back(FeatureKind::Categorical(f.at("levels").get<std::vector<std::string>>()));
      else if (kind == "numeric")
        s.kinds.push_back(FeatureKind::Numeric());
      else
        Fail(ErrorKind::kData, "unknown feature kind '" + kind + "'");
    }
    s.target_name = j.at("target").get<std::string>();
    s.class_names = j.at("classes").get<std::vector<std::string>>();
    if (s.class_names.empty()) Fail(ErrorKind::kData, "schema lists no classes");
    return s;
  });
}

Json NodesToJson(const TreeModel& tree) {
  Json nodes = Json::array();
  for (std::size_t i = 0; i < tree.nodes.size(); ++i) {
    const TreeNode& n = tree.nodes[i];
    Json r = {{"id", i}};
    if (n.is_leaf()) {
      r["leaf"] = true;
    } else {
      r["feature"] = n.feature;
      if (tree.schema) r["feature_name"] = tree.schema->feature_names[static_cast<std::size_t>(n.feature)];
      r["kind"] = n.categorical ? "categorical" : "numeric";
      if (n.categorical)
        r["levels"] = n.levels;
      else
        r["threshold"] = n.threshold;
      r["children"] = n.children;
    }
    r["distribution"] = n.distribution.counts;
    r["predicted"] = n.predicted;
    nodes.push_back(std::move(r));
  }
  return nodes;
}

namespace {

TreeModel NodesFromJson(const Json& nodes, std::shared_ptr<const Schema> schema) {
  TreeModel t;
  t.schema = std::move(schema);
  const std::size_t m = t.schema->num_features();
  const std::size_t c = t.schema->num_classes();
  for (const Json& r : nodes) {
    TreeNode n;
    if (!r.value("leaf", false)) {
      n.feature = r.at("feature").get<std::int32_t>();
      if (n.feature < 0 || static_cast<std::size_t>(n.feature) >= m) Fail(ErrorKind::kData, "split feature out of range");
      n.categorical = r.at("kind").get<std::string>() == "categorical";
      if (n.categorical != t.schema->kinds[static_cast<std::size_t>(n.feature)].categorical)
        Fail(ErrorKind::kData, "split kind disagrees with the schema");
      if (n.categorical)
        n.levels = r.at("levels").get<std::vector<std::int32_t>>();
      else
        n.threshold = r.at("threshold").get<double>();
      n.children = r.at("children").get<std::vector<std::int32_t>>();
      if (n.children.size() < 2 || (n.categorical && n.levels.size() != n.children.size()))
        Fail(ErrorKind::kData, "internal node needs at least two children");
    }
    n.distribution = ClassHistogram::FromCounts(r.at("distribution").get<std::vector<double>>());
    if (n.distribution.num_classes() != c) Fail(ErrorKind::kData, "node distribution has the wrong class count");
    n.predicted = r.at("predicted").get<std::int32_t>();
    t.nodes.push_back(std::move(n));
  }
  if (t.nodes.empty()) Fail(ErrorKind::kData, "tree has no nodes");
  for (std::size_t i = 0; i < t.nodes.size(); ++i)
    for (auto ch : t.nodes[i].children)
      if (ch <= static_cast<std::int32_t>(i) || static_cast<std::size_t>(ch) >= t.nodes.size())
        Fail(ErrorKind::kData, "child id out of range");
  return t;
}

}  // namespace

Json ToJson(const TreeModel& tree) {
  return {{"format", "rrf-tree"},
          {"version", kFormatVersion},
          {"schema", tree.schema ? ToJson(*tree.schema) : Json(nullptr)},
          {"config", ToJson(tree.config)},
          {"nodes", NodesToJson(tree)}};
}

TreeModel TreeFromJson(const Json& j) {
  CheckFormat(j, "rrf-tree");
  return Guarded("tree", [&] {
    auto schema = std::make_shared<const Schema>(SchemaFromJson(j.at("schema")));
    TreeModel t = NodesFromJson(j.at("nodes"), schema);
    t.config = RegConfigFromJson(j.at("config"));
    return t;
  });
}

Json SelectionToJson(const EnsembleModel& model) {
  Json selected = Json::array();
  for (std::size_t i = 0; i < model.selected.size(); ++i) {
    const std::size_t f = model.selected.order()[i];
    selected.push_back({{"index", f}, {"name", model.schema->feature_names[f]}, {"first_tree", model.first_tree[i]}});
  }
  return {{"format", "rrf-selection"},
          {"version", kFormatVersion},
          {"method", MethodName(model.method)},
          {"config", ToJson(model.config)},
          {"num_features", model.schema->num_features()},
          {"count", model.selected.size()},
          {"selected", std::move(selected)}};
}

Json ToJson(const EnsembleModel& model) {
  Json trees = Json::array();
  for (const TreeModel& t : model.trees) trees.push_back({{"nodes", NodesToJson(t)}});
  Json j = SelectionToJson(model);
  j["format"] = "rrf-ensemble";
  j["schema"] = ToJson(*model.schema);
  j["tree_weights"] = model.tree_weights;
  j["trees"] = std::move(trees);
  return j;
}

EnsembleModel EnsembleFromJson(const Json& j) {
  CheckFormat(j, "rrf-ensemble");
  return Guarded("ensemble", [&] {
    EnsembleModel m;
    m.method = ParseMethod(j.at("method").get<std::string>());
    m.schema = std::make_shared<const Schema>(SchemaFromJson(j.at("schema")));
    m.config = EnsembleConfigFromJson(j.at("config"), EnsembleConfig{});
    m.selected = FeatureSet(m.schema->num_features());
    for (const Json& s : j.at("selected")) {
      const auto f = s.at("index").get<std::size_t>();
      if (f >= m.schema->num_features() || !m.selected.Insert(f)) Fail(ErrorKind::kData, "bad selected feature list");
      m.first_tree.push_back(s.at("first_tree").get<std::size_t>());
    }
    m.tree_weights = j.at("tree_weights").get<std::vector<double>>();
    for (const Json& t : j.at("trees")) {
      TreeModel tree = NodesFromJson(t.at("nodes"), m.schema);
      tree.config = m.config.tree;
      m.trees.push_back(std::move(tree));
    }
    if (m.trees.empty() || m.trees.size() != m.tree_weights.size())
      Fail(ErrorKind::kData, "tree list and tree weights disagree");
    return m;
  });
}

Json ToJson(const CVPlan& plan) {
  return {{"folds", plan.folds}, {"repeats", plan.repeats}, {"seed", plan.seed}};
}

Json ToJson(const EvalReport& r) {
  return {{"condition", r.condition},
          {"plan", ToJson(r.plan)},
          {"mean_accuracy", r.mean_accuracy},
          {"stderr_accuracy", r.stderr_accuracy},
          {"mean_features", r.mean_features},
          {"raw_scores", r.raw_scores},
          {"selections", r.selections}};
}

Json ComparisonToJson(std::span<const EvalReport> reports) {
  Json rows = Json::array();
  for (const auto& r : reports) rows.push_back(ToJson(r));
  Json j = {{"format", "rrf-comparison"}, {"version", kFormatVersion}, {"reports", std::move(rows)}};
  j["plan"] = reports.empty() ? Json(nullptr) : ToJson(reports.front().plan);
  return j;
}

Json CurveToJson(std::span<const CurvePoint> curve, std::span<const std::size_t> order, const Schema& schema) {
  Json points = Json::array();
  for (std::size_t i = 0; i < curve.size(); ++i)
    points.push_back({{"features", curve[i].features},
                      {"added", schema.feature_names[order[i]]},
                      {"accuracy", curve[i].accuracy}});
  return {{"format", "rrf-curve"}, {"version", kFormatVersion}, {"points", std::move(points)}};
}

}  // namespace rrf
