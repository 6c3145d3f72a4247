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

#include "rrf/rrf.h"

#include <openssl/evp.h>

#include <algorithm>
#include <cmath>
#include <charconv>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <initializer_list>
#include <iterator>
#include <new>
#include <sstream>
#include <string>

#include "rrf/dataset.hpp"
#include "rrf/ensemble.hpp"
#include "rrf/error.hpp"
#include "rrf/eval.hpp"
#include "rrf/mdscheme.hpp"
#include "rrf/serialize.hpp"

struct rrf_dataset {
  rrf::Dataset data;
};

struct rrf_model {
  rrf::EnsembleModel model;
};

namespace {

using rrf::ErrorKind;
using rrf::Fail;
using rrf::Json;

thread_local std::string last_error;

rrf_status StatusOf(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kInvalidArgument: return RRF_ERR_INVALID_ARGUMENT;
    case ErrorKind::kData: return RRF_ERR_DATA;
    case ErrorKind::kUnsupported: return RRF_ERR_UNSUPPORTED;
    case ErrorKind::kDomain: return RRF_ERR_DOMAIN;
    case ErrorKind::kIo: return RRF_ERR_IO;
    case ErrorKind::kInternal: return RRF_ERR_INTERNAL;
  }
  return RRF_ERR_INTERNAL;
}

template <class F>
rrf_status Guard(F&& f) {
  try {
    f();
    return RRF_OK;
  } catch (const rrf::Error& e) {
    last_error = e.what();
    return StatusOf(e.kind());
  } catch (const Json::exception& e) {
    last_error = std::string("invalid JSON: ") + e.what();
    return RRF_ERR_INVALID_ARGUMENT;
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
    return RRF_ERR_INTERNAL;
  } catch (const std::exception& e) {
    last_error = e.what();
    return RRF_ERR_INTERNAL;
  }
}

void Require(const void* p, const char* what) {
  if (p == nullptr) Fail(ErrorKind::kInvalidArgument, std::string(what) + " must not be null");
}

char* Dup(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

Json ParseConfig(const char* text, std::initializer_list<const char*> allowed) {
  Json j = (text == nullptr || *text == '\0') ? Json::object() : Json::parse(text);
  if (!j.is_object()) Fail(ErrorKind::kInvalidArgument, "configuration must be a JSON object");
  for (const auto& [key, value] : j.items())
    if (std::none_of(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; }))
      Fail(ErrorKind::kInvalidArgument, "unknown configuration key '" + key + "'");
  return j;
}

rrf::EnsembleConfig EnsembleFromFlat(const Json& j, const rrf::Dataset& data, bool allow_plain) {
  const std::string method = j.value("method", "rrf");
  const rrf::Method m = rrf::ParseMethod(method);
  if (m == rrf::Method::kPlainRF && !allow_plain)
    Fail(ErrorKind::kInvalidArgument, "feature selection needs method rrf or rboost");
  rrf::EnsembleConfig c = m == rrf::Method::kPlainRF ? rrf::EnsembleConfig::Evaluator()
                                                     : rrf::EnsembleConfig::Selector(m, j.value("lambda", 0.5));
  c.n_trees = j.value("n_trees", c.n_trees);
  c.seed = j.value("seed", c.seed);
  c.threads = j.value("threads", c.threads);
  c.tree.n_candidates = j.value("n_candidates", c.tree.n_candidates);
  c.tree.min_node_size = j.value("min_node_size", c.tree.min_node_size);
  c.tree.max_depth = j.value("max_depth", c.tree.max_depth);
  if (j.contains("features")) {
    std::vector<std::size_t> pool;
    for (const auto& name : j.at("features").get<std::vector<std::string>>()) {
      auto it = std::find(data.feature_names().begin(), data.feature_names().end(), name);
      if (it == data.feature_names().end()) Fail(ErrorKind::kData, "unknown feature '" + name + "' in feature list");
      pool.push_back(static_cast<std::size_t>(it - data.feature_names().begin()));
    }
    c.tree.feature_pool = std::move(pool);
  }
  c.Validate();
  return c;
}

rrf::EnsembleConfig ClassifierFromFlat(const Json& j) {
  const std::string kind = j.value("classifier", "rf");
  rrf::EnsembleConfig c = rrf::EnsembleConfig::Evaluator();
  if (kind == "rf") {
    c.n_trees = j.value("classifier_trees", c.n_trees);
  } else if (kind == "tree") {
    c.n_trees = 1;
    c.sampling = rrf::Sampling::kFull;
  } else {
    Fail(ErrorKind::kInvalidArgument, "unknown classifier '" + kind + "' (expected rf or tree)");
  }
  c.Validate();
  return c;
}

std::string Sha256Hex(const unsigned char* data, std::size_t len) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int n = 0;
  if (EVP_Digest(data, len, digest, &n, EVP_sha256(), nullptr) != 1) Fail(ErrorKind::kInternal, "SHA-256 failed");
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < n; ++i) {
    out.push_back(hex[digest[i] >> 4]);
    out.push_back(hex[digest[i] & 15]);
  }
  return out;
}

std::string FormatReal(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

}  // namespace

extern "C" {

const char* rrf_version(void) { return RRF_VERSION_STRING; }

const char* rrf_last_error(void) { return last_error.c_str(); }

void rrf_string_free(char* s) { std::free(s); }

rrf_status rrf_file_sha256(const char* path, char** out_hex) {
  return Guard([&] {
    Require(path, "path");
    Require(out_hex, "out_hex");
    std::ifstream in(path, std::ios::binary);
    if (!in) Fail(ErrorKind::kIo, std::string("cannot open '") + path + "'");
    const std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    *out_hex = Dup(Sha256Hex(reinterpret_cast<const unsigned char*>(bytes.data()), bytes.size()));
  });
}

rrf_status rrf_sha256(const void* data, size_t size, char** out_hex) {
  return Guard([&] {
    if (size > 0) Require(data, "data");
    Require(out_hex, "out_hex");
    *out_hex = Dup(Sha256Hex(static_cast<const unsigned char*>(data), size));
  });
}

rrf_status rrf_dataset_load_csv(const char* path, const char* target, const char* missing_token, rrf_dataset** out) {
  return Guard([&] {
    Require(path, "path");
    Require(target, "target");
    Require(out, "out");
    rrf::CsvOptions options;
    options.target = target;
    if (missing_token) options.missing_token = missing_token;
    *out = new rrf_dataset{rrf::LoadCsv(path, options)};
  });
}

rrf_status rrf_dataset_impute(rrf_dataset* dataset) {
  return Guard([&] {
    Require(dataset, "dataset");
    dataset->data = rrf::Impute(dataset->data);
  });
}

void rrf_dataset_free(rrf_dataset* dataset) { delete dataset; }

size_t rrf_dataset_num_rows(const rrf_dataset* d) { return d ? d->data.num_rows() : 0; }
size_t rrf_dataset_num_features(const rrf_dataset* d) { return d ? d->data.num_features() : 0; }
size_t rrf_dataset_num_classes(const rrf_dataset* d) { return d ? d->data.num_classes() : 0; }

rrf_status rrf_dataset_schema_json(const rrf_dataset* dataset, char** out_json) {
  return Guard([&] {
    Require(dataset, "dataset");
    Require(out_json, "out_json");
    *out_json = Dup(rrf::ToJson(*rrf::Schema::Of(dataset->data)).dump());
  });
}

rrf_status rrf_select(const rrf_dataset* dataset, const char* config_json, char** out_json) {
  return Guard([&] {
    Require(dataset, "dataset");
    Require(out_json, "out_json");
    const Json j = ParseConfig(config_json, {"method", "lambda", "n_trees", "seed", "n_candidates", "min_node_size",
                                             "max_depth"});
    const rrf::EnsembleConfig c = EnsembleFromFlat(j, dataset->data, false);
    const rrf::EnsembleModel model = rrf::BuildEnsemble(dataset->data, c);
    *out_json = Dup(rrf::SelectionToJson(model).dump());
  });
}

rrf_status rrf_train(const rrf_dataset* dataset, const char* config_json, rrf_model** out) {
  return Guard([&] {
    Require(dataset, "dataset");
    Require(out, "out");
    const Json j = ParseConfig(config_json, {"method", "lambda", "n_trees", "seed", "n_candidates", "min_node_size",
                                             "max_depth", "features", "threads"});
    const rrf::EnsembleConfig c = EnsembleFromFlat(j, dataset->data, true);
    *out = new rrf_model{rrf::BuildEnsemble(dataset->data, c)};
  });
}

rrf_status rrf_model_to_json(const rrf_model* model, char** out_json) {
  return Guard([&] {
    Require(model, "model");
    Require(out_json, "out_json");
    *out_json = Dup(rrf::ToJson(model->model).dump());
  });
}

rrf_status rrf_model_from_json(const char* json, rrf_model** out) {
  return Guard([&] {
    Require(json, "json");
    Require(out, "out");
    Json j;
    try {
      j = Json::parse(json);
    } catch (const Json::exception& e) {
      Fail(ErrorKind::kData, std::string("model file is not valid JSON: ") + e.what());
    }
    *out = new rrf_model{rrf::EnsembleFromJson(j)};
  });
}

void rrf_model_free(rrf_model* model) { delete model; }

size_t rrf_model_num_features(const rrf_model* m) { return m ? m->model.schema->num_features() : 0; }
size_t rrf_model_num_classes(const rrf_model* m) { return m ? m->model.schema->num_classes() : 0; }

rrf_status rrf_model_predict_row(const rrf_model* model, const double* values, size_t n_values, int* predicted,
                                 double* class_fractions, size_t n_classes) {
  return Guard([&] {
    Require(model, "model");
    Require(values, "values");
    Require(predicted, "predicted");
    const auto votes = rrf::VoteFractions(model->model, std::span<const double>(values, n_values));
    *predicted = static_cast<int>(std::max_element(votes.begin(), votes.end()) - votes.begin());
    if (class_fractions) {
      if (n_classes != votes.size())
        Fail(ErrorKind::kInvalidArgument, "class_fractions has " + std::to_string(n_classes) + " slots, model has " +
                                              std::to_string(votes.size()) + " classes");
      std::copy(votes.begin(), votes.end(), class_fractions);
    }
  });
}

rrf_status rrf_model_predict_csv(const rrf_model* model, const char* path, const char* missing_token, char** out_csv) {
  return Guard([&] {
    Require(model, "model");
    Require(path, "path");
    Require(out_csv, "out_csv");
    std::ifstream in(path, std::ios::binary);
    if (!in) Fail(ErrorKind::kIo, std::string("cannot open '") + path + "'");
    const rrf::Schema& schema = *model->model.schema;
    auto rows = rrf::ReadRowsForSchema(in, schema.feature_names, schema.kinds, schema.target_name,
                                             missing_token ? missing_token : "?");
    // Training data imputed with an explicit missing level: route missing
    // cells to it instead of the heaviest child.
    for (std::size_t j = 0; j < schema.kinds.size(); ++j) {
      const auto& levels = schema.kinds[j].levels;
      const auto it = std::find(levels.begin(), levels.end(), rrf::kMissingLevel);
      if (!schema.kinds[j].categorical || it == levels.end()) continue;
      const double code = static_cast<double>(it - levels.begin());
      for (auto& row : rows)
        if (rrf::IsMissing(row[j])) row[j] = code;
    }
    std::ostringstream out;
    out << "prediction";
    for (const auto& c : schema.class_names) out << ",vote_" << c;
    out << '\n';
    for (const auto& row : rows) {
      const auto votes = rrf::VoteFractions(model->model, row);
      const auto best = static_cast<std::size_t>(std::max_element(votes.begin(), votes.end()) - votes.begin());
      out << schema.class_names[best];
      for (double v : votes) out << ',' << FormatReal(v);
      out << '\n';
    }
    *out_csv = Dup(out.str());
  });
}

rrf_status rrf_eval(const rrf_dataset* dataset, const char* config_json, char** out_json, char** out_table) {
  return Guard([&] {
    Require(dataset, "dataset");
    Require(out_json, "out_json");
    const Json j = ParseConfig(config_json, {"folds", "repeats", "seed", "threads", "conditions", "lambda",
                                             "selector_trees", "classifier", "classifier_trees"});
    rrf::CVPlan plan;
    plan.folds = j.value("folds", plan.folds);
    plan.repeats = j.value("repeats", plan.repeats);
    plan.seed = j.value("seed", plan.seed);
    plan.Validate();
    const double lambda = j.value("lambda", 0.5);
    const std::size_t selector_trees = j.value("selector_trees", std::size_t{100});
    const std::size_t threads = j.value("threads", std::size_t{1});
    const auto names = j.value("conditions", std::vector<std::string>{"all", "rrf"});
    if (names.empty()) Fail(ErrorKind::kInvalidArgument, "no evaluation conditions given");
    const rrf::EnsembleConfig classifier = ClassifierFromFlat(j);

    std::vector<rrf::EvalReport> reports;
    for (const auto& name : names) {
      rrf::Condition c;
      c.name = name;
      c.classifier = classifier;
      if (name == "rrf" || name == "rboost") {
        c.selector = rrf::EnsembleConfig::Selector(rrf::ParseMethod(name), lambda);
        c.selector->n_trees = selector_trees;
        c.selector->Validate();
      } else if (name != "all") {
        Fail(ErrorKind::kInvalidArgument, "unknown condition '" + name + "' (expected all, rrf or rboost)");
      }
      reports.push_back(rrf::CrossValidate(dataset->data, c, plan, threads));
    }
    Json doc = rrf::ComparisonToJson(reports);
    doc["classifier"] = rrf::ToJson(classifier);
    doc["lambda"] = lambda;
    doc["selector_trees"] = selector_trees;
    Json timing = Json::object();
    for (const auto& r : reports) timing[r.condition] = r.wall_seconds;
    doc["timing"] = std::move(timing);
    *out_json = Dup(doc.dump());
    if (out_table) *out_table = Dup(rrf::CompareReports(reports));
  });
}

rrf_status rrf_accuracy_curve(const rrf_dataset* dataset, const char* config_json, char** out_json) {
  return Guard([&] {
    Require(dataset, "dataset");
    Require(out_json, "out_json");
    const Json j = ParseConfig(config_json, {"seed", "classifier", "classifier_trees"});
    const rrf::EnsembleConfig classifier = ClassifierFromFlat(j);
    std::vector<std::size_t> order;
    const auto curve = rrf::AccuracyCurve(dataset->data, classifier, j.value("seed", std::uint64_t{1}), &order);
    Json doc = rrf::CurveToJson(curve, order, *rrf::Schema::Of(dataset->data));
    doc["classifier"] = rrf::ToJson(classifier);
    *out_json = Dup(doc.dump());
  });
}

rrf_status rrf_oracle(const rrf_dataset* dataset, const char* mode, size_t max_steps, char** out_json) {
  return Guard([&] {
    Require(dataset, "dataset");
    Require(mode, "mode");
    Require(out_json, "out_json");
    const rrf::Dataset& d = dataset->data;
    const std::size_t steps = max_steps == 0 ? d.num_features() : max_steps;
    auto names = [&](const std::vector<std::size_t>& idx) {
      std::vector<std::string> out;
      for (std::size_t j : idx) out.push_back(d.feature_name(j));
      return out;
    };
    Json doc = {{"format", "rrf-oracle"}, {"version", rrf::kFormatVersion}, {"mode", mode}};
    const std::string m = mode;
    if (m == "md") {
      doc["max_steps"] = steps;
      doc["selected"] = names(rrf::oracle::MdSelect(d, steps));
    } else if (m == "mdtree") {
      doc["max_steps"] = steps;
      doc["selected"] = names(rrf::oracle::MdTreeSelect(d, steps));
    } else if (m == "mb") {
      Json blankets = Json::array();
      for (const auto& b : rrf::oracle::MarkovBlanketBruteforce(d)) blankets.push_back(names(b));
      doc["blankets"] = std::move(blankets);
    } else {
      Fail(ErrorKind::kInvalidArgument, "unknown oracle mode '" + m + "' (expected md, mdtree or mb)");
    }
    *out_json = Dup(doc.dump());
  });
}

}  // extern "C"
