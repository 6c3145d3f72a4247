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

// Command-line front end over the rrf C API.

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cstdint>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "rrf/rrf.h"

namespace {

using Json = nlohmann::ordered_json;
namespace fs = std::filesystem;

enum ExitCode { kExitOk = 0, kExitUsage = 2, kExitData = 3, kExitInternal = 4 };

// Carries a C API failure out to main().
struct Failure {
  int exit_code;
  std::string message;
};

int ExitCodeOf(rrf_status s) {
  switch (s) {
    case RRF_OK: return kExitOk;
    case RRF_ERR_INVALID_ARGUMENT: return kExitUsage;
    case RRF_ERR_DATA:
    case RRF_ERR_UNSUPPORTED:
    case RRF_ERR_DOMAIN:
    case RRF_ERR_IO: return kExitData;
    case RRF_ERR_INTERNAL: return kExitInternal;
  }
  return kExitInternal;
}

void Check(rrf_status s) {
  if (s != RRF_OK) throw Failure{ExitCodeOf(s), rrf_last_error()};
}

// Takes ownership of a string returned by the library.
std::string Take(char* s) {
  std::string out = s ? s : "";
  rrf_string_free(s);
  return out;
}

struct DatasetDeleter {
  void operator()(rrf_dataset* d) const { rrf_dataset_free(d); }
};
struct ModelDeleter {
  void operator()(rrf_model* m) const { rrf_model_free(m); }
};
using DatasetPtr = std::unique_ptr<rrf_dataset, DatasetDeleter>;
using ModelPtr = std::unique_ptr<rrf_model, ModelDeleter>;

std::string UtcNow() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

// Writes via a sibling temp file and rename so a failed run leaves nothing.
void WriteAtomically(const std::string& path, const std::string& content) {
  const fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Failure{kExitData, "cannot write '" + tmp.string() + "'"};
    out << content;
    out.close();
    if (!out) {
      std::error_code ec;
      fs::remove(tmp, ec);
      throw Failure{kExitData, "write to '" + tmp.string() + "' failed"};
    }
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw Failure{kExitData, "cannot move output into '" + path + "'"};
  }
}

void Emit(const std::string& out_path, const std::string& content) {
  if (out_path.empty() || out_path == "-") {
    std::cout << content;
    std::cout.flush();
  } else {
    WriteAtomically(out_path, content);
  }
}

struct DataFlags {
  std::string input;
  std::string target = "-1";
  std::string missing = "?";
};

void AddDataFlags(CLI::App* cmd, DataFlags& f) {
  cmd->add_option("--input,-i", f.input, "Input CSV file")->required()->check(CLI::ExistingFile);
  cmd->add_option("--target,-t", f.target, "Target column name or 0-based index (negative counts from the end)")
      ->capture_default_str();
  cmd->add_option("--missing", f.missing, "Token marking a missing cell (empty cells are always missing)")
      ->capture_default_str();
}

// Loaded dataset plus the provenance recorded in every manifest.
struct Loaded {
  DatasetPtr data;
  Json info;
};

Loaded Load(const DataFlags& f, bool impute) {
  rrf_dataset* raw = nullptr;
  Check(rrf_dataset_load_csv(f.input.c_str(), f.target.c_str(), f.missing.c_str(), &raw));
  Loaded out{DatasetPtr(raw), Json::object()};
  char* hex = nullptr;
  Check(rrf_file_sha256(f.input.c_str(), &hex));
  out.info = {{"path", f.input},
              {"sha256", Take(hex)},
              {"target", f.target},
              {"missing_token", f.missing},
              {"rows", rrf_dataset_num_rows(raw)},
              {"features", rrf_dataset_num_features(raw)},
              {"classes", rrf_dataset_num_classes(raw)},
              {"imputed", impute}};
  if (impute) Check(rrf_dataset_impute(raw));
  return out;
}

struct Run {
  std::string command;
  std::string started = UtcNow();
  std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
};

// Stable fields first; anything that legitimately differs between identical
// runs lives under manifest.volatile.
Json Manifest(const Run& run, const Json& config, const Json& dataset, std::uint64_t seed, Json extra_volatile = {}) {
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - run.t0).count();
  Json vol = {{"started_at", run.started}, {"finished_at", UtcNow()}, {"wall_seconds", wall}};
  if (extra_volatile.is_object())
    for (auto& [k, v] : extra_volatile.items()) vol[k] = v;
  return {{"command", run.command}, {"library_version", rrf_version()}, {"seed", seed},
          {"config", config},       {"dataset", dataset},                {"volatile", std::move(vol)}};
}

std::string Dump(const Json& doc) { return doc.dump(2) + "\n"; }

// Names from either a selection JSON document or a plain list (one name per
// line, or comma separated).
std::vector<std::string> ReadFeatureList(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Failure{kExitData, "cannot open features file '" + path + "'"};
  std::stringstream ss;
  ss << in.rdbuf();
  const std::string text = ss.str();
  std::vector<std::string> names;
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '{') {
    Json j;
    try {
      j = Json::parse(text);
      for (const auto& s : j.at("selected")) names.push_back(s.at("name").get<std::string>());
    } catch (const Json::exception& e) {
      throw Failure{kExitData, "features file '" + path + "' is not a selection document: " + e.what()};
    }
    return names;
  }
  std::string token;
  auto flush = [&] {
    const auto b = token.find_first_not_of(" \t\r");
    const auto e = token.find_last_not_of(" \t\r");
    if (b != std::string::npos) names.push_back(token.substr(b, e - b + 1));
    token.clear();
  };
  for (char c : text) {
    if (c == '\n' || c == ',') flush();
    else token.push_back(c);
  }
  flush();
  return names;
}

// ---------------------------------------------------------------- select

struct SelectFlags {
  DataFlags data;
  std::string method = "rrf";
  double lambda = 0.5;
  std::size_t ntrees = 100;
  std::uint64_t seed = 1;
  std::size_t candidates = 0;
  std::size_t min_node_size = 2;
  std::size_t max_depth = 0;
  std::string out;
};

int CmdSelect(const SelectFlags& f) {
  Run run{"select"};
  Loaded d = Load(f.data, true);
  const Json config = {{"method", f.method},         {"lambda", f.lambda},
                       {"n_trees", f.ntrees},        {"seed", f.seed},
                       {"n_candidates", f.candidates}, {"min_node_size", f.min_node_size},
                       {"max_depth", f.max_depth}};
  char* out = nullptr;
  Check(rrf_select(d.data.get(), config.dump().c_str(), &out));
  Json doc = Json::parse(Take(out));
  doc["manifest"] = Manifest(run, config, d.info, f.seed);
  Emit(f.out, Dump(doc));
  if (!f.out.empty() && f.out != "-") {
    std::cout << f.method << " selected " << doc["count"].get<std::size_t>() << " of "
              << doc["num_features"].get<std::size_t>() << " features:";
    for (const auto& s : doc["selected"]) std::cout << ' ' << s["name"].get<std::string>();
    std::cout << '\n';
  }
  return kExitOk;
}

// ----------------------------------------------------------------- train

struct TrainFlags {
  DataFlags data;
  std::string method = "rrf";
  double lambda = 0.5;
  std::size_t ntrees = 0;
  std::uint64_t seed = 1;
  std::size_t candidates = 0;
  std::size_t min_node_size = 2;
  std::size_t max_depth = 0;
  std::string features;
  std::size_t threads = 1;
  std::string out;
};

int CmdTrain(const TrainFlags& f) {
  Run run{"train"};
  Loaded d = Load(f.data, true);
  Json config = {{"method", f.method},
                 {"lambda", f.lambda},
                 {"n_trees", f.ntrees != 0 ? f.ntrees : (f.method == "rf" ? 200 : 100)},
                 {"seed", f.seed},
                 {"n_candidates", f.candidates},
                 {"min_node_size", f.min_node_size},
                 {"max_depth", f.max_depth}};
  if (!f.features.empty()) config["features"] = ReadFeatureList(f.features);
  Json api_config = config;
  api_config["threads"] = f.threads;
  rrf_model* raw = nullptr;
  Check(rrf_train(d.data.get(), api_config.dump().c_str(), &raw));
  ModelPtr model(raw);
  char* out = nullptr;
  Check(rrf_model_to_json(model.get(), &out));
  Json doc = Json::parse(Take(out));
  doc["manifest"] = Manifest(run, config, d.info, f.seed, {{"threads", f.threads}});
  Emit(f.out, Dump(doc));
  return kExitOk;
}

// --------------------------------------------------------------- predict

struct PredictFlags {
  std::string model;
  std::string input;
  std::string missing = "?";
  std::string out;
};

int CmdPredict(const PredictFlags& f) {
  std::ifstream in(f.model, std::ios::binary);
  if (!in) throw Failure{kExitData, "cannot open model '" + f.model + "'"};
  std::stringstream ss;
  ss << in.rdbuf();
  rrf_model* raw = nullptr;
  Check(rrf_model_from_json(ss.str().c_str(), &raw));
  ModelPtr model(raw);
  char* out = nullptr;
  Check(rrf_model_predict_csv(model.get(), f.input.c_str(), f.missing.c_str(), &out));
  Emit(f.out, Take(out));
  return kExitOk;
}

// ------------------------------------------------------------------ eval

struct EvalFlags {
  DataFlags data;
  std::size_t folds = 2;
  std::size_t repeats = 10;
  std::uint64_t seed = 1;
  std::vector<std::string> conditions{"all", "rrf"};
  double lambda = 0.5;
  std::size_t selector_trees = 100;
  std::string classifier = "rf";
  std::size_t classifier_trees = 200;
  std::size_t threads = 1;
  std::string out;
};

int CmdEval(const EvalFlags& f) {
  Run run{"eval"};
  Loaded d = Load(f.data, true);
  const Json config = {{"folds", f.folds},
                       {"repeats", f.repeats},
                       {"seed", f.seed},
                       {"conditions", f.conditions},
                       {"lambda", f.lambda},
                       {"selector_trees", f.selector_trees},
                       {"classifier", f.classifier},
                       {"classifier_trees", f.classifier_trees}};
  Json api_config = config;
  api_config["threads"] = f.threads;
  char* out = nullptr;
  char* table = nullptr;
  Check(rrf_eval(d.data.get(), api_config.dump().c_str(), &out, &table));
  const std::string text = Take(table);
  Json doc = Json::parse(Take(out));
  Json timing = doc["timing"];
  doc.erase("timing");
  doc["manifest"] = Manifest(run, config, d.info, f.seed, {{"threads", f.threads}, {"condition_seconds", timing}});
  Emit(f.out, Dump(doc));
  if (!f.out.empty() && f.out != "-") std::cout << text;
  return kExitOk;
}

// ---------------------------------------------------------------- oracle

struct OracleFlags {
  DataFlags data;
  std::string mode = "md";
  std::size_t max_steps = 0;
  std::string out;
};

int CmdOracle(const OracleFlags& f) {
  Run run{"oracle"};
  Loaded d = Load(f.data, false);
  const Json config = {{"mode", f.mode}, {"max_steps", f.max_steps}};
  char* out = nullptr;
  Check(rrf_oracle(d.data.get(), f.mode.c_str(), f.max_steps, &out));
  Json doc = Json::parse(Take(out));
  doc["manifest"] = Manifest(run, config, d.info, 0);
  Emit(f.out, Dump(doc));
  if (!f.out.empty() && f.out != "-") {
    if (doc.contains("blankets")) std::cout << "blankets: " << doc["blankets"].dump() << '\n';
    else std::cout << "selected: " << doc["selected"].dump() << '\n';
  }
  return kExitOk;
}

// ----------------------------------------------------------------- curve

struct CurveFlags {
  DataFlags data;
  std::uint64_t seed = 1;
  std::string classifier = "rf";
  std::size_t classifier_trees = 200;
  std::string out;
};

int CmdCurve(const CurveFlags& f) {
  Run run{"curve"};
  Loaded d = Load(f.data, true);
  const Json config = {{"seed", f.seed}, {"classifier", f.classifier}, {"classifier_trees", f.classifier_trees}};
  char* out = nullptr;
  Check(rrf_accuracy_curve(d.data.get(), config.dump().c_str(), &out));
  Json doc = Json::parse(Take(out));
  doc["manifest"] = Manifest(run, config, d.info, f.seed);
  Emit(f.out, Dump(doc));
  return kExitOk;
}

// ---------------------------------------------------------------- digest

int CmdDigest(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Failure{kExitData, "cannot open '" + path + "'"};
  Json doc;
  try {
    doc = Json::parse(in);
  } catch (const Json::exception& e) {
    throw Failure{kExitData, "'" + path + "' is not JSON: " + e.what()};
  }
  if (doc.contains("manifest") && doc["manifest"].is_object()) doc["manifest"].erase("volatile");
  const std::string canonical = doc.dump();
  char* hex = nullptr;
  Check(rrf_sha256(canonical.data(), canonical.size(), &hex));
  std::cout << Take(hex) << "  " << path << '\n';
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Regularized tree ensembles for feature selection"};
  app.set_version_flag("--version", std::string(rrf_version()));
  app.require_subcommand(1);

  const auto method_check = CLI::IsMember({"rrf", "rboost"});
  const auto lambda_check = CLI::Range(0.0, 1.0);

  SelectFlags sel;
  CLI::App* select = app.add_subcommand("select", "Select features with a regularized ensemble");
  AddDataFlags(select, sel.data);
  select->add_option("--method,-m", sel.method, "Selector: rrf or rboost")->check(method_check)->capture_default_str();
  select->add_option("--lambda,-l", sel.lambda, "Penalty coefficient in [0, 1]")->check(lambda_check)->capture_default_str();
  select->add_option("--ntrees,-n", sel.ntrees, "Number of trees (boosting rounds for rboost)")
      ->check(CLI::PositiveNumber)->capture_default_str();
  select->add_option("--seed,-s", sel.seed, "Master seed")->capture_default_str();
  select->add_option("--candidates", sel.candidates, "Newcomer features tried per node (0 = ceil(sqrt(M)))")
      ->capture_default_str();
  select->add_option("--min-node-size", sel.min_node_size, "Nodes lighter than this become leaves")
      ->check(CLI::PositiveNumber)->capture_default_str();
  select->add_option("--max-depth", sel.max_depth, "Depth limit (0 = unlimited)")->capture_default_str();
  select->add_option("--out,-o", sel.out, "Output JSON file (stdout when omitted)");

  TrainFlags tr;
  CLI::App* train = app.add_subcommand("train", "Train an ensemble and write it as JSON");
  AddDataFlags(train, tr.data);
  train->add_option("--method,-m", tr.method, "rrf, rboost, or rf (plain random forest)")
      ->check(CLI::IsMember({"rrf", "rboost", "rf"}))->capture_default_str();
  train->add_option("--lambda,-l", tr.lambda, "Penalty coefficient in [0, 1] (rrf/rboost)")
      ->check(lambda_check)->capture_default_str();
  train->add_option("--ntrees,-n", tr.ntrees, "Number of trees (0 = 100 for rrf/rboost, 200 for rf)")
      ->capture_default_str();
  train->add_option("--seed,-s", tr.seed, "Master seed")->capture_default_str();
  train->add_option("--candidates", tr.candidates, "Features tried per node (0 = ceil(sqrt(M)))")->capture_default_str();
  train->add_option("--min-node-size", tr.min_node_size, "Nodes lighter than this become leaves")
      ->check(CLI::PositiveNumber)->capture_default_str();
  train->add_option("--max-depth", tr.max_depth, "Depth limit (0 = unlimited)")->capture_default_str();
  train->add_option("--features", tr.features,
                    "Restrict splits to these features: a selection JSON file or a list of names")
      ->check(CLI::ExistingFile);
  train->add_option("--threads", tr.threads, "Worker threads for rf (output does not depend on it)")
      ->check(CLI::PositiveNumber)->capture_default_str();
  train->add_option("--out,-o", tr.out, "Output model JSON file")->required();

  PredictFlags pr;
  CLI::App* predict = app.add_subcommand("predict", "Predict labels for a CSV with a trained model");
  predict->add_option("--model", pr.model, "Model JSON written by train")->required()->check(CLI::ExistingFile);
  predict->add_option("--input,-i", pr.input, "CSV with the model's feature columns")->required()->check(CLI::ExistingFile);
  predict->add_option("--missing", pr.missing, "Token marking a missing cell")->capture_default_str();
  predict->add_option("--out,-o", pr.out, "Output CSV file (stdout when omitted)");

  EvalFlags ev;
  CLI::App* eval = app.add_subcommand("eval", "Repeated stratified cross-validation of selection conditions");
  AddDataFlags(eval, ev.data);
  eval->add_option("--folds", ev.folds, "Folds per repetition")->check(CLI::Range(2, 1000))->capture_default_str();
  eval->add_option("--repeats", ev.repeats, "Repetitions")->check(CLI::PositiveNumber)->capture_default_str();
  eval->add_option("--seed,-s", ev.seed, "Master seed")->capture_default_str();
  eval->add_option("--conditions", ev.conditions, "Comma-separated list of all, rrf, rboost")
      ->delimiter(',')->check(CLI::IsMember({"all", "rrf", "rboost"}))->capture_default_str();
  eval->add_option("--lambda,-l", ev.lambda, "Selector penalty coefficient in [0, 1]")
      ->check(lambda_check)->capture_default_str();
  eval->add_option("--selector-trees", ev.selector_trees, "Trees per selector run")
      ->check(CLI::PositiveNumber)->capture_default_str();
  eval->add_option("--classifier", ev.classifier, "Evaluator: rf (random forest) or tree (single tree)")
      ->check(CLI::IsMember({"rf", "tree"}))->capture_default_str();
  eval->add_option("--classifier-trees", ev.classifier_trees, "Trees in the rf evaluator")
      ->check(CLI::PositiveNumber)->capture_default_str();
  eval->add_option("--threads", ev.threads, "Worker threads (output does not depend on it)")
      ->check(CLI::PositiveNumber)->capture_default_str();
  eval->add_option("--out,-o", ev.out, "Output JSON file (stdout when omitted; the table goes to stdout otherwise)");

  OracleFlags orc;
  CLI::App* oracle = app.add_subcommand("oracle", "Reference selectors on all-categorical data");
  AddDataFlags(oracle, orc.data);
  oracle->add_option("--mode", orc.mode, "md, mdtree, or mb (brute-force Markov blankets, at most 15 features)")
      ->check(CLI::IsMember({"md", "mdtree", "mb"}))->capture_default_str();
  oracle->add_option("--max-steps", orc.max_steps, "Step bound for md/mdtree (0 = number of features)")
      ->capture_default_str();
  oracle->add_option("--out,-o", orc.out, "Output JSON file (stdout when omitted)");

  CurveFlags cu;
  CLI::App* curve = app.add_subcommand("curve", "Accuracy as randomly ordered features are added");
  AddDataFlags(curve, cu.data);
  curve->add_option("--seed,-s", cu.seed, "Master seed")->capture_default_str();
  curve->add_option("--classifier", cu.classifier, "rf (random forest) or tree (single tree)")
      ->check(CLI::IsMember({"rf", "tree"}))->capture_default_str();
  curve->add_option("--classifier-trees", cu.classifier_trees, "Trees in the rf classifier")
      ->check(CLI::PositiveNumber)->capture_default_str();
  curve->add_option("--out,-o", cu.out, "Output JSON file (stdout when omitted)");

  std::string digest_path;
  CLI::App* digest = app.add_subcommand("digest", "SHA-256 of a JSON output excluding manifest.volatile");
  digest->add_option("file", digest_path, "JSON file written by another command")->required()->check(CLI::ExistingFile);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*select) return CmdSelect(sel);
    if (*train) return CmdTrain(tr);
    if (*predict) return CmdPredict(pr);
    if (*eval) return CmdEval(ev);
    if (*oracle) return CmdOracle(orc);
    if (*curve) return CmdCurve(cu);
    if (*digest) return CmdDigest(digest_path);
  } catch (const Failure& f) {
    std::cerr << "rrf: " << f.message << '\n';
    return f.exit_code;
  } catch (const std::exception& e) {
    std::cerr << "rrf: internal error: " << e.what() << '\n';
    return kExitInternal;
  }
  return kExitUsage;
}
