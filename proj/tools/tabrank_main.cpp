/*
 * Copyright 2026 The tabrank Authors.
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

// Command-line front end. Everything here goes through the C API in
// tabrank/c_api.h; this file only merges configuration and writes artifacts.

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "tabrank/c_api.h"

namespace {

using Json = nlohmann::ordered_json;

constexpr int kExitConfig = 2;
constexpr int kExitData = 3;

struct CliError {
  int exit_code;
  std::string message;
};

[[noreturn]] void config_error(const std::string& message) { throw CliError{kExitConfig, message}; }

void check(tabrank_status status) {
  if (status != TABRANK_OK) {
    throw CliError{tabrank_exit_code(status),
                   std::string(tabrank_status_name(status)) + ": " + tabrank_last_error()};
  }
}

struct TableDeleter {
  void operator()(tabrank_table* t) const { tabrank_table_free(t); }
};
struct ModelDeleter {
  void operator()(tabrank_model* m) const { tabrank_model_free(m); }
};
struct StringDeleter {
  void operator()(char* s) const { tabrank_string_free(s); }
};
using TablePtr = std::unique_ptr<tabrank_table, TableDeleter>;
using ModelPtr = std::unique_ptr<tabrank_model, ModelDeleter>;
using StringPtr = std::unique_ptr<char, StringDeleter>;

struct RunConfig {
  std::string data;
  std::string schema;
  double missing_threshold = 0.3;
  std::string missing_policy = "drop_rows";
  std::vector<std::string> missing_tokens{"", "NA"};
  std::size_t bins = 10;
  std::size_t k = 10;
  std::optional<std::uint64_t> seed;
  Json models = Json::array();  // [{algorithm, hyperparameters}]
  std::string positive = "yes";
  std::string out_dir = ".";
  std::vector<std::string> formats{"json", "md"};
  double threshold = 0.5;
  std::size_t repeats = 1;
};

// Raw flag values; only flags that were given override the config file.
struct Flags {
  std::string config;
  std::string data, schema, missing_policy, positive, out_dir;
  double missing_threshold = 0, threshold = 0;
  std::vector<std::string> missing_tokens, models, params, formats;
  std::size_t bins = 0, k = 0, repeats = 0;
  std::uint64_t seed = 0;
};

Json model_entry(const std::string& algorithm) {
  return Json{{"algorithm", algorithm}, {"hyperparameters", Json::object()}};
}

Json all_models() {
  Json out = Json::array();
  for (const char* name : {"decision_tree", "random_forest", "logistic_regression", "naive_bayes", "linear_svm"}) {
    out.push_back(model_entry(name));
  }
  return out;
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

double parse_double(const std::string& text, const std::string& what) {
  double v = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size()) config_error("cannot parse " + what + " '" + text + "'");
  return v;
}

void load_config_file(const std::string& path, RunConfig& cfg) {
  std::ifstream in(path);
  if (!in) config_error("cannot open config file '" + path + "'");
  Json doc;
  try {
    doc = Json::parse(in);
  } catch (const Json::exception& e) {
    config_error(path + ": invalid JSON: " + e.what());
  }
  try {
    if (doc.contains("data")) cfg.data = doc.at("data").get<std::string>();
    if (doc.contains("schema")) cfg.schema = doc.at("schema").get<std::string>();
    if (doc.contains("missing_threshold")) cfg.missing_threshold = doc.at("missing_threshold").get<double>();
    if (doc.contains("missing_policy")) cfg.missing_policy = doc.at("missing_policy").get<std::string>();
    if (doc.contains("missing_tokens")) cfg.missing_tokens = doc.at("missing_tokens").get<std::vector<std::string>>();
    if (doc.contains("bins")) cfg.bins = doc.at("bins").get<std::size_t>();
    if (doc.contains("k")) cfg.k = doc.at("k").get<std::size_t>();
    if (doc.contains("seed")) cfg.seed = doc.at("seed").get<std::uint64_t>();
    if (doc.contains("positive")) cfg.positive = doc.at("positive").get<std::string>();
    if (doc.contains("out_dir")) cfg.out_dir = doc.at("out_dir").get<std::string>();
    if (doc.contains("formats")) cfg.formats = doc.at("formats").get<std::vector<std::string>>();
    if (doc.contains("threshold")) cfg.threshold = doc.at("threshold").get<double>();
    if (doc.contains("repeats")) cfg.repeats = doc.at("repeats").get<std::size_t>();
    if (doc.contains("models")) {
      cfg.models = Json::array();
      for (const Json& m : doc.at("models")) {
        if (m.is_string()) {
          cfg.models.push_back(model_entry(m.get<std::string>()));
        } else {
          Json entry = model_entry(m.at("algorithm").get<std::string>());
          if (m.contains("hyperparameters")) entry["hyperparameters"] = m.at("hyperparameters");
          cfg.models.push_back(std::move(entry));
        }
      }
    }
  } catch (const Json::exception& e) {
    config_error(path + ": " + e.what());
  }
}

// "key=value" or "algorithm.key=value".
void apply_param(Json& models, const std::string& text, const std::string& default_algorithm) {
  const auto eq = text.find('=');
  if (eq == std::string::npos) config_error("--param expects key=value, got '" + text + "'");
  std::string key = text.substr(0, eq);
  const double value = parse_double(text.substr(eq + 1), "--param value");
  std::string algorithm = default_algorithm;
  if (const auto dot = key.find('.'); dot != std::string::npos) {
    algorithm = key.substr(0, dot);
    key = key.substr(dot + 1);
  }
  bool applied = false;
  for (Json& m : models) {
    if (algorithm.empty() || m.at("algorithm") == algorithm) {
      m["hyperparameters"][key] = value;
      applied = true;
    }
  }
  if (!applied) config_error("--param '" + text + "' names a model that is not selected");
}

RunConfig resolve(const Flags& flags, const CLI::App& cmd) {
  RunConfig cfg;
  if (!flags.config.empty()) load_config_file(flags.config, cfg);
  const auto given = [&](const char* name) {
    const CLI::Option* opt = cmd.get_option_no_throw(name);
    return opt != nullptr && opt->count() > 0;
  };
  if (given("--data")) cfg.data = flags.data;
  if (given("--schema")) cfg.schema = flags.schema;
  if (given("--missing-threshold")) cfg.missing_threshold = flags.missing_threshold;
  if (given("--missing-policy")) cfg.missing_policy = flags.missing_policy;
  if (given("--missing-token")) cfg.missing_tokens = flags.missing_tokens;
  if (given("--bins")) cfg.bins = flags.bins;
  if (given("--k")) cfg.k = flags.k;
  if (given("--seed")) cfg.seed = flags.seed;
  if (given("--positive")) cfg.positive = flags.positive;
  if (given("--out-dir")) cfg.out_dir = flags.out_dir;
  if (given("--formats")) cfg.formats = flags.formats;
  if (given("--threshold")) cfg.threshold = flags.threshold;
  if (given("--repeats")) cfg.repeats = flags.repeats;
  if (given("--models")) {
    cfg.models = Json::array();
    for (const std::string& m : flags.models) cfg.models.push_back(model_entry(m));
  }
  return cfg;
}

void require_inputs(const RunConfig& cfg) {
  if (cfg.data.empty()) config_error("no data file given (--data)");
  if (cfg.schema.empty()) config_error("no schema file given (--schema)");
  if (!cfg.seed) config_error("a seed is required (--seed)");
  if (cfg.k < 2) config_error("k must be at least 2");
  if (!(cfg.missing_threshold >= 0.0 && cfg.missing_threshold <= 1.0)) {
    config_error("missing threshold must lie in [0, 1]");
  }
  if (cfg.missing_policy != "drop_rows" && cfg.missing_policy != "impute") {
    config_error("missing policy must be drop_rows or impute");
  }
  for (const std::string& f : cfg.formats) {
    if (f != "json" && f != "md") config_error("unknown report format '" + f + "'");
  }
  if (!std::filesystem::exists(cfg.schema)) config_error("schema file '" + cfg.schema + "' does not exist");
  if (!std::filesystem::exists(cfg.data)) throw CliError{kExitData, "data file '" + cfg.data + "' does not exist"};
}

std::string load_options(const RunConfig& cfg, bool require_target = true) {
  return Json{{"missing_tokens", cfg.missing_tokens}, {"require_target", require_target}}.dump();
}

struct Prepared {
  TablePtr table;
  Json log;
};

Prepared load_and_preprocess(const RunConfig& cfg) {
  tabrank_table* raw = nullptr;
  check(tabrank_table_load(cfg.data.c_str(), cfg.schema.c_str(), load_options(cfg).c_str(), &raw));
  TablePtr loaded(raw);
  tabrank_table* clean = nullptr;
  char* log = nullptr;
  check(tabrank_table_preprocess(loaded.get(), cfg.missing_threshold, cfg.missing_policy.c_str(), &clean, &log));
  StringPtr log_holder(log);
  return {TablePtr(clean), Json::parse(log)};
}

Json base_provenance(const char* command, const RunConfig& cfg, const Json& log) {
  Json p;
  p["tool"] = std::string("tabrank ") + tabrank_version();
  p["command"] = command;
  p["data"] = cfg.data;
  p["schema"] = cfg.schema;
  p["seed"] = *cfg.seed;
  p["k"] = cfg.k;
  p["missing_threshold"] = cfg.missing_threshold;
  p["missing_policy"] = cfg.missing_policy;
  std::string dropped;
  for (const Json& d : log.at("dropped_columns")) {
    if (!dropped.empty()) dropped += ";";
    dropped += d.at("name").get<std::string>();
  }
  p["dropped_columns"] = dropped;
  p["rows"] = log.at("rows_after");
  return p;
}

void write_file(const std::filesystem::path& path, const char* contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw CliError{kExitData, "cannot write '" + path.string() + "'"};
  out << contents;
  if (!out) throw CliError{kExitData, "write to '" + path.string() + "' failed"};
}

bool wants(const RunConfig& cfg, const char* format) {
  return std::find(cfg.formats.begin(), cfg.formats.end(), format) != cfg.formats.end();
}

void write_outputs(const RunConfig& cfg, const char* stem, const StringPtr& json, const StringPtr& md) {
  const std::filesystem::path dir(cfg.out_dir);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw CliError{kExitData, "cannot create output directory '" + cfg.out_dir + "'"};
  if (wants(cfg, "json")) write_file(dir / (std::string(stem) + ".json"), json.get());
  if (wants(cfg, "md")) write_file(dir / (std::string(stem) + ".md"), md.get());
}

int cmd_rank(const RunConfig& cfg) {
  require_inputs(cfg);
  Prepared prep = load_and_preprocess(cfg);
  Json prov = base_provenance("rank", cfg, prep.log);
  prov["bins"] = cfg.bins;
  char* json = nullptr;
  char* md = nullptr;
  check(tabrank_rank(prep.table.get(), cfg.k, *cfg.seed, cfg.bins, prov.dump().c_str(), &json, &md));
  StringPtr json_holder(json), md_holder(md);
  write_outputs(cfg, "ranking", json_holder, md_holder);
  return 0;
}

int cmd_evaluate(const RunConfig& cfg, const std::vector<std::string>& params) {
  require_inputs(cfg);
  Json models = cfg.models.empty() ? all_models() : cfg.models;
  for (const std::string& p : params) apply_param(models, p, "");
  if (models.empty()) config_error("no models selected");
  if (cfg.repeats < 1) config_error("repeats must be at least 1");
  Prepared prep = load_and_preprocess(cfg);
  Json prov = base_provenance("evaluate", cfg, prep.log);
  prov["positive"] = cfg.positive;
  prov["threshold"] = cfg.threshold;
  prov["repeats"] = cfg.repeats;
  prov["models"] = models.dump();
  Json request{{"k", cfg.k},           {"seed", *cfg.seed},       {"positive", cfg.positive},
               {"threshold", cfg.threshold}, {"repeats", cfg.repeats}, {"models", models},
               {"provenance", prov}};
  char* json = nullptr;
  char* md = nullptr;
  check(tabrank_evaluate(prep.table.get(), request.dump().c_str(), &json, &md));
  StringPtr json_holder(json), md_holder(md);
  write_outputs(cfg, "report", json_holder, md_holder);
  return 0;
}

struct SynthFlags {
  std::size_t rows = 1000;
  double pos_rate = 0.5;
  std::uint64_t seed = 0;
  std::string strengths;
  std::vector<std::string> missing;
  std::string preset;
  std::string out;
  std::string schema_out;
  std::string out_dir = ".";
};

int cmd_synth(const SynthFlags& f) {
  if (!(f.pos_rate > 0.0 && f.pos_rate < 1.0)) config_error("--pos-rate must lie in (0, 1)");
  Json spec{{"rows", f.rows}, {"positive_rate", f.pos_rate}, {"seed", f.seed}};
  if (!f.preset.empty()) spec["preset"] = f.preset;
  if (!f.strengths.empty()) {
    Json list = Json::array();
    for (const std::string& s : split_list(f.strengths)) list.push_back(parse_double(s, "strength"));
    spec["strengths"] = std::move(list);
  }
  if (!f.missing.empty()) {
    Json rates = Json::object();
    for (const std::string& m : f.missing) {
      const auto eq = m.rfind('=');
      if (eq == std::string::npos) config_error("--missing expects name=rate, got '" + m + "'");
      rates[m.substr(0, eq)] = parse_double(m.substr(eq + 1), "missing rate");
    }
    spec["missing"] = std::move(rates);
  }
  const std::filesystem::path dir(f.out_dir);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  const std::string csv = f.out.empty() ? (dir / "data.csv").string() : f.out;
  const std::string schema = f.schema_out.empty() ? (dir / "schema.json").string() : f.schema_out;
  check(tabrank_synth(spec.dump().c_str(), csv.c_str(), schema.c_str()));
  return 0;
}

int cmd_train(const RunConfig& cfg, const std::string& algorithm, const std::vector<std::string>& params,
              const std::string& out, bool normalize) {
  require_inputs(cfg);
  if (algorithm.empty()) config_error("train needs --model");
  Json models = Json::array({model_entry(algorithm)});
  for (const std::string& p : params) apply_param(models, p, algorithm);
  Json spec = models.at(0);
  spec["seed"] = *cfg.seed;
  Prepared prep = load_and_preprocess(cfg);
  tabrank_model* raw = nullptr;
  check(tabrank_model_train(prep.table.get(), spec.dump().c_str(), cfg.positive.c_str(), normalize ? 1 : 0, &raw));
  ModelPtr model(raw);
  char* json = nullptr;
  check(tabrank_model_to_json(model.get(), &json));
  StringPtr json_holder(json);
  const std::filesystem::path path = out.empty() ? std::filesystem::path(cfg.out_dir) / "model.json"
                                                 : std::filesystem::path(out);
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  write_file(path, json);
  return 0;
}

std::string shortest(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

int cmd_score(const RunConfig& cfg, const std::string& model_path, const std::string& out) {
  if (model_path.empty()) config_error("score needs --model");
  if (cfg.data.empty() || cfg.schema.empty()) config_error("score needs --data and --schema");
  if (!(cfg.threshold > 0.0 && cfg.threshold < 1.0)) config_error("threshold must lie in (0, 1)");
  std::ifstream in(model_path, std::ios::binary);
  if (!in) config_error("cannot open model file '" + model_path + "'");
  std::stringstream text;
  text << in.rdbuf();
  tabrank_model* raw_model = nullptr;
  check(tabrank_model_from_json(text.str().c_str(), &raw_model));
  ModelPtr model(raw_model);
  if (!std::filesystem::exists(cfg.schema)) config_error("schema file '" + cfg.schema + "' does not exist");
  tabrank_table* raw_table = nullptr;
  check(tabrank_table_load(cfg.data.c_str(), cfg.schema.c_str(), load_options(cfg, false).c_str(), &raw_table));
  TablePtr table(raw_table);
  std::vector<double> scores(tabrank_table_rows(table.get()));
  std::size_t written = 0;
  check(tabrank_model_score(model.get(), table.get(), scores.data(), scores.size(), &written));
  std::string csv = "row,score,label\n";
  for (std::size_t r = 0; r < written; ++r) {
    const char* label = scores[r] >= cfg.threshold ? tabrank_model_positive_class(model.get())
                                                   : tabrank_model_negative_class(model.get());
    csv += std::to_string(r) + "," + shortest(scores[r]) + "," + label + "\n";
  }
  if (out.empty() || out == "-") {
    std::cout << csv;
  } else {
    write_file(out, csv.c_str());
  }
  return 0;
}

void add_common(CLI::App& cmd, Flags& f) {
  cmd.add_option("--config", f.config, "JSON run configuration; flags override it");
  cmd.add_option("--data", f.data, "input CSV");
  cmd.add_option("--schema", f.schema, "schema JSON ({name, kind, role} per column)");
  cmd.add_option("--missing-threshold", f.missing_threshold, "drop feature columns missing more than this fraction");
  cmd.add_option("--missing-policy", f.missing_policy, "drop_rows or impute");
  cmd.add_option("--missing-token", f.missing_tokens, "cell text treated as missing (repeatable)");
  cmd.add_option("--seed", f.seed, "random seed (required)");
  cmd.add_option("--positive", f.positive, "target value treated as the positive class");
  cmd.add_option("--out-dir", f.out_dir, "directory for artifacts");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"tabrank: information-gain feature ranking and cross-validated classifier evaluation"};
  app.require_subcommand(1);

  Flags rank_flags, eval_flags, train_flags, score_flags;
  SynthFlags synth_flags;
  std::string train_model_name, train_out, score_model, score_out;
  bool no_normalize = false;

  CLI::App* rank = app.add_subcommand("rank", "rank features by cross-validated information gain");
  add_common(*rank, rank_flags);
  rank->add_option("--bins", rank_flags.bins, "equal-frequency bins for numeric features");
  rank->add_option("-k,--k", rank_flags.k, "number of folds");
  rank->add_option("--formats", rank_flags.formats, "json and/or md")->delimiter(',');

  CLI::App* evaluate = app.add_subcommand("evaluate", "cross-validate classifiers and report metrics");
  add_common(*evaluate, eval_flags);
  evaluate->add_option("-k,--k", eval_flags.k, "number of folds");
  evaluate->add_option("--models", eval_flags.models, "comma-separated algorithms")->delimiter(',');
  evaluate->add_option("--param", eval_flags.params, "algorithm.key=value hyperparameter override (repeatable)");
  evaluate->add_option("--threshold", eval_flags.threshold, "score threshold for the positive label");
  evaluate->add_option("--repeats", eval_flags.repeats, "rerun cross-validation with derived seeds");
  evaluate->add_option("--formats", eval_flags.formats, "json and/or md")->delimiter(',');

  CLI::App* synth = app.add_subcommand("synth", "write a planted synthetic data set and its schema");
  synth->add_option("--rows", synth_flags.rows, "number of data rows");
  synth->add_option("--pos-rate", synth_flags.pos_rate, "positive-class rate in (0, 1)");
  synth->add_option("--seed", synth_flags.seed, "random seed")->required();
  synth->add_option("--strengths", synth_flags.strengths, "comma-separated dependency strengths in [0, 1]");
  synth->add_option("--missing", synth_flags.missing, "feature=rate missing-cell rate (repeatable)");
  synth->add_option("--preset", synth_flags.preset, "'survey' for the 17-feature survey layout");
  synth->add_option("--out", synth_flags.out, "CSV path (default <out-dir>/data.csv)");
  synth->add_option("--schema-out", synth_flags.schema_out, "schema path (default <out-dir>/schema.json)");
  synth->add_option("--out-dir", synth_flags.out_dir, "directory for default output paths");

  CLI::App* train = app.add_subcommand("train", "fit one model on a whole file and save it as JSON");
  add_common(*train, train_flags);
  train->add_option("--model", train_model_name, "algorithm")->required();
  train->add_option("--param", train_flags.params, "key=value hyperparameter override (repeatable)");
  train->add_option("--out", train_out, "model path (default <out-dir>/model.json)");
  train->add_flag("--no-normalize", no_normalize, "skip min-max normalization of numeric features");

  CLI::App* score = app.add_subcommand("score", "score a CSV with a saved model");
  add_common(*score, score_flags);
  score->add_option("--model", score_model, "model JSON")->required();
  score->add_option("--threshold", score_flags.threshold, "score threshold for the positive label");
  score->add_option("--out", score_out, "output CSV (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "tabrank: error: " << e.what() << "\n";
    return kExitConfig;
  }

  try {
    if (rank->parsed()) return cmd_rank(resolve(rank_flags, *rank));
    if (evaluate->parsed()) return cmd_evaluate(resolve(eval_flags, *evaluate), eval_flags.params);
    if (synth->parsed()) return cmd_synth(synth_flags);
    if (train->parsed()) {
      return cmd_train(resolve(train_flags, *train), train_model_name, train_flags.params, train_out, !no_normalize);
    }
    if (score->parsed()) {
      RunConfig cfg = resolve(score_flags, *score);
      if (!score->count("--threshold")) cfg.threshold = 0.5;
      return cmd_score(cfg, score_model, score_out);
    }
  } catch (const CliError& e) {
    std::cerr << "tabrank: error: " << e.message << "\n";
    return e.exit_code;
  } catch (const std::exception& e) {
    std::cerr << "tabrank: error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
