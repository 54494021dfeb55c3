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

#include "tabrank/c_api.h"

#include <algorithm>
#include <cstdlib>
#include <cstring>
#include <exception>
#include <new>
#include <optional>
#include <string>

#include "json.hpp"
#include "tabrank/error.hpp"
#include "tabrank/evaluation.hpp"
#include "tabrank/information.hpp"
#include "tabrank/models.hpp"
#include "tabrank/preprocess.hpp"
#include "tabrank/report.hpp"
#include "tabrank/rng.hpp"
#include "tabrank/synth.hpp"
#include "tabrank/table.hpp"

struct tabrank_table {
  tabrank::DataTable table;
};

struct tabrank_model {
  tabrank::TrainedModel model;
};

namespace {

using Json = nlohmann::json;
using tabrank::Error;
using tabrank::ErrorCode;

thread_local std::string g_last_error;

tabrank_status fail(tabrank_status status, std::string message) {
  g_last_error = std::move(message);
  return status;
}

template <typename Fn>
tabrank_status guarded(Fn&& fn) noexcept {
  try {
    g_last_error.clear();
    fn();
    return TABRANK_OK;
  } catch (const Error& e) {
    return fail(static_cast<tabrank_status>(e.code()), e.what());
  } catch (const nlohmann::json::exception& e) {
    return fail(TABRANK_E_CONFIG, std::string("invalid request: ") + e.what());
  } catch (const std::bad_alloc&) {
    return fail(TABRANK_E_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(TABRANK_E_INTERNAL, e.what());
  } catch (...) {
    return fail(TABRANK_E_INTERNAL, "unknown failure");
  }
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

void require(const void* ptr, const char* what) {
  if (ptr == nullptr) throw Error(ErrorCode::kInvalidArgument, std::string(what) + " must not be NULL");
}

Json parse_request(const char* text, const char* what) {
  if (text == nullptr || *text == '\0') return Json::object();
  try {
    Json doc = Json::parse(text);
    if (!doc.is_object()) throw Error(ErrorCode::kConfig, std::string(what) + " must be a JSON object");
    return doc;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kConfig, std::string(what) + " is not valid JSON: " + e.what());
  }
}

tabrank::Provenance provenance_from(const Json& obj) {
  tabrank::Provenance out;
  if (obj.is_null()) return out;
  if (!obj.is_object()) throw Error(ErrorCode::kConfig, "provenance must be a JSON object");
  for (const auto& [key, value] : obj.items()) {
    out.emplace_back(key, value.is_string() ? value.get<std::string>() : value.dump());
  }
  return out;
}

tabrank::ModelSpec model_spec_from(const Json& j, std::uint64_t default_seed) {
  tabrank::ModelSpec spec;
  spec.algorithm = tabrank::parse_algorithm(j.at("algorithm").get<std::string>());
  if (j.contains("hyperparameters")) {
    for (const auto& [key, value] : j.at("hyperparameters").items()) {
      if (value.is_boolean()) {
        spec.hyperparameters[key] = value.get<bool>() ? 1.0 : 0.0;
      } else {
        spec.hyperparameters[key] = value.get<double>();
      }
    }
  }
  spec.seed = j.value("seed", default_seed);
  tabrank::validate(spec);
  return spec;
}

}  // namespace

extern "C" {

const char* tabrank_version(void) { return "1.0.0"; }

const char* tabrank_last_error(void) { return g_last_error.c_str(); }

const char* tabrank_status_name(tabrank_status status) {
  if (status == TABRANK_OK) return "Ok";
  return tabrank::error_code_name(static_cast<ErrorCode>(status));
}

int tabrank_exit_code(tabrank_status status) {
  if (status == TABRANK_OK) return 0;
  switch (tabrank::error_category(static_cast<ErrorCode>(status))) {
    case tabrank::ErrorCategory::kConfig: return 2;
    case tabrank::ErrorCategory::kData: return 3;
    case tabrank::ErrorCategory::kModel: return 4;
    case tabrank::ErrorCategory::kInternal: return 1;
  }
  return 1;
}

void tabrank_string_free(char* text) { std::free(text); }

tabrank_status tabrank_table_load(const char* csv_path, const char* schema_path, const char* options_json,
                                  tabrank_table** out) {
  return guarded([&] {
    require(csv_path, "csv_path");
    require(schema_path, "schema_path");
    require(out, "out");
    *out = nullptr;
    const Json opts = parse_request(options_json, "options_json");
    tabrank::CsvOptions options;
    if (opts.contains("missing_tokens")) options.missing_tokens = opts.at("missing_tokens").get<std::vector<std::string>>();
    options.require_target = opts.value("require_target", true);
    const auto schema = tabrank::load_schema(schema_path);
    *out = new tabrank_table{tabrank::load_csv(csv_path, schema, options)};
  });
}

void tabrank_table_free(tabrank_table* table) { delete table; }

size_t tabrank_table_rows(const tabrank_table* table) { return table ? table->table.n_rows() : 0; }

size_t tabrank_table_cols(const tabrank_table* table) { return table ? table->table.n_cols() : 0; }

size_t tabrank_table_missing_cells(const tabrank_table* table) {
  return table ? table->table.missing_count() : 0;
}

tabrank_status tabrank_table_preprocess(const tabrank_table* table, double max_missing_rate, const char* policy,
                                        tabrank_table** out, char** log_json) {
  return guarded([&] {
    require(table, "table");
    require(out, "out");
    *out = nullptr;
    const auto row_policy = tabrank::parse_missing_policy(policy ? policy : "drop_rows");
    auto dropped = tabrank::drop_sparse_columns(table->table, max_missing_rate);
    tabrank::DataTable resolved = tabrank::resolve_missing(dropped.table, row_policy);
    if (log_json != nullptr) {
      nlohmann::ordered_json log;
      nlohmann::ordered_json cols = nlohmann::ordered_json::array();
      for (const auto& d : dropped.dropped) cols.push_back({{"name", d.name}, {"missing_rate", d.missing_rate}});
      log["dropped_columns"] = std::move(cols);
      log["rows_before"] = table->table.n_rows();
      log["rows_after"] = resolved.n_rows();
      *log_json = dup_string(log.dump());
    }
    *out = new tabrank_table{std::move(resolved)};
  });
}

tabrank_status tabrank_rank(const tabrank_table* table, size_t k, uint64_t seed, size_t bins,
                            const char* provenance_json, char** json_out, char** markdown_out) {
  return guarded([&] {
    require(table, "table");
    const tabrank::Provenance provenance = provenance_from(
        provenance_json && *provenance_json ? parse_request(provenance_json, "provenance_json") : Json());
    tabrank::RankingRun run{tabrank::cross_validated_ranking(table->table, k, seed, bins), k, seed, bins};
    std::string json = tabrank::ranking_to_json(run, provenance);
    std::string md = tabrank::ranking_to_markdown(run.result.ranking, provenance);
    if (json_out) *json_out = dup_string(json);
    if (markdown_out) *markdown_out = dup_string(md);
  });
}

tabrank_status tabrank_evaluate(const tabrank_table* table, const char* request_json, char** json_out,
                                char** markdown_out) {
  return guarded([&] {
    require(table, "table");
    const Json req = parse_request(request_json, "request_json");
    if (!req.contains("seed")) throw Error(ErrorCode::kConfig, "evaluation request needs a seed");
    tabrank::CvOptions options;
    options.k = req.value("k", std::size_t{10});
    options.seed = req.at("seed").get<std::uint64_t>();
    options.positive = req.value("positive", std::string("yes"));
    options.threshold = req.value("threshold", 0.5);
    const std::size_t repeats = req.value("repeats", std::size_t{1});
    if (repeats < 1) throw Error(ErrorCode::kConfig, "repeats must be at least 1");

    std::vector<tabrank::ModelSpec> specs;
    if (!req.contains("models") || !req.at("models").is_array() || req.at("models").empty()) {
      throw Error(ErrorCode::kConfig, "evaluation request needs at least one model");
    }
    for (const Json& m : req.at("models")) specs.push_back(model_spec_from(m, options.seed));

    const tabrank::Provenance provenance = provenance_from(req.value("provenance", Json()));
    const tabrank::EvalReport report = tabrank::evaluate_cv(table->table, specs, options);
    std::vector<tabrank::EvalReport> extra;
    if (repeats > 1) {
      extra.push_back(report);
      for (std::size_t r = 1; r < repeats; ++r) {
        tabrank::CvOptions opt = options;
        opt.seed = tabrank::derive_seed(options.seed, r);
        std::vector<tabrank::ModelSpec> reseeded = specs;
        for (auto& s : reseeded) s.seed = tabrank::derive_seed(s.seed, r);
        extra.push_back(tabrank::evaluate_cv(table->table, reseeded, opt));
      }
    }
    std::string json = tabrank::report_to_json(report, provenance, extra);
    std::string md = tabrank::report_to_markdown(report, provenance, extra);
    if (json_out) *json_out = dup_string(json);
    if (markdown_out) *markdown_out = dup_string(md);
  });
}

tabrank_status tabrank_synth(const char* spec_json, const char* csv_path, const char* schema_path) {
  return guarded([&] {
    require(csv_path, "csv_path");
    const Json req = parse_request(spec_json, "spec_json");
    tabrank::PlantedSpec spec;
    spec.n_rows = req.value("rows", std::size_t{1000});
    spec.positive_rate = req.value("positive_rate", 0.5);
    spec.seed = req.at("seed").get<std::uint64_t>();
    const std::string preset = req.value("preset", std::string());
    if (preset == "survey") {
      spec.features = tabrank::survey_shaped_features();
    } else if (!preset.empty()) {
      throw Error(ErrorCode::kInvalidSpec, "unknown preset '" + preset + "'");
    } else {
      spec.features = tabrank::planted_features(
          req.value("strengths", std::vector<double>{1.0, 0.8, 0.6, 0.4, 0.2, 0.0}));
    }
    if (req.contains("missing")) {
      for (const auto& [name, rate] : req.at("missing").items()) {
        bool found = false;
        for (auto& f : spec.features) {
          if (f.name == name) {
            f.missing_rate = rate.get<double>();
            found = true;
          }
        }
        if (!found) throw Error(ErrorCode::kInvalidSpec, "missing-rate entry for unknown feature '" + name + "'");
      }
    }
    const tabrank::DataTable table = tabrank::gen_planted_dataset(spec);
    tabrank::write_text_file(csv_path, tabrank::to_csv(table));
    if (schema_path != nullptr) {
      const auto schema = tabrank::planted_schema(spec);
      tabrank::write_text_file(schema_path, tabrank::schema_to_json(schema));
    }
  });
}

tabrank_status tabrank_model_train(const tabrank_table* table, const char* spec_json, const char* positive,
                                   int normalize, tabrank_model** out) {
  return guarded([&] {
    require(table, "table");
    require(out, "out");
    *out = nullptr;
    const Json req = parse_request(spec_json, "spec_json");
    if (!req.contains("seed")) throw Error(ErrorCode::kConfig, "model spec needs a seed");
    const tabrank::ModelSpec spec = model_spec_from(req, req.at("seed").get<std::uint64_t>());
    tabrank::DataTable train = table->table;
    std::optional<tabrank::NormalizationMap> norm;
    if (normalize) {
      norm = tabrank::fit_minmax(train);
      train = tabrank::apply_minmax(train, *norm);
    }
    tabrank::TrainedModel model = tabrank::train_model(train, spec, positive ? positive : "yes");
    model.input_normalization = std::move(norm);
    *out = new tabrank_model{std::move(model)};
  });
}

tabrank_status tabrank_model_to_json(const tabrank_model* model, char** json_out) {
  return guarded([&] {
    require(model, "model");
    require(json_out, "json_out");
    *json_out = dup_string(tabrank::model_to_json(model->model));
  });
}

tabrank_status tabrank_model_from_json(const char* json, tabrank_model** out) {
  return guarded([&] {
    require(json, "json");
    require(out, "out");
    *out = nullptr;
    *out = new tabrank_model{tabrank::model_from_json(json)};
  });
}

void tabrank_model_free(tabrank_model* model) { delete model; }

const char* tabrank_model_positive_class(const tabrank_model* model) {
  return model ? model->model.positive_class.c_str() : "";
}

const char* tabrank_model_negative_class(const tabrank_model* model) {
  return model ? model->model.negative_class.c_str() : "";
}

tabrank_status tabrank_model_score(const tabrank_model* model, const tabrank_table* table, double* scores,
                                   size_t capacity, size_t* n_written) {
  return guarded([&] {
    require(model, "model");
    require(table, "table");
    if (n_written) *n_written = 0;
    if (capacity < table->table.n_rows()) {
      throw Error(ErrorCode::kInvalidArgument, "score buffer holds " + std::to_string(capacity) + " values, table has " +
                                                   std::to_string(table->table.n_rows()) + " rows");
    }
    require(scores, "scores");
    const std::vector<double> s = tabrank::score_table(model->model, table->table);
    std::copy(s.begin(), s.end(), scores);
    if (n_written) *n_written = s.size();
  });
}

}  // extern "C"
