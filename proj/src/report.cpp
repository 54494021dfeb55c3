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

#include "tabrank/report.hpp"

#include <cstdio>

#include "json.hpp"

namespace tabrank {

namespace {

using Json = nlohmann::ordered_json;

Json provenance_json(const Provenance& provenance) {
  Json out = Json::object();
  for (const auto& [key, value] : provenance) out[key] = value;
  return out;
}

std::string provenance_comment(const char* artifact, const Provenance& provenance) {
  std::string out = "<!-- tabrank ";
  out += artifact;
  for (const auto& [key, value] : provenance) out += " | " + key + "=" + value;
  out += " -->\n";
  return out;
}

std::string fixed3(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  return buf;
}

std::string escape_cell(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '|') out += "\\|";
    else if (c == '\n') out += ' ';
    else out += c;
  }
  return out;
}

Json confusion_json(const ConfusionMatrix& c) {
  return {{"tp", c.tp}, {"fp", c.fp}, {"tn", c.tn}, {"fn", c.fn}};
}

Json metrics_json(const Metrics& m) {
  Json out{{"precision", m.precision}, {"recall", m.recall}, {"f1", m.f1}, {"accuracy", m.accuracy}};
  Json undefined = Json::array();
  if (m.precision_undefined) undefined.push_back("precision");
  if (m.recall_undefined) undefined.push_back("recall");
  if (m.f1_undefined) undefined.push_back("f1");
  if (m.accuracy_undefined) undefined.push_back("accuracy");
  out["undefined"] = std::move(undefined);
  return out;
}

Json scored_json(const ScoredMetrics& s, const std::string& positive) {
  Json out{{"positive_class", positive}, {"auc", s.auc}};
  const Json metrics = metrics_json(s.metrics);
  for (const auto& [key, value] : metrics.items()) out[key] = value;
  out["confusion"] = confusion_json(s.confusion);
  return out;
}

Json mean_sd_json(const MeanSd& m) { return {{"mean", m.mean}, {"sd", m.sd}, {"count", m.count}}; }

Json model_json(const ModelReport& m, const EvalReport& report) {
  Json out{{"algorithm", to_string(m.spec.algorithm)}, {"name", display_name(m.spec.algorithm)}};
  Json hp = Json::object();
  for (const auto& [key, value] : default_hyperparameters(m.spec.algorithm)) hp[key] = m.spec.param(key);
  out["hyperparameters"] = std::move(hp);
  out["seed"] = m.spec.seed;
  out["pooled"] = scored_json(m.pooled, report.positive_class);
  out["pooled_reverse"] = scored_json(m.pooled_reverse, report.negative_class);
  out["fold_summary"] = {{"auc", mean_sd_json(m.fold_auc)},
                         {"precision", mean_sd_json(m.fold_precision)},
                         {"recall", mean_sd_json(m.fold_recall)},
                         {"f1", mean_sd_json(m.fold_f1)},
                         {"accuracy", mean_sd_json(m.fold_accuracy)}};
  Json folds = Json::array();
  for (const FoldResult& f : m.folds) {
    Json fj{{"fold", f.fold}, {"n_test", f.n_test}};
    fj["auc"] = f.auc ? Json(*f.auc) : Json(nullptr);
    const Json metrics = metrics_json(f.metrics);
    for (const auto& [key, value] : metrics.items()) fj[key] = value;
    fj["confusion"] = confusion_json(f.confusion);
    folds.push_back(std::move(fj));
  }
  out["folds"] = std::move(folds);
  return out;
}

Json report_body(const EvalReport& report) {
  Json out{{"positive_class", report.positive_class},
           {"negative_class", report.negative_class},
           {"k", report.k},
           {"seed", report.seed},
           {"threshold", report.threshold},
           {"n_rows", report.n_rows}};
  Json models = Json::array();
  for (const ModelReport& m : report.models) models.push_back(model_json(m, report));
  out["models"] = std::move(models);
  return out;
}

const char* kMetricHeader = "| Model | AUC | Precision | Recall | F-1 Score | Accuracy |\n"
                            "|---|---|---|---|---|---|\n";

std::string metric_row(const char* name, const ScoredMetrics& s) {
  return std::string("| ") + name + " | " + fixed3(s.auc) + " | " + fixed3(s.metrics.precision) + " | " +
         fixed3(s.metrics.recall) + " | " + fixed3(s.metrics.f1) + " | " + fixed3(s.metrics.accuracy) + " |\n";
}

std::string pm(const MeanSd& m) { return fixed3(m.mean) + " ± " + fixed3(m.sd); }

}  // namespace

std::string ranking_to_json(const RankingRun& run, const Provenance& provenance) {
  Json doc;
  doc["format"] = "tabrank-ranking";
  doc["version"] = 1;
  doc["provenance"] = provenance_json(provenance);
  doc["k"] = run.k;
  doc["seed"] = run.seed;
  doc["bins"] = run.bins;
  Json entries = Json::array();
  for (const RankedFeature& e : run.result.ranking.entries) {
    entries.push_back({{"rank", e.rank}, {"feature", e.feature}, {"score_bits", e.score_bits}});
  }
  doc["ranking"] = std::move(entries);
  Json folds = Json::array();
  for (const auto& scores : run.result.fold_scores) {
    Json fold = Json::object();
    for (std::size_t i = 0; i < scores.size(); ++i) fold[run.result.features[i]] = scores[i];
    folds.push_back(std::move(fold));
  }
  doc["fold_scores_bits"] = std::move(folds);
  return doc.dump(2) + "\n";
}

std::string ranking_to_markdown(const FeatureRanking& ranking, const Provenance& provenance) {
  std::string out = provenance_comment("rank", provenance);
  out += "| Ranking | Features |\n|---|---|\n";
  for (const RankedFeature& e : ranking.entries) {
    out += "| " + std::to_string(e.rank) + " | " + escape_cell(e.feature) + " |\n";
  }
  return out;
}

std::string report_to_json(const EvalReport& report, const Provenance& provenance,
                           const std::vector<EvalReport>& repeats) {
  Json doc;
  doc["format"] = "tabrank-eval-report";
  doc["version"] = 1;
  doc["provenance"] = provenance_json(provenance);
  const Json body = report_body(report);
  for (const auto& [key, value] : body.items()) doc[key] = value;
  if (!repeats.empty()) {
    Json extra = Json::array();
    for (const EvalReport& r : repeats) extra.push_back(report_body(r));
    doc["repeats"] = std::move(extra);
  }
  return doc.dump(2) + "\n";
}

std::string report_to_markdown(const EvalReport& report, const Provenance& provenance,
                               const std::vector<EvalReport>& repeats) {
  std::string out = provenance_comment("evaluate", provenance);
  out += "\n## Classification performance (positive class: " + escape_cell(report.positive_class) +
         ", pooled out-of-fold scores, " + std::to_string(report.k) + " folds, threshold " +
         fixed3(report.threshold) + ")\n\n";
  out += kMetricHeader;
  for (const ModelReport& m : report.models) out += metric_row(display_name(m.spec.algorithm), m.pooled);

  out += "\n## Classification performance (positive class: " + escape_cell(report.negative_class) + ")\n\n";
  out += kMetricHeader;
  for (const ModelReport& m : report.models) out += metric_row(display_name(m.spec.algorithm), m.pooled_reverse);

  out += "\n## Per-fold mean ± sd (positive class: " + escape_cell(report.positive_class) + ")\n\n";
  out += kMetricHeader;
  for (const ModelReport& m : report.models) {
    out += std::string("| ") + display_name(m.spec.algorithm) + " | " + pm(m.fold_auc) + " | " +
           pm(m.fold_precision) + " | " + pm(m.fold_recall) + " | " + pm(m.fold_f1) + " | " +
           pm(m.fold_accuracy) + " |\n";
  }

  if (!repeats.empty()) {
    out += "\n## Repeated runs (pooled AUC per seed)\n\n| Seed |";
    for (const ModelReport& m : report.models) out += std::string(" ") + display_name(m.spec.algorithm) + " |";
    out += "\n|---|";
    for (std::size_t i = 0; i < report.models.size(); ++i) out += "---|";
    out += "\n";
    for (const EvalReport& r : repeats) {
      out += "| " + std::to_string(r.seed) + " |";
      for (const ModelReport& m : r.models) out += " " + fixed3(m.pooled.auc) + " |";
      out += "\n";
    }
  }
  return out;
}

}  // namespace tabrank
