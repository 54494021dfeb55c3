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


// Runs the tabrank executable as a child process and checks exit codes,
// diagnostics and artifacts.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

#include "doctest.h"
#include "json.hpp"

namespace fs = std::filesystem;

namespace {

const fs::path kWork = fs::path(TABRANK_SCRATCH_DIR) / "cli";

std::string quote(const std::string& s) { return "'" + s + "'"; }

struct Run {
  int exit_code;
  std::string err;
};

Run tabrank(const std::string& args) {
  const fs::path err = kWork / "stderr.txt";
  const std::string cmd = quote(TABRANK_CLI_PATH) + " " + args + " >/dev/null 2>" + quote(err.string());
  const int status = std::system(cmd.c_str());
  std::ifstream in(err);
  std::stringstream text;
  text << in.rdbuf();
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, text.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream text;
  text << in.rdbuf();
  return text.str();
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) out.push_back(line);
  return out;
}

std::string path(const std::string& name) { return quote((kWork / name).string()); }

// Writes a 2,000-row planted data set once per process.
void ensure_planted() {
  static bool done = false;
  if (done) return;
  fs::create_directories(kWork);
  REQUIRE(tabrank("synth --rows 2000 --seed 11 --out " + path("planted.csv") + " --schema-out " +
                  path("planted_schema.json"))
              .exit_code == 0);
  done = true;
}

std::string planted_inputs() {
  ensure_planted();
  return "--data " + path("planted.csv") + " --schema " + path("planted_schema.json");
}

}  // namespace

TEST_SUITE("cli synth") {
  TEST_CASE("writes the requested rows, reproducibly") {
    fs::create_directories(kWork);
    const std::string args = "synth --rows 1000 --pos-rate 0.1 --seed 7 --out-dir ";
    REQUIRE(tabrank(args + path("s1")).exit_code == 0);
    REQUIRE(tabrank(args + path("s2")).exit_code == 0);
    const std::string a = slurp(kWork / "s1" / "data.csv");
    CHECK(lines(a).size() == 1001);
    CHECK(a == slurp(kWork / "s2" / "data.csv"));
    CHECK(slurp(kWork / "s1" / "schema.json") == slurp(kWork / "s2" / "schema.json"));
  }

  TEST_CASE("invalid rates exit 2") {
    fs::create_directories(kWork);
    CHECK(tabrank("synth --seed 1 --pos-rate 1.5 --out-dir " + path("bad")).exit_code == 2);
    CHECK(tabrank("synth --seed 1 --missing f1=1.5 --out-dir " + path("bad")).exit_code == 2);
    CHECK(tabrank("synth --seed 1 --strengths 0.5,1.5 --out-dir " + path("bad")).exit_code == 2);
    CHECK(tabrank("synth --out-dir " + path("bad")).exit_code == 2);
  }
}

TEST_SUITE("cli rank") {
  TEST_CASE("the perfect feature ranks first") {
    REQUIRE(tabrank("rank " + planted_inputs() + " --seed 3 --out-dir " + path("rank")).exit_code == 0);
    const auto md = lines(slurp(kWork / "rank" / "ranking.md"));
    REQUIRE(md.size() == 9);
    CHECK(md[1] == "| Ranking | Features |");
    CHECK(md[3] == "| 1 | f1 |");
    const auto doc = nlohmann::json::parse(slurp(kWork / "rank" / "ranking.json"));
    CHECK(doc.at("provenance").at("seed") == "3");
    CHECK(doc.at("ranking").size() == 6);
  }

  TEST_CASE("config errors exit 2") {
    ensure_planted();
    CHECK(tabrank("rank --data " + path("planted.csv") + " --schema " + path("nope.json") + " --seed 1").exit_code ==
          2);
    CHECK(tabrank("rank " + planted_inputs()).exit_code == 2);
    CHECK(tabrank("rank " + planted_inputs() + " --seed 1 --k 1").exit_code == 2);
    CHECK(tabrank("rank " + planted_inputs() + " --seed 1 --missing-policy guess").exit_code == 2);
    CHECK(tabrank("rank " + planted_inputs() + " --seed 1 --formats pdf").exit_code == 2);
    CHECK(tabrank("rank --bogus").exit_code == 2);
  }

  TEST_CASE("data errors exit 3 with one diagnostic line") {
    ensure_planted();
    {
      std::ofstream out(kWork / "broken.csv");
      out << "f1,f2,f3,f4,f5,f6,Has died\nc0,0,c1,1,c2,2,no\nc0,zero,c1,1,c2,2,yes\n";
    }
    const Run r = tabrank("rank --data " + path("broken.csv") + " --schema " + path("planted_schema.json") +
                          " --seed 1 --k 2");
    CHECK(r.exit_code == 3);
    const auto diag = lines(r.err);
    REQUIRE(diag.size() == 1);
    CHECK(diag[0].find("row 2") != std::string::npos);
    CHECK(diag[0].find("'f2'") != std::string::npos);
    CHECK(diag[0].find("broken.csv") != std::string::npos);

    CHECK(tabrank("rank --data " + path("absent.csv") + " --schema " + path("planted_schema.json") + " --seed 1")
              .exit_code == 3);
  }

  TEST_CASE("reruns are byte-identical") {
    const std::string args = "rank " + planted_inputs() + " --seed 5 --k 4 --bins 6 --out-dir ";
    REQUIRE(tabrank(args + path("rank_a")).exit_code == 0);
    REQUIRE(tabrank(args + path("rank_b")).exit_code == 0);
    CHECK(slurp(kWork / "rank_a" / "ranking.json") == slurp(kWork / "rank_b" / "ranking.json"));
    CHECK(slurp(kWork / "rank_a" / "ranking.md") == slurp(kWork / "rank_b" / "ranking.md"));
  }
}

TEST_SUITE("cli evaluate") {
  TEST_CASE("five models, metric columns, byte-identical rerun") {
    const std::string args = "evaluate " + planted_inputs() + " --seed 9 --out-dir ";
    REQUIRE(tabrank(args + path("eval_a")).exit_code == 0);
    REQUIRE(tabrank(args + path("eval_b")).exit_code == 0);
    CHECK(slurp(kWork / "eval_a" / "report.json") == slurp(kWork / "eval_b" / "report.json"));

    const auto md = lines(slurp(kWork / "eval_a" / "report.md"));
    std::size_t header = 0;
    while (header < md.size() && md[header] != "| Model | AUC | Precision | Recall | F-1 Score | Accuracy |") ++header;
    REQUIRE(header + 7 <= md.size());
    const std::vector<std::string> names{"Decision Tree", "Random Forest", "Logistic Regression", "Naïve Bayes",
                                         "Linear SVM"};
    for (std::size_t i = 0; i < names.size(); ++i) {
      const std::string& row = md[header + 2 + i];
      CHECK(row.rfind("| " + names[i] + " |", 0) == 0);
      CHECK(std::count(row.begin(), row.end(), '|') == 7);
    }
  }

  TEST_CASE("flags override the config file") {
    ensure_planted();
    {
      std::ofstream cfg(kWork / "config.json");
      cfg << nlohmann::json{{"data", (kWork / "planted.csv").string()},
                            {"schema", (kWork / "planted_schema.json").string()},
                            {"seed", 4},
                            {"k", 3},
                            {"models", {"naive_bayes", {{"algorithm", "random_forest"}, {"hyperparameters", {{"n_trees", 3}}}}}},
                            {"formats", {"json"}}}
                 .dump();
    }
    REQUIRE(tabrank("evaluate --config " + path("config.json") + " --k 4 --param random_forest.n_trees=6 --out-dir " +
                    path("cfg"))
                .exit_code == 0);
    CHECK_FALSE(fs::exists(kWork / "cfg" / "report.md"));
    const auto doc = nlohmann::json::parse(slurp(kWork / "cfg" / "report.json"));
    CHECK(doc.at("k") == 4);
    CHECK(doc.at("seed") == 4);
    REQUIRE(doc.at("models").size() == 2);
    CHECK(doc.at("models")[1].at("hyperparameters").at("n_trees") == 6.0);
  }

  TEST_CASE("repeats use derived seeds") {
    REQUIRE(tabrank("evaluate " + planted_inputs() + " --seed 2 --k 3 --models naive_bayes --repeats 3 --out-dir " +
                    path("rep"))
                .exit_code == 0);
    const auto doc = nlohmann::json::parse(slurp(kWork / "rep" / "report.json"));
    CHECK(doc.at("repeats").size() == 3);
  }

  TEST_CASE("a single-class target exits 4") {
    fs::create_directories(kWork);
    {
      std::ofstream out(kWork / "one_class.csv");
      out << "x,Has died\n";
      for (int i = 0; i < 30; ++i) out << i << ",yes\n";
      std::ofstream schema(kWork / "one_class_schema.json");
      schema << R"({"columns":[{"name":"x","kind":"numeric","role":"feature"},)"
             << R"({"name":"Has died","kind":"categorical","role":"target"}]})";
    }
    const Run r = tabrank("evaluate --data " + path("one_class.csv") + " --schema " + path("one_class_schema.json") +
                          " --seed 1 --k 2 --out-dir " + path("one"));
    CHECK(r.exit_code == 4);
    REQUIRE(lines(r.err).size() == 1);
    CHECK(r.err.find("SingleClassTraining") != std::string::npos);
  }

  TEST_CASE("no models or unknown models") {
    CHECK(tabrank("evaluate " + planted_inputs() + " --seed 1 --models kernel_svm --out-dir " + path("x")).exit_code ==
          2);
    CHECK(tabrank("evaluate " + planted_inputs() + " --seed 1 --param linear_svm.epochs=5 --models naive_bayes"
                  " --out-dir " + path("x"))
              .exit_code == 2);
  }
}

TEST_SUITE("cli train and score") {
  TEST_CASE("round trip through a saved model") {
    REQUIRE(tabrank("train " + planted_inputs() + " --seed 3 --model random_forest --param n_trees=8 --out " +
                    path("model.json"))
                .exit_code == 0);
    REQUIRE(tabrank("score --model " + path("model.json") + " " + planted_inputs() + " --out " + path("scores.csv"))
                .exit_code == 0);
    const auto rows = lines(slurp(kWork / "scores.csv"));
    REQUIRE(rows.size() == 2001);
    CHECK(rows[0] == "row,score,label");
    for (std::size_t i = 1; i < rows.size(); ++i) {
      const bool labelled = rows[i].ends_with(",yes") || rows[i].ends_with(",no");
      CHECK(labelled);
    }
    const auto model = nlohmann::json::parse(slurp(kWork / "model.json"));
    CHECK(model.at("algorithm") == "random_forest");

    // Scoring does not need the target column.
    {
      std::ofstream out(kWork / "unlabelled.csv");
      out << "f1,f2,f3,f4,f5,f6\nc2,2,c2,2,c2,2\nc0,0,c0,0,c0,0\n";
    }
    REQUIRE(tabrank("score --model " + path("model.json") + " --data " + path("unlabelled.csv") + " --schema " +
                    path("planted_schema.json") + " --out " + path("unlabelled_scores.csv"))
                .exit_code == 0);
    CHECK(lines(slurp(kWork / "unlabelled_scores.csv")).size() == 3);
  }

  TEST_CASE("a corrupt model exits 4") {
    fs::create_directories(kWork);
    {
      std::ofstream out(kWork / "corrupt.json");
      out << R"({"format":"tabrank-model","version":99})";
    }
    CHECK(tabrank("score --model " + path("corrupt.json") + " " + planted_inputs()).exit_code == 4);
  }
}
