// Copyright 2026 The riskagent Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>

#include "cli.hpp"
#include "doctest.h"
#include "fixtures.hpp"
#include "riskagent/util/http.hpp"
#include "riskagent/util/jsonl.hpp"

using namespace riskagent;
using riskagent::testing::fixture;
using riskagent::testing::scratch_dir;

namespace {

// Every test in this binary runs with outbound connections refused.
const int kDenied = setenv("RISKAGENT_DENY_NETWORK", "1", 1);

struct Run {
  int code = -1;
  std::string out;
  std::string err;
  nlohmann::json json() const { return nlohmann::json::parse(out); }
};

Run run(std::vector<std::string> args, std::map<std::string, std::string> env = {}) {
  std::ostringstream out, err;
  cli::EnvLookup lookup = [env](std::string_view name) -> std::optional<std::string> {
    auto it = env.find(std::string(name));
    if (it == env.end()) return std::nullopt;
    return it->second;
  };
  Run r;
  r.code = cli::cli_dispatch(args, out, err, lookup);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::string fx(const std::string& rel) { return fixture(rel).string(); }

void check_golden(const std::string& name, const std::string& actual) {
  auto path = fixture("cli/golden/" + name);
  if (std::getenv("RISKAGENT_UPDATE_GOLDEN")) {
    util::write_file(path, actual);
    return;
  }
  REQUIRE_MESSAGE(std::filesystem::exists(path), "missing golden file " << path);
  CHECK(util::read_file(path) == actual);
}

const std::vector<std::string> kBench = {"--config", fixture("cli/config.json").string()};

std::vector<std::string> with(std::vector<std::string> a, const std::vector<std::string>& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

}  // namespace

TEST_CASE("calc eval prints the fixture score") {
  auto r = run({"calc", "eval", "f1", "--params", fx("all_true.json"), "--registry", fx("registry"), "--json"});
  REQUIRE(r.code == 0);
  auto j = r.json();
  const auto& o = j["outcome"]["outputs"][0];
  CHECK(o["name"] == "score");
  CHECK(o["lo"] == 5.0);
  CHECK(o["hi"] == 5.0);
  CHECK(o["bands"][0]["label"] == "high");
  check_golden("calc_eval.json", r.out);

  auto text = run({"calc", "eval", "f1", "--params", fx("all_true.json"), "--registry", fx("registry")});
  CHECK(text.code == 0);
  CHECK(text.out.find("score = 5") != std::string::npos);
  CHECK(text.out.find("high") != std::string::npos);

  auto ranged = run({"calc", "eval", fx("f2.calc"), "--json"});
  CHECK(ranged.code == 0);
  CHECK(ranged.json()["outcome"]["ranged"] == true);

  auto inline_params = run({"calc", "eval", fx("f2.calc"), "--params", R"({"age": [50, 70], "smoker": true})", "--json"});
  REQUIRE(inline_params.code == 0);
  auto risk = inline_params.json()["outcome"]["outputs"][0];
  CHECK(risk["lo"].get<double>() == doctest::Approx(0.6681877721681661).epsilon(1e-13));
  CHECK(risk["hi"].get<double>() == doctest::Approx(0.8455347349164653).epsilon(1e-13));

  auto bad_params = run({"calc", "eval", fx("f2.calc"), "--params", "{age: 3}"});
  CHECK(bad_params.code == 2);

  auto missing = run({"calc", "eval", "nope", "--registry", fx("registry")});
  CHECK(missing.code == 1);
  CHECK(missing.err.find("nope") != std::string::npos);
}

TEST_CASE("calc lint") {
  auto bad = run({"calc", "lint", fx("cli/bad.calc")});
  CHECK(bad.code == 1);
  CHECK(bad.out.find("bad.calc:3:") != std::string::npos);

  auto bad_json = run({"calc", "lint", fx("cli/bad.calc"), "--json"});
  CHECK(bad_json.code == 1);
  CHECK(bad_json.json()["diagnostics"][0]["line"] == 3);
  check_golden("calc_lint_bad.json", bad_json.out);

  auto good = run({"calc", "lint", fx("f1.calc"), "--json"});
  CHECK(good.code == 0);
  CHECK(good.json()["ok"] == true);

  auto doc = run({"calc", "lint", fx("registry/f2.json"), "--json"});
  CHECK(doc.code == 0);
  check_golden("calc_lint_doc.json", doc.out);
}

TEST_CASE("index build and inspect") {
  auto dir = scratch_dir("cli_index");
  auto file = (dir / "bench.idx").string();
  auto built = run(with({"index", "build", "--out", file, "--json"}, kBench));
  REQUIRE(built.code == 0);
  check_golden("index_build.json", built.out);

  auto inspected = run(with({"index", "inspect", file, "--query", "heart failure and stroke", "-k", "2", "--json"}, kBench));
  REQUIRE(inspected.code == 0);
  CHECK(inspected.json()["hits"].size() == 2);
  check_golden("index_inspect.json", inspected.out);

  auto wrong_dim = run({"index", "inspect", file, "--query", "stroke"});
  CHECK(wrong_dim.code == 2);
  CHECK(wrong_dim.err.find("dimension") != std::string::npos);
}

TEST_CASE("curate run") {
  auto dir = scratch_dir("cli_curate");
  auto r = run({"curate", "run", "--corpus", fx("curation/corpus.jsonl"), "--out", dir.string(), "--backend",
                "scripted:" + fx("curation/script.json"), "--json"});
  REQUIRE(r.code == 0);
  auto counts = r.json()["counts"];
  CHECK(counts["input"] == 6);
  CHECK(counts["published"] == 1);
  check_golden("curate_run.json", r.out);
  CHECK(std::filesystem::exists(dir / "registry"));
  CHECK(std::filesystem::exists(dir / "counts.json"));

  auto again = run({"curate", "run", "--corpus", fx("curation/corpus.jsonl"), "--out", dir.string(), "--resume",
                    "--backend", "scripted:" + fx("curation/script.json"), "--json"});
  REQUIRE(again.code == 0);
  CHECK(again.out == r.out);
}

TEST_CASE("agent run") {
  auto dir = scratch_dir("cli_agent");
  auto r = run(with({"agent", "run", "--note", fx("cli/note_rqa02.txt"), "--mode", "single", "--out", dir.string(), "--json"}, kBench));
  REQUIRE(r.code == 0);
  auto j = r.json();
  CHECK(j["selection"]["selected"] == nlohmann::json::array({"f1"}));
  CHECK(j["summaries"].size() == 1);
  check_golden("agent_run.json", r.out);
  CHECK(std::filesystem::exists(dir / "sessions" / "f1.jsonl"));

  auto text = run(with({"agent", "run", "--note", fx("cli/note_rqa02.txt"), "--mode", "single"}, kBench));
  CHECK(text.code == 0);
  CHECK(text.out.find("selected: f1") != std::string::npos);
}

TEST_CASE("bench run") {
  auto dir = scratch_dir("cli_bench");
  auto r = run(with({"bench", "run", "--data", fx("bench/riskqa.jsonl"), "--setting", "riskqa_star", "--out", dir.string(), "--json"}, kBench));
  REQUIRE(r.code == 0);
  auto j = r.json();
  CHECK(j["methods"][0]["correct"] == 12);
  check_golden("bench_run.json", r.out);
  CHECK(util::read_jsonl(dir / "runs.jsonl").size() == 12);

  auto both = run(with({"bench", "run", "--data", fx("bench/riskqa.jsonl")}, kBench));
  CHECK(both.code == 0);
  CHECK(both.out.find("41.9%") == std::string::npos);
}

TEST_CASE("bench synth") {
  auto dir = scratch_dir("cli_synth");
  auto r = run(with({"bench", "synth", "--out", (dir / "items.jsonl").string(), "--seed", "7", "--backend",
                     "scripted:" + fx("cli/synth_script.jsonl"), "--json"}, kBench));
  REQUIRE(r.code == 0);
  CHECK(r.json()["items"] == 1);
  check_golden("bench_synth.json", r.out);
  CHECK(util::read_jsonl(dir / "items.jsonl").size() == 1);
}

TEST_CASE("cohort run") {
  auto dir = scratch_dir("cli_cohort");
  auto r = run({"cohort", "run", "--notes", fx("cohort/notes.jsonl"), "--out", dir.string(), "--config",
                fx("cli/cohort_config.json"), "--json"});
  REQUIRE(r.code == 0);
  auto report = r.json()["report"];
  CHECK(report["results"] == 38 + 2);
  CHECK(r.json()["failures"] == 1);
  check_golden("cohort_run.json", r.out);
  for (const char* f : {"results.jsonl", "report.json", "per_patient.csv", "per_calculator.csv", "scores.csv"})
    CHECK(std::filesystem::exists(dir / f));
}

TEST_CASE("usage errors exit 2 with help") {
  auto no_data = run({"bench", "run"});
  CHECK(no_data.code == 2);
  CHECK(no_data.err.find("--data") != std::string::npos);
  CHECK(no_data.err.find("Usage") != std::string::npos);

  CHECK(run({}).code == 2);
  auto unknown = run({"frobnicate"});
  CHECK(unknown.code == 2);
  CHECK(unknown.err.find("frobnicate") != std::string::npos);
  CHECK(run({"calc", "eval", "f1", "--no-such-flag"}).code == 2);
  CHECK(run({"bench", "run", "--data", "x.jsonl", "--method", "guess"}).code == 2);
  auto rag = run(with({"bench", "run", "--data", fx("bench/riskqa.jsonl"), "--method", "rag", "--setting", "riskqa"}, kBench));
  CHECK(rag.code == 2);

  auto help = run({"calc", "eval", "--help"});
  CHECK(help.code == 0);
  CHECK(help.out.find("--params") != std::string::npos);
}

TEST_CASE("configuration precedence and secrets") {
  auto agent = [](std::vector<std::string> extra, std::map<std::string, std::string> env) {
    auto args = with({"agent", "run", "--note", fx("cli/note_rqa02.txt"), "--config", fx("cli/remote_config.json")}, extra);
    return run(args, std::move(env));
  };
  auto from_file = agent({}, {});
  CHECK(from_file.code == 1);
  CHECK(from_file.err.find("file.invalid") != std::string::npos);

  auto from_env = agent({}, {{"RISKAGENT_ENDPOINT", "http://env.invalid/v1"}});
  CHECK(from_env.err.find("env.invalid") != std::string::npos);

  auto from_flag = agent({"--endpoint", "http://flag.invalid/v1"}, {{"RISKAGENT_ENDPOINT", "http://env.invalid/v1"}});
  CHECK(from_flag.err.find("flag.invalid") != std::string::npos);

  // RISKAGENT_CONFIG is honoured when --config is absent.
  auto via_env_file = run({"agent", "run", "--note", fx("cli/note_rqa02.txt")},
                          {{"RISKAGENT_CONFIG", fx("cli/remote_config.json")}});
  CHECK(via_env_file.err.find("file.invalid") != std::string::npos);

  auto secret = run({"calc", "eval", "f1", "--registry", fx("registry"), "--config", fx("cli/secret_config.json"), "--json"});
  CHECK(secret.code == 2);
  CHECK(secret.err.find("RISKAGENT_API_KEY") != std::string::npos);
  CHECK(secret.out.find("sk-should-not-be-here") == std::string::npos);

  auto no_registry = run({"calc", "eval", "f1"});
  CHECK(no_registry.code == 2);
  auto missing_path = run({"calc", "eval", "f1", "--registry", "/nonexistent/registry"});
  CHECK(missing_path.code == 2);
}

TEST_CASE("no subcommand opens a connection with local backends") {
  REQUIRE(kDenied == 0);
  REQUIRE(util::network_denied());
  auto before = util::network_attempts();
  auto dir = scratch_dir("cli_offline");
  CHECK(run({"calc", "eval", "f2", "--registry", fx("registry")}).code == 0);
  CHECK(run(with({"index", "build", "--out", (dir / "i.idx").string()}, kBench)).code == 0);
  CHECK(run(with({"agent", "run", "--note", fx("cli/note_rqa02.txt")}, kBench)).code == 0);
  CHECK(run(with({"bench", "run", "--data", fx("bench/riskqa.jsonl"), "--setting", "riskqa_star"}, kBench)).code == 0);
  CHECK(run({"curate", "run", "--corpus", fx("curation/corpus.jsonl"), "--out", (dir / "cur").string(), "--backend",
             "scripted:" + fx("curation/script.json")}).code == 0);
  CHECK(run({"cohort", "run", "--notes", fx("cohort/notes.jsonl"), "--out", (dir / "co").string(), "--config",
             fx("cli/cohort_config.json")}).code == 0);
  CHECK(util::network_attempts() == before);

  // A remote backend is refused rather than contacted.
  auto remote = run({"agent", "run", "--note", fx("cli/note_rqa02.txt"), "--config", fx("cli/remote_config.json")});
  CHECK(remote.code == 1);
  CHECK(remote.err.find("RISKAGENT_DENY_NETWORK") != std::string::npos);
  CHECK(util::network_attempts() == before);
}
