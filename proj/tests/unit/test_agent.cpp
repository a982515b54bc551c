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

#include <random>

#include "doctest.h"
#include "fixtures.hpp"
#include "riskagent/agent/agent.hpp"
#include "riskagent/lang/parser.hpp"
#include "riskagent/util/jsonl.hpp"

using namespace riskagent;
using namespace riskagent::agent;
using riskagent::testing::fixture;
using riskagent::testing::scratch_dir;

namespace {

const std::string kNote = "72-year-old with hypertension, diabetes, prior stroke and heart failure.";

const std::string kF1AllTrue =
    "```calc\ncalculator: f1\nage_over_65 = true\nhypertension = true\ndiabetes = true\n"
    "prior_stroke = true\nheart_failure = true\n```";

model::Registry fixture_registry() { return model::Registry::load(fixture("registry")); }

lang::Binding all_true() {
  return lang::binding_from_json(nlohmann::json::parse(util::read_file(fixture("all_true.json"))));
}

llm::ScriptEntry rule(std::string purpose, std::string contains, std::string response, bool repeat = false) {
  llm::ScriptEntry e = llm::ScriptEntry::reply(std::move(response));
  e.purpose = std::move(purpose);
  if (!contains.empty()) e.contains = {std::move(contains)};
  e.repeat = repeat;
  return e;
}

struct World {
  model::Registry registry;
  retrieval::HashingEmbedder embedder{64, 3};
  retrieval::VectorIndex index;
  llm::TemplateSet templates = llm::TemplateSet::builtin();

  explicit World(model::Registry r) : registry(std::move(r)) {
    index = retrieval::index_build(embedder, registry, retrieval::TextSource::digest);
  }
  AgentContext context(llm::Gateway& gw) { return AgentContext{registry, index, embedder, gw, templates}; }
};

}  // namespace

TEST_CASE("calc block parsing") {
  auto block = find_calc_block("text\n" + kF1AllTrue + "\nmore");
  REQUIRE(block);
  auto inv = parse_calc_block(*block);
  CHECK(inv.calculator_id == "f1");
  CHECK(inv.binding == all_true());

  auto v = parse_calc_block(
      "calculator: x\nage = 70 years\nrange = [1.5, 3] mg/dL\nkind = {\"a b\", c}\nsex = \"female\"\nsmoker = UNKNOWN\n"
      "grade = moderate\n");
  CHECK(v.binding["age"] == lang::BindingEntry::exact_number(70, "years"));
  CHECK(v.binding["range"] == lang::BindingEntry::interval(1.5, 3, "mg/dL"));
  CHECK(v.binding["kind"] == lang::BindingEntry::one_of({"a b", "c"}));
  CHECK(v.binding["sex"] == lang::BindingEntry::exact_label("female"));
  CHECK(v.binding["smoker"] == lang::BindingEntry::unknown());
  CHECK(v.binding["grade"] == lang::BindingEntry::exact_label("moderate"));
  CHECK(parse_calc_block(render_calc_block(v)).binding == v.binding);

  CHECK_THROWS_AS(parse_calc_block("age = 3\n"), BlockError);
  CHECK_THROWS_AS(parse_calc_block("calculator: x\nage 3\n"), BlockError);
  CHECK_THROWS_AS(parse_calc_block("calculator: x\nage = [3, 1]\n"), BlockError);
  CHECK_THROWS_AS(parse_calc_block("calculator: x\nage = 1\nage = 2\n"), BlockError);
  CHECK_THROWS_AS(parse_calc_block("calculator: x\n2x = 1\n"), BlockError);
  CHECK_FALSE(find_calc_block("no block").has_value());
}

TEST_CASE("summary prefix") {
  CHECK(is_summary("Summary: fine"));
  CHECK(is_summary("\n  Summary: fine"));
  CHECK_FALSE(is_summary("summary: lower case"));
  CHECK_FALSE(is_summary("The Summary: is later"));
}

TEST_CASE("two-turn computation") {
  auto reg = fixture_registry();
  const auto& f1 = reg.at("f1");
  auto expected = lang::eval_point(lang::parse(f1.program_source), all_true(), f1.interpretation);

  llm::Gateway gw(llm::ScriptedBackend::from_replies({kF1AllTrue, "Summary: score 5, high risk."}));
  auto s = run_computation(kNote, f1, gw, llm::TemplateSet::builtin());
  CHECK(s.status == SessionStatus::summarized);
  REQUIRE(s.turns.size() == 2);
  CHECK(s.turns[0].observation == expected.render());
  CHECK(s.turns[0].outcome == expected);
  CHECK_FALSE(s.turns[1].observation.has_value());
  CHECK(s.summary == "score 5, high risk.");
  CHECK(gw.transcript()[0].request.purpose == "compute");
  CHECK(gw.transcript()[1].request.purpose == "summarize_check");
  CHECK(gw.transcript()[1].request.messages.size() == gw.transcript()[0].request.messages.size() + 2);

  auto r = summarize(s);
  REQUIRE(r.outputs.size() == 1);
  CHECK(r.outputs[0].lo == 5.0);
  CHECK(r.outputs[0].is_point());
  REQUIRE(r.outputs[0].bands.size() == 1);
  CHECK(r.outputs[0].bands[0].label == "high");
  CHECK(r.missing_params.empty());
  CHECK_FALSE(r.extraction_error.has_value());
}

TEST_CASE("malformed binding is reported and corrected") {
  auto reg = fixture_registry();
  std::string bad = "```calc\ncalculator: f1\nage_over_65 true\n```";
  llm::Gateway gw(llm::ScriptedBackend::from_replies({bad, kF1AllTrue, "Summary: done"}));
  auto s = run_computation(kNote, reg.at("f1"), gw, llm::TemplateSet::builtin());
  CHECK(s.status == SessionStatus::summarized);
  REQUIRE(s.turns.size() == 3);
  std::string diag;
  try {
    parse_calc_block("calculator: f1\nage_over_65 true\n");
  } catch (const BlockError& e) {
    diag = e.what();
  }
  CHECK(s.turns[0].observation == "error: " + diag);
  CHECK_FALSE(s.turns[0].outcome.has_value());
  CHECK(s.turns[1].outcome.has_value());
  CHECK(gw.transcript()[1].request.messages.back().content.find(diag) != std::string::npos);
}

TEST_CASE("interpreter errors are observations") {
  auto reg = fixture_registry();
  const auto& f2 = reg.at("f2");
  auto prog = lang::parse(f2.program_source);
  std::optional<lang::EvalOutcome> out;

  auto wrong_id = observe(f2, prog, {"f1", {}}, out);
  CHECK(wrong_id.rfind("error: ", 0) == 0);
  CHECK_FALSE(out);

  auto range = observe(f2, prog, parse_calc_block("calculator: f2\nage = 300\nsmoker = true\n"), out);
  CHECK(range.rfind("error: ", 0) == 0);

  auto unit = observe(f2, prog, parse_calc_block("calculator: f2\nage = 60 months\nsmoker = true\n"), out);
  CHECK(unit.find("unit") != std::string::npos);

  auto ranged = observe(f2, prog, parse_calc_block("calculator: f2\nage = 60 years\nsmoker = UNKNOWN\n"), out);
  REQUIRE(out);
  CHECK(out->ranged);
  CHECK(out->missing == std::vector<std::string>{"smoker"});
  CHECK(ranged.find("range estimate") != std::string::npos);
}

TEST_CASE("session cut off at max turns") {
  auto reg = fixture_registry();
  llm::Gateway gw(std::make_shared<llm::CallbackBackend>([](const llm::ChatRequest&) { return std::string("Thinking."); }));
  auto s = run_computation(kNote, reg.at("f1"), gw, llm::TemplateSet::builtin());
  CHECK(s.status == SessionStatus::failed_max_turns);
  CHECK(s.turns.size() == kDefaultMaxTurns);
  CHECK(gw.calls() == kDefaultMaxTurns);
  for (const auto& t : s.turns) CHECK(t.observation.has_value());
  CHECK_THROWS_AS(summarize(s), SummaryError);
}

TEST_CASE("gateway failure keeps the partial transcript") {
  auto reg = fixture_registry();
  llm::Gateway gw(llm::ScriptedBackend::from_replies({kF1AllTrue}));
  auto s = run_computation(kNote, reg.at("f1"), gw, llm::TemplateSet::builtin());
  CHECK(s.status == SessionStatus::failed_error);
  CHECK(s.turns.size() == 1);
  CHECK_FALSE(s.error.empty());
}

TEST_CASE("summary without a successful run") {
  auto reg = fixture_registry();
  llm::Gateway gw(llm::ScriptedBackend::from_replies({"Summary: I guess high risk."}));
  auto s = run_computation(kNote, reg.at("f1"), gw, llm::TemplateSet::builtin());
  auto r = summarize(s);
  CHECK(r.narrative == "I guess high risk.");
  CHECK(r.outputs.empty());
  CHECK(r.extraction_error.has_value());
}

TEST_CASE("summary reports the last successful run") {
  auto reg = fixture_registry();
  std::string partial = "```calc\ncalculator: f1\nage_over_65 = true\nhypertension = UNKNOWN\ndiabetes = false\n"
                        "prior_stroke = false\nheart_failure = false\n```";
  llm::Gateway gw(llm::ScriptedBackend::from_replies({kF1AllTrue, partial, "oops", "Summary: between 1 and 2."}));
  auto s = run_computation(kNote, reg.at("f1"), gw, llm::TemplateSet::builtin());
  auto r = summarize(s);
  REQUIRE(r.outputs.size() == 1);
  CHECK(r.outputs[0].lo == 1.0);
  CHECK(r.outputs[0].hi == 2.0);
  CHECK(r.missing_params == std::vector<std::string>{"hypertension"});
  CHECK(r.ranged);
}

TEST_CASE("session transcript round trip") {
  auto reg = fixture_registry();
  llm::Gateway gw(llm::ScriptedBackend::from_replies({"hmm", kF1AllTrue, "Summary: high."}));
  auto s = run_computation(kNote, reg.at("f1"), gw, llm::TemplateSet::builtin());
  auto path = scratch_dir("agent_transcript") / "session.jsonl";
  s.save(path);
  auto lines = util::read_jsonl(path);
  CHECK(lines.size() == 4);
  auto back = AgentSession::load(path);
  CHECK(back.status == s.status);
  CHECK(back.summary == s.summary);
  REQUIRE(back.turns.size() == 3);
  CHECK(back.turns[1].outcome == s.turns[1].outcome);
  CHECK(back.turns[1].invocation->binding == s.turns[1].invocation->binding);
  CHECK(back.to_jsonl() == s.to_jsonl());
}

TEST_CASE("unverified calculators are refused") {
  auto reg = fixture_registry();
  auto calc = reg.at("f1");
  calc.status = model::CalcStatus::draft;
  llm::Gateway gw(llm::ScriptedBackend::from_replies({}));
  CHECK_THROWS_AS(run_computation(kNote, calc, gw, llm::TemplateSet::builtin()), std::invalid_argument);
}

TEST_CASE("selection parsing") {
  std::vector<std::string> ids{"a", "b", "c"};
  std::vector<std::string> dropped;
  CHECK(parse_selection("I pick c.\nSelected: c", ids, dropped) == std::vector<std::string>{"c"});
  CHECK(parse_selection("Selected: `b`, a, b", ids, dropped) == std::vector<std::string>{"b", "a"});
  CHECK(parse_selection("**Selected:** none", ids, dropped) == std::vector<std::string>{});
  CHECK_FALSE(parse_selection("c looks right", ids, dropped).has_value());
  dropped.clear();
  CHECK(parse_selection("Selected: zzz", ids, dropped) == std::vector<std::string>{});
  CHECK(dropped == std::vector<std::string>{"zzz"});
}

TEST_CASE("tool selection") {
  World w(fixture_registry());
  auto hits = w.index.search(w.embedder.embed_query(kNote), 10);
  REQUIRE(hits.size() == 2);

  SUBCASE("names a candidate") {
    llm::Gateway gw(llm::ScriptedBackend::from_replies({"Selected: " + hits[1].id}));
    auto r = select_tools("p1", kNote, w.context(gw), SelectMode::single);
    CHECK(r.selected == std::vector<std::string>{hits[1].id});
    CHECK_FALSE(r.fallback);
    CHECK(r.candidates == hits);
    auto prompt = gw.transcript()[0].request.messages.back().content;
    CHECK(prompt.find("id: f1") != std::string::npos);
    CHECK(prompt.find("id: f2") != std::string::npos);
  }
  SUBCASE("non-candidate falls back to top-1") {
    llm::Gateway gw(llm::ScriptedBackend::from_replies({"Selected: made-up", "Selected: also-made-up"}));
    auto r = select_tools("p1", kNote, w.context(gw), SelectMode::single);
    CHECK(r.selected == std::vector<std::string>{hits[0].id});
    CHECK(r.fallback);
    CHECK(gw.calls() == 2);
    CHECK(gw.transcript()[1].request.purpose == "select.repair");
    CHECK(r.warnings.size() >= 2);
  }
  SUBCASE("repair succeeds") {
    llm::Gateway gw(llm::ScriptedBackend::from_replies({"not sure", "Selected: " + hits[1].id}));
    auto r = select_tools("p1", kNote, w.context(gw), SelectMode::single);
    CHECK(r.selected == std::vector<std::string>{hits[1].id});
    CHECK_FALSE(r.fallback);
  }
  SUBCASE("multi mode allows none") {
    llm::Gateway gw(llm::ScriptedBackend::from_replies({"none eligible\nSelected: none"}));
    auto r = select_tools("p1", kNote, w.context(gw), SelectMode::multi);
    CHECK(r.selected.empty());
    CHECK(gw.calls() == 1);
  }
  SUBCASE("single mode keeps one id") {
    llm::Gateway gw(llm::ScriptedBackend::from_replies({"Selected: f2, f1"}));
    auto r = select_tools("p1", kNote, w.context(gw), SelectMode::single);
    CHECK(r.selected == std::vector<std::string>{"f2"});
  }
}

TEST_CASE("empty registry selects nothing") {
  World w(model::Registry{});
  llm::Gateway gw(llm::ScriptedBackend::from_replies({}));
  auto r = select_tools("p", kNote, w.context(gw), SelectMode::single);
  CHECK(r.candidates.empty());
  CHECK(r.selected.empty());
  CHECK(gw.calls() == 0);
}

TEST_CASE("run_patient") {
  auto reg = fixture_registry();
  auto f3 = reg.at("f1");
  f3.id = "f3";
  reg.add(f3);
  World w(std::move(reg));

  SUBCASE("single select gives one summary") {
    llm::Gateway gw(llm::ScriptedBackend::from_replies({"Selected: f1", kF1AllTrue, "Summary: high."}));
    auto r = run_patient("p1", kNote, w.context(gw), SelectMode::single);
    CHECK(r.summaries.size() == 1);
    CHECK(r.failures.empty());
  }
  SUBCASE("one failing branch of three") {
    std::string f3_block = kF1AllTrue;
    f3_block.replace(f3_block.find("f1"), 2, "f3");
    std::vector<llm::ScriptEntry> rules{
        rule("select", "", "Selected: f1, f2, f3"),
        rule("compute", "id: f1\n", kF1AllTrue),
        rule("summarize_check", "id: f1\n", "Summary: f1 high."),
        rule("compute", "id: f2\n", "```calc\ncalculator: f2\nage = 70\nsmoker = false\n```"),
        rule("summarize_check", "id: f2\n", "Summary: f2 done."),
        rule("compute", "id: f3\n", f3_block),
    };
    llm::Gateway gw(std::make_shared<llm::ScriptedBackend>(rules, llm::ScriptedBackend::Mode::rules));
    auto r = run_patient("p1", kNote, w.context(gw), SelectMode::multi);
    CHECK(r.selection.selected == std::vector<std::string>{"f1", "f2", "f3"});
    CHECK(r.summaries.size() == 2);
    REQUIRE(r.failures.size() == 1);
    CHECK(r.failures[0].calculator_id == "f3");
    CHECK(r.failures[0].reason.rfind("failed_error", 0) == 0);
    CHECK(r.sessions.size() == 3);
    CHECK(r.to_json()["summaries"].size() == 2);
  }
  SUBCASE("empty selection") {
    llm::Gateway gw(llm::ScriptedBackend::from_replies({"Selected: none"}));
    auto r = run_patient("p1", kNote, w.context(gw), SelectMode::multi);
    CHECK(r.summaries.empty());
    CHECK(r.sessions.empty());
  }
}

TEST_CASE("adversarial sessions keep their invariants") {
  auto reg = fixture_registry();
  const auto& f1 = reg.at("f1");
  auto prog = lang::parse(f1.program_source);
  const std::vector<std::string> pool{
      kF1AllTrue,
      "```calc\ncalculator: f1\nage_over_65 = UNKNOWN\ndiabetes = true\n```",
      "```calc\ncalculator: f1\nage_over_65 = 7\n```",
      "```calc\ncalculator: f2\nage = 1\n```",
      "```calc\nage_over_65 = true\n```",
      "```calc\ncalculator: f1\nhypertension = {true, maybe}\n```",
      "```calc\ncalculator: f1\nnot_a_param = true\n```",
      "The score is 99. Summary follows later.",
      "Summary: the score is 42 (this number is made up).",
      "",
  };
  for (std::uint32_t seed = 0; seed < 200; ++seed) {
    CAPTURE(seed);
    std::mt19937 rng(seed);
    std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
    llm::Gateway gw(std::make_shared<llm::CallbackBackend>([&](const llm::ChatRequest&) { return pool[pick(rng)]; }));
    auto s = run_computation(kNote, f1, gw, llm::TemplateSet::builtin());

    CHECK(s.turns.size() <= kDefaultMaxTurns);
    CHECK(gw.calls() == s.turns.size());
    for (std::size_t i = 0; i < s.turns.size(); ++i) {
      bool last = i + 1 == s.turns.size();
      bool summary = is_summary(s.turns[i].message);
      CHECK(summary == (last && s.status == SessionStatus::summarized));
      CHECK(s.turns[i].observation.has_value() == !summary);
      if (s.turns[i].invocation) CHECK(s.turns[i].observation.has_value());
      if (s.turns[i].outcome) CHECK(*s.turns[i].outcome == lang::evaluate(prog, s.turns[i].invocation->binding, f1.interpretation));
    }
    if (s.status != SessionStatus::summarized) continue;
    auto r = summarize(s);
    for (const auto& o : r.outputs) {
      bool produced = false;
      for (const auto& t : s.turns)
        if (t.outcome)
          for (const auto& x : t.outcome->outputs) produced = produced || (x.lo == o.lo && x.hi == o.hi);
      CHECK(produced);
      CHECK(o.lo != 42.0);
    }
    if (r.ranged) CHECK_FALSE(r.missing_params.empty());
    else CHECK(r.missing_params.empty());
  }
}
