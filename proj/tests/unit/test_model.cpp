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


#include <filesystem>
#include <random>

#include "doctest.h"
#include "fixtures.hpp"
#include "riskagent/model/registry.hpp"
#include "riskagent/model/validate.hpp"
#include "riskagent/util/jsonl.hpp"

using namespace riskagent;
using namespace riskagent::model;
using riskagent::testing::fixture;
using riskagent::testing::scratch_dir;
namespace fs = std::filesystem;

namespace {

Calculator f1() { return Calculator::from_json(nlohmann::json::parse(util::read_file(fixture("registry/f1.json")))); }

Calculator as_draft(Calculator c) {
  c.status = CalcStatus::draft;
  return c;
}

}  // namespace

TEST_CASE("organ systems") {
  CHECK(all_organ_systems().size() == 10);
  CHECK(label(OrganSystem::A04) == "Respiratory");
  CHECK(organ_system_from_code("A17") == OrganSystem::A17);
  CHECK_FALSE(organ_system_from_code("A01"));
  for (auto s : all_organ_systems()) CHECK(organ_system_from_code(code(s)) == s);
}

TEST_CASE("validate F1") {
  auto r = validate(as_draft(f1()));
  CHECK(r.all_passed());
  for (const char* name : {"metadata", "parse", "typecheck", "band_overlap", "band_coverage"}) {
    REQUIRE(r.find(name));
    CHECK(r.find(name)->passed);
  }
}

TEST_CASE("validate detects a coverage gap") {
  auto c = as_draft(f1());
  c.interpretation = {{"score", 0, 1, lang::Bounds::closed, "low", ""}, {"score", 3, 5, lang::Bounds::closed, "high", ""}};
  auto r = validate(c);
  CHECK_FALSE(r.find("band_coverage")->passed);
  REQUIRE(r.failures().size() == 1);
  CHECK(r.failures()[0] == "band_coverage: output 'score': no band covers values between 1 and 3");
}

TEST_CASE("validate detects a parse failure") {
  auto c = as_draft(f1());
  c.program_source = "param x:";
  auto r = validate(c);
  CHECK_FALSE(r.find("parse")->passed);
  CHECK(r.find("metadata")->passed);
}

TEST_CASE("validate detects overlap and missing metadata") {
  auto c = as_draft(f1());
  c.interpretation.push_back({"score", 1, 2.5, lang::Bounds::closed_open, "extra", ""});
  c.title.clear();
  auto r = validate(c);
  CHECK_FALSE(r.find("band_overlap")->passed);
  CHECK_FALSE(r.find("metadata")->passed);
}

TEST_CASE("digest") {
  auto c = f1();
  auto d = digest(c);
  CHECK(d.parameters.size() == 5);
  CHECK(d.text.find("prior_stroke: boolean") != std::string::npos);
  CHECK(d.text.find("purpose:") != std::string::npos);
  CHECK(digest(c).text == d.text);
  c.purpose.clear();
  CHECK(digest(c).text.find("purpose:") == std::string::npos);
}

TEST_CASE("registry load") {
  auto empty = scratch_dir("empty_registry");
  CHECK(Registry::load(empty).empty());

  auto reg = Registry::load(fixture("registry"));
  CHECK(reg.size() == 2);
  CHECK(reg.at("f1").title.size() > 0);
  CHECK(reg.find("f2"));
  CHECK_FALSE(reg.find("f3"));

  auto dup = scratch_dir("dup_registry");
  fs::copy_file(fixture("registry/f1.json"), dup / "a.json");
  fs::copy_file(fixture("registry/f1.json"), dup / "b.json");
  try {
    Registry::load(dup);
    FAIL("expected a conflict");
  } catch (const ConflictError& e) {
    CHECK(e.id() == "f1");
    CHECK(std::string(e.what()).find("a.json") != std::string::npos);
    CHECK(std::string(e.what()).find("b.json") != std::string::npos);
  }

  auto bad = scratch_dir("bad_registry");
  auto j = f1().to_json();
  j["organ_systems"] = {"A99"};
  util::write_file(bad / "x.json", j.dump());
  CHECK_THROWS_WITH_AS(Registry::load(bad), doctest::Contains("organ_systems"), RegistryError);
}

TEST_CASE("verified calculators must validate") {
  Registry reg;
  auto c = f1();
  c.program_source = "param x:";
  CHECK_THROWS_AS(reg.add(c), RegistryError);
  c.status = CalcStatus::draft;
  CHECK_NOTHROW(reg.add(c));
}

TEST_CASE("cohort_size absence and unknown fields survive a round-trip") {
  auto j = f1().to_json();
  j["reviewer_note"] = "kept";
  j.erase("cohort_size");
  auto c = Calculator::from_json(j);
  CHECK_FALSE(c.cohort_size);
  auto out = c.to_json();
  CHECK_FALSE(out.contains("cohort_size"));
  CHECK(out["reviewer_note"] == "kept");
  j["cohort_size"] = 0;
  CHECK(Calculator::from_json(j).to_json()["cohort_size"] == 0);
}

TEST_CASE("document round-trip over generated calculators") {
  std::mt19937_64 rng(7);
  auto base = f1();
  for (int i = 0; i < 100; ++i) {
    Calculator c = base;
    c.id = "pmid-" + std::to_string(rng() % 100000) + (i % 3 == 0 ? "-2" : "");
    c.title = "Title " + std::to_string(rng() % 1000) + " \"quoted\" é";
    c.citation_count = rng() % 5000;
    if (rng() % 2) c.cohort_size.reset();
    else c.cohort_size = rng() % 100000;
    c.organ_systems.clear();
    for (auto s : all_organ_systems())
      if (rng() % 3 == 0) c.organ_systems.insert(s);
    c.status = c.organ_systems.empty() ? CalcStatus::draft : static_cast<CalcStatus>(rng() % 3);
    c.interpretation[1].bounds = static_cast<lang::Bounds>(rng() % 4);
    c.interpretation[2].upper = rng() % 2 ? 6.0 : std::numeric_limits<double>::infinity();
    if (rng() % 2) c.extra["note"] = static_cast<int>(rng() % 10);
    auto text = c.to_json().dump();
    CHECK(Calculator::from_json(nlohmann::json::parse(text)) == c);
  }
}

TEST_CASE("save and reload") {
  auto reg = Registry::load(fixture("registry"));
  reg.add_abstract({"90000001", "t", "an abstract", 2001, 4});
  auto dir = scratch_dir("saved_registry");
  reg.save_directory(dir);
  auto again = Registry::load(dir);
  CHECK(again.size() == 2);
  CHECK(again.at("f2") == reg.at("f2"));
  REQUIRE(again.abstract_for("90000001"));
  CHECK(again.abstract_for("90000001")->abstract == "an abstract");

  auto bundle = dir / "bundle.jsonl";
  reg.save_bundle(bundle);
  auto b = Registry::load(bundle);
  CHECK(b.size() == 2);
  CHECK(b.at("f1") == reg.at("f1"));
}
