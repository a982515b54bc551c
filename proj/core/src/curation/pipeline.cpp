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


#include "riskagent/curation/pipeline.hpp"

#include <fstream>
#include <map>
#include <mutex>
#include <set>
#include <sstream>

#include "riskagent/util/jsonl.hpp"
#include "riskagent/util/parallel.hpp"
#include "riskagent/util/strings.hpp"

namespace riskagent::curation {

namespace fs = std::filesystem;

bool StageCounts::monotone() const noexcept {
  return boolean_pass <= input && screen_pass <= boolean_pass && verified <= drafted;
}

nlohmann::json StageCounts::to_json() const {
  return {{"input", input},
          {"boolean_pass", boolean_pass},
          {"screen_pass", screen_pass},
          {"drafted", drafted},
          {"verified", verified}};
}

nlohmann::json SkipEntry::to_json() const {
  nlohmann::json j{{"pmid", pmid}, {"stage", stage}, {"reason", reason}};
  if (!calc_id.empty()) j["calc_id"] = calc_id;
  return j;
}

namespace {

struct VerifyState {
  bool verdict = false;
  std::vector<std::string> reasons;
};

struct ClassifyState {
  std::set<model::OrganSystem> systems;
  std::vector<std::string> warnings;
};

// Everything known about one record, from the checkpoint or this run.
struct RecordState {
  std::optional<bool> boolean;
  std::optional<ScreenDecision> screen;
  std::optional<DraftResult> draft;
  std::map<std::string, VerifyState> verify;
  std::map<std::string, ClassifyState> classify;
  bool done = false;
};

struct RecordOutcome {
  bool boolean_pass = false;
  bool screen_pass = false;
  std::size_t drafted = 0;
  std::size_t verified = 0;
  std::vector<model::Calculator> published;
  std::vector<SkipEntry> skips;
  std::vector<std::string> warnings;
};

std::vector<std::string> strings_of(const nlohmann::json& j, const char* key) {
  return j.contains(key) ? j[key].get<std::vector<std::string>>() : std::vector<std::string>{};
}

void restore_line(const nlohmann::json& j, std::map<std::string, RecordState>& states, std::size_t line) {
  auto at = [&](const char* key) -> const nlohmann::json& {
    if (!j.contains(key)) throw ResumeError("checkpoint line " + std::to_string(line) + " lacks '" + key + "'");
    return j[key];
  };
  std::string pmid = at("pmid").get<std::string>();
  std::string stage = at("stage").get<std::string>();
  auto it = states.find(pmid);
  if (it == states.end())
    throw ResumeError("checkpoint line " + std::to_string(line) + " names pmid " + pmid + ", which is not in the corpus");
  auto& s = it->second;
  if (stage == "boolean") {
    s.boolean = at("verdict").get<bool>();
  } else if (stage == "screen") {
    s.screen = ScreenDecision{pmid, at("verdict").get<bool>(), j.value("rationale", "")};
  } else if (stage == "draft") {
    DraftResult d;
    for (const auto& doc : at("drafts")) d.drafts.push_back(model::Calculator::from_json(doc));
    d.errors = strings_of(j, "errors");
    d.repaired = j.value("repaired", false);
    s.draft = std::move(d);
  } else if (stage == "verify") {
    s.verify[at("calc_id").get<std::string>()] = {at("verdict").get<bool>(), strings_of(j, "reasons")};
  } else if (stage == "classify") {
    ClassifyState c;
    for (const auto& code : strings_of(j, "organ_systems")) {
      auto sys = model::organ_system_from_code(code);
      if (!sys) throw ResumeError("checkpoint line " + std::to_string(line) + " has unknown organ system " + code);
      c.systems.insert(*sys);
    }
    c.warnings = strings_of(j, "warnings");
    s.classify[at("calc_id").get<std::string>()] = std::move(c);
  } else if (stage == "done") {
    s.done = true;
  } else {
    throw ResumeError("checkpoint line " + std::to_string(line) + " has unknown stage '" + stage + "'");
  }
}

// A torn final line (no trailing newline) is the expected result of a kill
// mid-write and is dropped; any other unreadable line is corruption.
void load_checkpoint(const fs::path& path, std::map<std::string, RecordState>& states) {
  if (!fs::exists(path)) return;
  std::string text = util::read_file(path);
  std::istringstream in(text);
  std::string line;
  std::size_t n = 0;
  std::size_t consumed = 0;
  while (std::getline(in, line)) {
    ++n;
    consumed += line.size() + 1;
    bool last_unterminated = consumed > text.size();
    if (util::trim(line).empty()) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error&) {
      if (last_unterminated) break;
      throw ResumeError("checkpoint " + path.string() + " is corrupt at line " + std::to_string(n) +
                        "; rerun without resume to start fresh");
    }
    try {
      restore_line(j, states, n);
    } catch (const nlohmann::json::exception& e) {
      throw ResumeError("checkpoint " + path.string() + " line " + std::to_string(n) + ": " + e.what());
    } catch (const model::SchemaError& e) {
      throw ResumeError("checkpoint " + path.string() + " line " + std::to_string(n) + ": " + e.what());
    }
  }
}

class Checkpoint {
 public:
  explicit Checkpoint(fs::path path) : path_(std::move(path)) {}

  void write(nlohmann::json j) {
    if (path_.empty()) return;
    j["timestamp"] = util::utc_timestamp();
    std::lock_guard lock(mu_);
    util::append_jsonl(path_, j);
  }

 private:
  fs::path path_;
  std::mutex mu_;
};

std::vector<std::string> codes(const std::set<model::OrganSystem>& s) {
  std::vector<std::string> out;
  for (auto x : s) out.emplace_back(model::code(x));
  return out;
}

RecordOutcome process(const model::AbstractRecord& rec, RecordState& s, const PipelineConfig& config,
                      llm::Gateway& gateway, const llm::TemplateSet& templates, Checkpoint& cp) {
  RecordOutcome out;
  if (!s.boolean) {
    s.boolean = config.query.matches(rec.title + "\n" + rec.abstract);
    cp.write({{"pmid", rec.pmid}, {"stage", "boolean"}, {"verdict", *s.boolean}});
  }
  auto finish = [&] {
    if (!s.done) cp.write({{"pmid", rec.pmid}, {"stage", "done"}});
    s.done = true;
    return out;
  };
  if (!*s.boolean) {
    out.skips.push_back({rec.pmid, "", "boolean", "query not satisfied"});
    return finish();
  }
  out.boolean_pass = true;

  if (!s.screen) {
    s.screen = screen(rec, gateway, templates);
    cp.write({{"pmid", rec.pmid}, {"stage", "screen"}, {"verdict", s.screen->verdict}, {"rationale", s.screen->rationale}});
  }
  if (!s.screen->verdict) {
    out.skips.push_back({rec.pmid, "", "screen", s.screen->rationale});
    return finish();
  }
  out.screen_pass = true;

  if (!s.draft) {
    s.draft = draft(rec, gateway, templates);
    nlohmann::json docs = nlohmann::json::array();
    for (const auto& d : s.draft->drafts) docs.push_back(d.to_json());
    cp.write({{"pmid", rec.pmid},
              {"stage", "draft"},
              {"verdict", !s.draft->drafts.empty()},
              {"drafts", docs},
              {"errors", s.draft->errors},
              {"repaired", s.draft->repaired}});
  }
  if (s.draft->drafts.empty()) {
    out.skips.push_back({rec.pmid, "", "draft", "no valid calculator document: " + util::join(s.draft->errors, "; ")});
    return finish();
  }
  out.drafted = s.draft->drafts.size();

  for (const auto& calc : s.draft->drafts) {
    auto v = s.verify.find(calc.id);
    if (v == s.verify.end()) {
      auto d = verify(calc, rec, gateway, templates);
      cp.write({{"pmid", rec.pmid},
                {"stage", "verify"},
                {"calc_id", calc.id},
                {"verdict", d.verdict},
                {"reasons", d.reasons}});
      v = s.verify.emplace(calc.id, VerifyState{d.verdict, d.reasons}).first;
    }
    if (!v->second.verdict) {
      out.skips.push_back({rec.pmid, calc.id, "verify", util::join(v->second.reasons, "; ")});
      continue;
    }
    ++out.verified;

    auto c = s.classify.find(calc.id);
    if (c == s.classify.end()) {
      auto r = classify_systems(calc, gateway, templates);
      cp.write({{"pmid", rec.pmid},
                {"stage", "classify"},
                {"calc_id", calc.id},
                {"verdict", !r.systems.empty()},
                {"organ_systems", codes(r.systems)},
                {"warnings", r.warnings}});
      c = s.classify.emplace(calc.id, ClassifyState{r.systems, r.warnings}).first;
    }
    for (const auto& w : c->second.warnings) out.warnings.push_back(calc.id + ": " + w);
    if (c->second.systems.empty()) {
      out.skips.push_back({rec.pmid, calc.id, "classify", "no organ system assigned"});
      continue;
    }
    model::Calculator published = calc;
    published.organ_systems = c->second.systems;
    published.status = model::CalcStatus::verified;
    out.published.push_back(std::move(published));
  }
  return finish();
}

}  // namespace

PipelineResult run_pipeline(const std::vector<model::AbstractRecord>& corpus, const PipelineConfig& config,
                            llm::Gateway& gateway, const llm::TemplateSet& templates) {
  std::map<std::string, RecordState> states;
  for (const auto& r : corpus)
    if (!states.emplace(r.pmid, RecordState{}).second) throw std::invalid_argument("duplicate pmid " + r.pmid + " in corpus");

  if (!config.checkpoint.empty()) {
    if (config.resume) load_checkpoint(config.checkpoint, states);
    else std::ofstream(config.checkpoint, std::ios::trunc);
  }
  Checkpoint cp(config.checkpoint);

  std::vector<RecordOutcome> outcomes(corpus.size());
  std::size_t workers = std::min(config.concurrency, gateway.in_flight_limit());
  util::parallel_for(corpus.size(), workers, [&](std::size_t i) {
    outcomes[i] = process(corpus[i], states.at(corpus[i].pmid), config, gateway, templates, cp);
  });

  PipelineResult result;
  result.counts.input = corpus.size();
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    auto& o = outcomes[i];
    result.counts.boolean_pass += o.boolean_pass;
    result.counts.screen_pass += o.screen_pass;
    result.counts.drafted += o.drafted;
    result.counts.verified += o.verified;
    for (auto& s : o.skips) result.skips.push_back(std::move(s));
    for (auto& w : o.warnings) result.warnings.push_back(std::move(w));
    if (!o.published.empty()) result.registry.add_abstract(corpus[i]);
    for (auto& c : o.published) result.registry.add(std::move(c), "pmid " + corpus[i].pmid);
  }
  if (!result.counts.monotone()) throw std::logic_error("curation funnel is not monotone");
  return result;
}

void write_outputs(const PipelineResult& result, const fs::path& dir) {
  fs::create_directories(dir);
  auto reg = dir / "registry";
  fs::remove_all(reg);
  fs::create_directories(reg);
  result.registry.save_directory(reg);
  auto counts = result.counts.to_json();
  counts["published"] = result.registry.size();
  util::write_file(dir / "counts.json", counts.dump(2) + "\n");
  std::vector<nlohmann::json> skips;
  for (const auto& s : result.skips) skips.push_back(s.to_json());
  util::write_jsonl(dir / "skips.jsonl", skips);
}

}  // namespace riskagent::curation
