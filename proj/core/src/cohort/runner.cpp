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

#include "riskagent/cohort/runner.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <mutex>
#include <optional>
#include <set>
#include <sstream>

#include "riskagent/util/jsonl.hpp"
#include "riskagent/util/parallel.hpp"
#include "riskagent/util/strings.hpp"

namespace riskagent::cohort {

namespace fs = std::filesystem;

nlohmann::json PatientOutcome::to_json() const {
  nlohmann::json choices_j = nlohmann::json::array();
  for (const auto& c : choices)
    choices_j.push_back({{"risk", c.risk}, {"calculator_id", c.calculator_id}, {"fallback", c.fallback}});
  nlohmann::json results_j = nlohmann::json::array();
  for (const auto& r : results) results_j.push_back(r.to_json());
  nlohmann::json failures_j = nlohmann::json::array();
  for (const auto& f : failures) failures_j.push_back(f.to_json());
  return {{"patient_id", patient_id}, {"choices", choices_j}, {"calculators", calculators},
          {"results", results_j},     {"failures", failures_j}, {"flags", flags}};
}

PatientOutcome PatientOutcome::from_json(const nlohmann::json& j) {
  PatientOutcome p;
  p.patient_id = j.at("patient_id").get<std::string>();
  for (const auto& c : j.at("choices"))
    p.choices.push_back({c.at("risk").get<std::string>(), c.at("calculator_id").get<std::string>(), c.value("fallback", false)});
  p.calculators = j.at("calculators").get<std::vector<std::string>>();
  for (const auto& r : j.at("results")) p.results.push_back(RiskResult::from_json(r));
  for (const auto& f : j.at("failures"))
    p.failures.push_back({f.at("calculator_id").get<std::string>(), f.at("reason").get<std::string>()});
  p.flags = j.value("flags", std::vector<std::string>{});
  return p;
}

namespace {

PatientOutcome process(const NoteRecord& note, const agent::AgentContext& ctx, const RiskTypeRules& rules) {
  PatientOutcome out;
  out.patient_id = note.patient_id;
  auto risks = generate_risks(note, ctx.gateway, ctx.templates);
  out.flags = risks.flags;

  std::set<std::string> chosen;
  for (const auto& risk : risks.risks) {
    auto sel = select_for_risk(note, risk, ctx);
    RiskChoice c{risk.text, sel.selected.empty() ? std::string() : sel.selected.front(), sel.fallback};
    for (const auto& w : sel.warnings) out.flags.push_back("risk '" + risk.text + "': " + w);
    if (!c.calculator_id.empty()) chosen.insert(c.calculator_id);
    out.choices.push_back(std::move(c));
  }
  out.calculators.assign(chosen.begin(), chosen.end());

  for (const auto& id : out.calculators) {
    const auto& calc = ctx.registry.at(id);
    agent::AgentSession session;
    try {
      session = agent::run_computation(note.note_text, calc, ctx.gateway, ctx.templates, ctx.max_turns);
    } catch (const std::invalid_argument& e) {
      out.failures.push_back({id, e.what()});
      continue;
    } catch (const lang::LangError& e) {
      out.failures.push_back({id, e.what()});
      continue;
    }
    if (session.status != agent::SessionStatus::summarized) {
      std::string reason(agent::to_string(session.status));
      if (!session.error.empty()) reason += ": " + session.error;
      if (session.status == agent::SessionStatus::failed_error) out.interrupted = true;
      out.failures.push_back({id, reason});
      continue;
    }
    RiskResult r;
    r.patient_id = note.patient_id;
    r.calculator_id = id;
    r.summary = agent::summarize(session);
    if (r.summary.extraction_error) r.warnings.push_back(*r.summary.extraction_error);
    auto scored = score_result(note, calc, r.summary, ctx.gateway, ctx.templates);
    r.scores = scored.scores;
    r.warnings.insert(r.warnings.end(), scored.warnings.begin(), scored.warnings.end());
    r.risk_type = rules.classify(calc);
    out.results.push_back(std::move(r));
  }
  return out;
}

std::map<std::string, PatientOutcome> load_checkpoint(const fs::path& path, const std::set<std::string>& ids) {
  std::map<std::string, PatientOutcome> done;
  if (!fs::exists(path)) return done;
  std::string text = util::read_file(path);
  std::istringstream in(text);
  std::string line;
  std::size_t n = 0, consumed = 0;
  while (std::getline(in, line)) {
    ++n;
    consumed += line.size() + 1;
    bool last_unterminated = consumed > text.size();
    if (util::trim(line).empty()) continue;
    try {
      auto p = PatientOutcome::from_json(nlohmann::json::parse(line));
      if (!ids.count(p.patient_id))
        throw CohortError("checkpoint line " + std::to_string(n) + " names patient " + p.patient_id +
                          ", which is not in the corpus");
      done[p.patient_id] = std::move(p);
    } catch (const nlohmann::json::parse_error&) {
      if (last_unterminated) break;
      throw CohortError("checkpoint " + path.string() + " is corrupt at line " + std::to_string(n));
    } catch (const nlohmann::json::exception& e) {
      throw CohortError("checkpoint " + path.string() + " line " + std::to_string(n) + ": " + e.what());
    }
  }
  return done;
}

}  // namespace

CohortRun run_cohort(const std::vector<NoteRecord>& notes, const agent::AgentContext& ctx, const CohortConfig& config,
                     const RiskTypeRules& rules) {
  std::set<std::string> ids;
  for (const auto& n : notes)
    if (!ids.insert(n.patient_id).second) throw CohortError("duplicate patient_id " + n.patient_id);

  std::map<std::string, PatientOutcome> done;
  if (!config.checkpoint.empty()) {
    if (config.resume) done = load_checkpoint(config.checkpoint, ids);
    else std::ofstream(config.checkpoint, std::ios::trunc);
  }

  std::vector<const NoteRecord*> todo;
  for (const auto& n : notes)
    if (!done.count(n.patient_id)) todo.push_back(&n);

  std::mutex mu;
  std::size_t workers = std::min(config.concurrency, ctx.gateway.in_flight_limit());
  util::parallel_for(todo.size(), workers, [&](std::size_t i) {
    auto p = process(*todo[i], ctx, rules);
    std::lock_guard lock(mu);
    if (!config.checkpoint.empty() && !p.interrupted) util::append_jsonl(config.checkpoint, p.to_json());
    done[p.patient_id] = std::move(p);
  });

  CohortRun run;
  for (auto& [id, p] : done) {
    run.results.insert(run.results.end(), p.results.begin(), p.results.end());
    run.patients.push_back(std::move(p));
  }
  run.report = aggregate(run.results, notes.size());
  return run;
}

void write_outputs(const CohortRun& run, const fs::path& dir) {
  fs::create_directories(dir);
  auto write = [&](const char* name, const std::string& text) {
    std::ofstream out(dir / name, std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + (dir / name).string());
    out << text;
  };
  std::string results, patients;
  for (const auto& r : run.results) results += r.to_json().dump() + "\n";
  for (const auto& p : run.patients) patients += p.to_json().dump() + "\n";
  write("results.jsonl", results);
  write("patients.jsonl", patients);
  write("report.json", run.report.to_json().dump(2) + "\n");
  write("per_patient.csv", run.report.per_patient_csv());
  write("per_calculator.csv", run.report.per_calculator_csv());
  write("scores.csv", run.report.scores_csv());
}

}  // namespace riskagent::cohort
