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

#include "riskagent/agent/session.hpp"

#include <fstream>

#include "riskagent/lang/parser.hpp"
#include "riskagent/model/validate.hpp"
#include "riskagent/util/jsonl.hpp"
#include "riskagent/util/strings.hpp"

namespace riskagent::agent {

std::string_view to_string(SessionStatus s) {
  switch (s) {
    case SessionStatus::summarized: return "summarized";
    case SessionStatus::failed_max_turns: return "failed_max_turns";
    case SessionStatus::failed_error: return "failed_error";
  }
  return "failed_error";
}

SessionStatus session_status_from_string(std::string_view s) {
  if (s == "summarized") return SessionStatus::summarized;
  if (s == "failed_max_turns") return SessionStatus::failed_max_turns;
  if (s == "failed_error") return SessionStatus::failed_error;
  throw std::invalid_argument("unknown session status '" + std::string(s) + "'");
}

nlohmann::json Turn::to_json() const {
  nlohmann::json j{{"message", message}};
  if (invocation)
    j["invocation"] = {{"calculator", invocation->calculator_id}, {"binding", lang::binding_to_json(invocation->binding)}};
  if (observation) j["observation"] = *observation;
  if (outcome) j["outcome"] = outcome->to_json();
  return j;
}

Turn Turn::from_json(const nlohmann::json& j) {
  Turn t;
  t.message = j.at("message").get<std::string>();
  if (j.contains("invocation")) {
    const auto& inv = j["invocation"];
    t.invocation = CalcInvocation{inv.at("calculator").get<std::string>(), lang::binding_from_json(inv.at("binding"))};
  }
  if (j.contains("observation")) t.observation = j["observation"].get<std::string>();
  if (j.contains("outcome")) t.outcome = lang::EvalOutcome::from_json(j["outcome"]);
  return t;
}

std::string AgentSession::to_jsonl() const {
  nlohmann::json head{{"kind", "session"},
                      {"calculator_id", calculator_id},
                      {"status", std::string(to_string(status))},
                      {"turns", turns.size()},
                      {"patient_note", patient_note}};
  if (status == SessionStatus::summarized) head["summary"] = summary;
  if (!error.empty()) head["error"] = error;
  std::string out = head.dump() + "\n";
  for (std::size_t i = 0; i < turns.size(); ++i) {
    auto j = turns[i].to_json();
    j["kind"] = "turn";
    j["index"] = i;
    out += j.dump() + "\n";
  }
  return out;
}

void AgentSession::save(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << to_jsonl();
}

AgentSession AgentSession::load(const std::filesystem::path& path) {
  auto lines = util::read_jsonl(path);
  if (lines.empty() || lines[0].value("kind", "") != "session")
    throw std::runtime_error(path.string() + ": missing session header");
  const auto& head = lines[0];
  AgentSession s;
  s.calculator_id = head.at("calculator_id").get<std::string>();
  s.status = session_status_from_string(head.at("status").get<std::string>());
  s.patient_note = head.value("patient_note", "");
  s.summary = head.value("summary", "");
  s.error = head.value("error", "");
  for (std::size_t i = 1; i < lines.size(); ++i) s.turns.push_back(Turn::from_json(lines[i]));
  return s;
}

nlohmann::json RiskSummary::to_json() const {
  nlohmann::json outs = nlohmann::json::array();
  for (const auto& o : outputs) {
    nlohmann::json bands = nlohmann::json::array();
    for (const auto& b : o.bands) bands.push_back(b.label);
    nlohmann::json j{{"name", o.name}, {"bands", bands}};
    if (o.is_point()) j["value"] = o.lo;
    else j["interval"] = {o.lo, o.hi};
    outs.push_back(std::move(j));
  }
  nlohmann::json j{{"calculator_id", calculator_id},
                   {"outputs", outs},
                   {"narrative", narrative},
                   {"missing_params", missing_params},
                   {"ranged", ranged}};
  if (extraction_error) j["extraction_error"] = *extraction_error;
  j["outcome"] = lang::EvalOutcome{outputs, ranged, missing_params}.to_json();
  return j;
}

RiskSummary RiskSummary::from_json(const nlohmann::json& j) {
  RiskSummary s;
  s.calculator_id = j.at("calculator_id").get<std::string>();
  s.narrative = j.value("narrative", "");
  auto outcome = lang::EvalOutcome::from_json(j.at("outcome"));
  s.outputs = std::move(outcome.outputs);
  s.ranged = outcome.ranged;
  s.missing_params = std::move(outcome.missing);
  if (j.contains("extraction_error")) s.extraction_error = j["extraction_error"].get<std::string>();
  return s;
}

bool is_summary(std::string_view message) {
  std::size_t i = 0;
  while (i < message.size() && std::isspace(static_cast<unsigned char>(message[i]))) ++i;
  return message.substr(i).rfind("Summary:", 0) == 0;
}

std::string describe_for_computation(const model::Calculator& calc) {
  std::string out = model::digest(calc).text;
  if (!calc.interpretation.empty()) {
    out += "interpretation:\n";
    for (const auto& b : calc.interpretation) {
      out += "  - " + b.output + " in " + std::string(1, b.lower_inclusive() ? '[' : '(') + util::format_double(b.lower) +
             ", " + util::format_double(b.upper) + (b.upper_inclusive() ? "]" : ")") + ": " + b.label;
      if (!b.statement.empty()) out += " (" + b.statement + ")";
      out += "\n";
    }
  }
  out += "program:\n" + calc.program_source;
  return out;
}

std::string observe(const model::Calculator& calc, const lang::Program& program, const CalcInvocation& inv,
                    std::optional<lang::EvalOutcome>& outcome) {
  outcome.reset();
  if (inv.calculator_id != calc.id)
    return "error: this session runs calculator '" + calc.id + "', not '" + inv.calculator_id + "'";
  try {
    outcome = lang::evaluate(program, inv.binding, calc.interpretation);
    return outcome->render();
  } catch (const lang::BindingError& e) {
    return std::string("error: ") + e.what();
  } catch (const lang::EvalError& e) {
    return std::string("error: ") + e.what();
  }
}

AgentSession run_computation(const std::string& note, const model::Calculator& calc, llm::Gateway& gateway,
                             const llm::TemplateSet& templates, std::size_t max_turns) {
  if (calc.status != model::CalcStatus::verified)
    throw std::invalid_argument("calculator " + calc.id + " is not verified");
  lang::Program program = lang::parse(calc.program_source);

  AgentSession session;
  session.patient_note = note;
  session.calculator_id = calc.id;

  auto request = templates.get("compute").request(
      {{"note", note}, {"calculator", describe_for_computation(calc)}, {"max_turns", std::to_string(max_turns)}});
  const auto& followup = templates.get("summarize_check");

  for (std::size_t t = 0; t < max_turns; ++t) {
    llm::ChatMessage reply;
    try {
      reply = gateway.chat(request);
    } catch (const llm::LlmError& e) {
      session.status = SessionStatus::failed_error;
      session.error = e.what();
      return session;
    }
    Turn turn;
    turn.message = reply.content;
    if (is_summary(reply.content)) {
      auto at = reply.content.find("Summary:");
      session.summary = util::trim(std::string_view(reply.content).substr(at + 8));
      session.status = SessionStatus::summarized;
      session.turns.push_back(std::move(turn));
      return session;
    }
    if (auto block = find_calc_block(reply.content)) {
      try {
        turn.invocation = parse_calc_block(*block);
        turn.observation = observe(calc, program, *turn.invocation, turn.outcome);
      } catch (const BlockError& e) {
        turn.observation = std::string("error: ") + e.what();
      }
    } else {
      turn.observation = "error: no ```calc block found; run the calculator or reply with a paragraph starting with \"Summary:\"";
    }
    request.messages.push_back(reply);
    auto next = followup.request({{"observation", *turn.observation}});
    request.messages.push_back(next.messages.back());
    request.purpose = next.purpose;
    request.model_tag = next.model_tag;
    session.turns.push_back(std::move(turn));
  }
  session.status = SessionStatus::failed_max_turns;
  return session;
}

RiskSummary summarize(const AgentSession& session) {
  if (session.status != SessionStatus::summarized)
    throw SummaryError("session for " + session.calculator_id + " ended with status " +
                       std::string(to_string(session.status)));
  RiskSummary out;
  out.calculator_id = session.calculator_id;
  out.narrative = session.summary;
  for (auto it = session.turns.rbegin(); it != session.turns.rend(); ++it) {
    if (!it->outcome) continue;
    out.outputs = it->outcome->outputs;
    out.missing_params = it->outcome->missing;
    out.ranged = it->outcome->ranged;
    return out;
  }
  out.extraction_error = "no successful calculator run in the session";
  return out;
}

}  // namespace riskagent::agent
