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

#include "riskagent/agent/agent.hpp"

#include <algorithm>
#include <cctype>

#include "riskagent/model/validate.hpp"
#include "riskagent/util/parallel.hpp"
#include "riskagent/util/strings.hpp"

namespace riskagent::agent {

std::string_view to_string(SelectMode m) { return m == SelectMode::single ? "single" : "multi"; }

SelectMode select_mode_from_string(std::string_view s) {
  if (s == "single") return SelectMode::single;
  if (s == "multi") return SelectMode::multi;
  throw std::invalid_argument("unknown selection mode '" + std::string(s) + "'");
}

nlohmann::json SelectionResult::to_json() const {
  nlohmann::json hits = nlohmann::json::array();
  for (const auto& h : candidates) hits.push_back({{"id", h.id}, {"score", h.score}});
  return {{"patient_ref", patient_ref}, {"candidates", hits},   {"selected", selected},
          {"rationale", rationale},     {"warnings", warnings}, {"fallback", fallback}};
}

nlohmann::json CalcFailure::to_json() const { return {{"calculator_id", calculator_id}, {"reason", reason}}; }

nlohmann::json PatientResult::to_json() const {
  nlohmann::json sums = nlohmann::json::array();
  for (const auto& s : summaries) sums.push_back(s.to_json());
  nlohmann::json fails = nlohmann::json::array();
  for (const auto& f : failures) fails.push_back(f.to_json());
  nlohmann::json sess = nlohmann::json::array();
  for (const auto& s : sessions)
    sess.push_back({{"calculator_id", s.calculator_id}, {"status", std::string(to_string(s.status))}, {"turns", s.turns.size()}});
  return {{"selection", selection.to_json()}, {"summaries", sums}, {"failures", fails}, {"sessions", sess}};
}

namespace {

std::string strip_token(std::string_view t) {
  auto is_edge = [](char c) {
    return c == '`' || c == '*' || c == '"' || c == '\'' || c == '[' || c == ']' || c == '(' || c == ')' || c == '.' ||
           c == ':';
  };
  while (!t.empty() && is_edge(t.front())) t.remove_prefix(1);
  while (!t.empty() && is_edge(t.back())) t.remove_suffix(1);
  return std::string(t);
}

}  // namespace

std::optional<std::vector<std::string>> parse_selection(std::string_view reply,
                                                        const std::vector<std::string>& candidates,
                                                        std::vector<std::string>& dropped) {
  std::optional<std::string> line;
  for (const auto& l : util::split_lines(reply)) {
    auto t = strip_token(util::trim(l));
    if (util::starts_with_ci(t, "selected:")) line = util::trim(std::string_view(t).substr(9));
  }
  if (!line) return std::nullopt;

  std::vector<std::string> out;
  std::string token;
  auto flush = [&] {
    auto id = strip_token(token);
    token.clear();
    if (id.empty()) return;
    if (util::to_lower(id) == "none") return;
    if (std::find(candidates.begin(), candidates.end(), id) == candidates.end()) {
      dropped.push_back(id);
      return;
    }
    if (std::find(out.begin(), out.end(), id) == out.end()) out.push_back(id);
  };
  for (char c : *line) {
    if (c == ',' || c == ';' || std::isspace(static_cast<unsigned char>(c))) flush();
    else token += c;
  }
  flush();
  return out;
}

namespace {

SelectionResult select(const std::string& patient_ref, const std::string& note, const std::string& query,
                       const std::string& focus, const AgentContext& ctx, SelectMode mode) {
  SelectionResult r;
  r.patient_ref = patient_ref;
  if (ctx.registry.empty() || ctx.index.size() == 0) return r;

  for (auto& hit : ctx.index.search(ctx.embedder.embed_query(query), ctx.top_k)) {
    if (!ctx.registry.find(hit.id)) {
      r.warnings.push_back("index entry " + hit.id + " is not in the registry");
      continue;
    }
    r.candidates.push_back(std::move(hit));
  }
  if (r.candidates.empty()) return r;

  std::vector<std::string> ids;
  std::string cards;
  for (std::size_t i = 0; i < r.candidates.size(); ++i) {
    const auto& id = r.candidates[i].id;
    ids.push_back(id);
    cards += std::to_string(i + 1) + ".\n" + model::digest(ctx.registry.at(id)).text + "\n";
  }
  std::string instruction = mode == SelectMode::single
                                ? "Choose the single calculator that best fits this patient."
                                : "Choose every calculator that is eligible and useful for this patient, or none.";
  if (!focus.empty()) instruction = "The calculator must quantify this risk: " + focus + "\n" + instruction;
  auto first = ctx.templates.get("select").request({{"note", note}, {"candidates", cards}, {"instruction", instruction}});
  auto reply = ctx.gateway.chat(first);
  r.rationale = reply.content;

  std::vector<std::string> dropped;
  auto picked = parse_selection(reply.content, ids, dropped);
  bool empty = !picked || picked->empty();

  if (mode == SelectMode::single && empty) {
    auto repair = first;
    repair.messages.push_back(reply);
    auto next = ctx.templates.get("select.repair").request({{"ids", util::join(ids, ", ")}});
    repair.messages.push_back(next.messages.back());
    repair.purpose = next.purpose;
    auto second = ctx.gateway.chat(repair);
    r.rationale += "\n\n" + second.content;
    picked = parse_selection(second.content, ids, dropped);
    empty = !picked || picked->empty();
  }
  for (const auto& d : dropped) r.warnings.push_back("dropped " + d + ": not among the retrieved candidates");

  if (!empty) {
    r.selected = *picked;
    if (mode == SelectMode::single) r.selected.resize(1);
  } else if (mode == SelectMode::single) {
    r.selected = {r.candidates.front().id};
    r.fallback = true;
    r.warnings.push_back("no usable selection; fell back to the top retrieval hit " + r.selected.front());
  }
  return r;
}

}  // namespace

SelectionResult select_tools(const std::string& patient_ref, const std::string& note, const AgentContext& ctx,
                             SelectMode mode) {
  return select(patient_ref, note, note, "", ctx, mode);
}

SelectionResult select_tools_for_risk(const std::string& patient_ref, const std::string& note, const std::string& risk,
                                      const AgentContext& ctx, SelectMode mode) {
  return select(patient_ref, note, risk, risk, ctx, mode);
}

PatientResult run_patient(const std::string& patient_ref, const std::string& note, const AgentContext& ctx,
                          SelectMode mode) {
  PatientResult out;
  out.selection = select_tools(patient_ref, note, ctx, mode);
  const auto& chosen = out.selection.selected;

  struct Slot {
    std::optional<AgentSession> session;
    std::optional<RiskSummary> summary;
    std::optional<CalcFailure> failure;
  };
  std::vector<Slot> slots(chosen.size());
  util::parallel_for(chosen.size(), ctx.gateway.in_flight_limit(), [&](std::size_t i) {
    const auto& id = chosen[i];
    try {
      auto session = run_computation(note, ctx.registry.at(id), ctx.gateway, ctx.templates, ctx.max_turns);
      if (session.status == SessionStatus::summarized) {
        slots[i].summary = summarize(session);
      } else {
        std::string reason(to_string(session.status));
        if (!session.error.empty()) reason += ": " + session.error;
        slots[i].failure = CalcFailure{id, reason};
      }
      slots[i].session = std::move(session);
    } catch (const std::invalid_argument& e) {
      slots[i].failure = CalcFailure{id, e.what()};
    } catch (const lang::LangError& e) {
      slots[i].failure = CalcFailure{id, e.what()};
    }
  });
  for (auto& s : slots) {
    if (s.session) out.sessions.push_back(std::move(*s.session));
    if (s.summary) out.summaries.push_back(std::move(*s.summary));
    if (s.failure) out.failures.push_back(std::move(*s.failure));
  }
  return out;
}

}  // namespace riskagent::agent
