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

#include "riskagent/cohort/steps.hpp"

#include <algorithm>
#include <cmath>
#include <regex>
#include <set>

#include "riskagent/llm/conversation.hpp"
#include "riskagent/util/jsonl.hpp"
#include "riskagent/util/resources.hpp"
#include "riskagent/util/strings.hpp"

namespace riskagent::cohort {

nlohmann::json NoteRecord::to_json() const {
  nlohmann::json j = metadata.is_object() ? metadata : nlohmann::json::object();
  j["patient_id"] = patient_id;
  j["note_text"] = note_text;
  return j;
}

NoteRecord NoteRecord::from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw CohortError("note record is not a JSON object");
  NoteRecord n;
  if (!j.contains("patient_id") || !j["patient_id"].is_string() || j["patient_id"].get<std::string>().empty())
    throw CohortError("note record lacks a patient_id");
  n.patient_id = j["patient_id"].get<std::string>();
  if (!j.contains("note_text") || !j["note_text"].is_string() || util::trim(j["note_text"].get<std::string>()).empty())
    throw CohortError("patient " + n.patient_id + ": note_text must be a non-empty string");
  n.note_text = j["note_text"].get<std::string>();
  for (const auto& [k, v] : j.items())
    if (k != "patient_id" && k != "note_text") n.metadata[k] = v;
  return n;
}

std::vector<NoteRecord> load_notes(const std::filesystem::path& path) {
  std::vector<NoteRecord> out;
  std::set<std::string> ids;
  for (const auto& j : util::read_jsonl(path)) {
    auto n = NoteRecord::from_json(j);
    if (!ids.insert(n.patient_id).second) throw CohortError("duplicate patient_id " + n.patient_id);
    out.push_back(std::move(n));
  }
  return out;
}

RiskList parse_risk_list(std::string_view reply, const std::string& patient_id) {
  static const std::regex bullet(R"(^\s*(?:-|\*|•|\d+[.)])\s+(.*\S)\s*$)");
  RiskList out;
  std::size_t found = 0;
  for (const auto& line : util::split_lines(reply)) {
    std::smatch m;
    if (!std::regex_match(line, m, bullet)) continue;
    ++found;
    if (out.risks.size() < kMaxRisks) out.risks.push_back({patient_id, m[1].str()});
  }
  if (found > kMaxRisks)
    out.flags.push_back("risk list truncated from " + std::to_string(found) + " to " + std::to_string(kMaxRisks));
  if (out.risks.empty()) out.flags.push_back("no risks listed");
  return out;
}

RiskList generate_risks(const NoteRecord& note, llm::Gateway& gateway, const llm::TemplateSet& templates) {
  auto reply = gateway.chat(templates.get("risk_list").request({{"note", note.note_text}}));
  return parse_risk_list(reply.content, note.patient_id);
}

agent::SelectionResult select_for_risk(const NoteRecord& note, const RiskDescription& risk,
                                       const agent::AgentContext& ctx) {
  return agent::select_tools_for_risk(note.patient_id, note.note_text, risk.text, ctx, agent::SelectMode::single);
}

nlohmann::json Scores::to_json() const {
  return {{"specificity", specificity}, {"urgency", urgency}, {"severity", severity}, {"absence", absence}};
}

Scores Scores::from_json(const nlohmann::json& j) {
  return {j.at("specificity").get<int>(), j.at("urgency").get<int>(), j.at("severity").get<int>(),
          j.at("absence").get<int>()};
}

std::optional<Scores> parse_scores(std::string_view reply, std::vector<std::string>& warnings, std::string& error) {
  static const std::regex field(R"((specificity|urgency|severity|absence)\s*[=:]\s*(-?\d+(?:\.\d+)?))", std::regex::icase);
  std::string text(reply);
  std::map<std::string, double> got;
  for (std::sregex_iterator it(text.begin(), text.end(), field), end; it != end; ++it)
    got.emplace(util::to_lower((*it)[1].str()), std::stod((*it)[2].str()));
  std::vector<std::string> missing;
  for (auto name : kScoreNames)
    if (!got.count(std::string(name))) missing.emplace_back(name);
  if (!missing.empty()) {
    error = "missing " + util::join(missing, ", ");
    return std::nullopt;
  }
  std::vector<std::string> local;
  auto take = [&](const char* name) {
    double v = got.at(name);
    double c = std::clamp(std::round(v), 0.0, 100.0);
    if (c != std::round(v)) local.push_back(std::string(name) + " " + util::format_double(v) + " clamped to " + util::format_double(c));
    return static_cast<int>(c);
  };
  Scores s{take("specificity"), take("urgency"), take("severity"), take("absence")};
  warnings.insert(warnings.end(), local.begin(), local.end());
  return s;
}

ScoreOutcome score_result(const NoteRecord& note, const model::Calculator& calc, const agent::RiskSummary& summary,
                          llm::Gateway& gateway, const llm::TemplateSet& templates) {
  std::string result = summary.narrative;
  for (const auto& o : summary.outputs) result += "\n" + o.render();
  auto first = templates.get("cohort_score")
                   .request({{"note", note.note_text}, {"calculator", calc.id + " (" + calc.title + ")"}, {"result", result}});
  ScoreOutcome out;
  auto r = llm::ask_with_repair<Scores>(
      gateway, first, templates.get("cohort_score.repair"),
      [&](const std::string& reply, std::string& err) { return parse_scores(reply, out.warnings, err); });
  out.scores = r.value;
  if (!out.scores) out.warnings.push_back("scores unreadable after one reprompt: " + r.error);
  return out;
}

std::string_view to_string(RiskType t) {
  switch (t) {
    case RiskType::mortality: return "mortality";
    case RiskType::cardiac: return "cardiac";
    case RiskType::stroke: return "stroke";
    case RiskType::respiratory: return "respiratory";
    case RiskType::bleeding: return "bleeding";
    case RiskType::infection: return "infection";
    case RiskType::other: return "other";
  }
  return "other";
}

RiskType risk_type_from_string(std::string_view s) {
  for (auto t : {RiskType::mortality, RiskType::cardiac, RiskType::stroke, RiskType::respiratory, RiskType::bleeding,
                 RiskType::infection, RiskType::other})
    if (to_string(t) == s) return t;
  throw std::invalid_argument("unknown risk type '" + std::string(s) + "'");
}

RiskTypeRules RiskTypeRules::from_json(const nlohmann::json& j) {
  RiskTypeRules r;
  for (const auto& name : j.at("order")) {
    auto type = risk_type_from_string(name.get<std::string>());
    std::vector<std::vector<std::string>> phrases;
    for (const auto& kw : j.at("keywords").at(name.get<std::string>())) {
      auto w = util::words(kw.get<std::string>());
      if (!w.empty()) phrases.push_back(std::move(w));
    }
    r.buckets_.emplace_back(type, std::move(phrases));
  }
  return r;
}

const RiskTypeRules& RiskTypeRules::builtin() {
  static const RiskTypeRules rules = [] {
    const auto& res = resources::embedded();
    auto it = res.find("risk_keywords.json");
    if (it == res.end()) throw std::logic_error("risk keyword table is not embedded");
    return from_json(nlohmann::json::parse(it->second));
  }();
  return rules;
}

RiskType RiskTypeRules::classify(std::string_view text) const {
  auto w = util::words(text);
  auto has = [&](const std::vector<std::string>& phrase) {
    if (phrase.size() > w.size()) return false;
    for (std::size_t i = 0; i + phrase.size() <= w.size(); ++i) {
      bool all = true;
      for (std::size_t k = 0; k < phrase.size() && all; ++k) all = util::word_matches(w[i + k], phrase[k]);
      if (all) return true;
    }
    return false;
  };
  for (const auto& [type, phrases] : buckets_)
    for (const auto& p : phrases)
      if (has(p)) return type;
  return RiskType::other;
}

RiskType RiskTypeRules::classify(const model::Calculator& calc) const { return classify(calc.title + "\n" + calc.purpose); }

}  // namespace riskagent::cohort
