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


#include "riskagent/curation/stages.hpp"

#include <cctype>
#include <regex>

#include "riskagent/lang/parser.hpp"
#include "riskagent/llm/conversation.hpp"
#include "riskagent/util/resources.hpp"
#include "riskagent/util/strings.hpp"

namespace riskagent::curation {

namespace {

std::string first_word(std::string_view s) {
  std::size_t i = 0;
  while (i < s.size() && !std::isalpha(static_cast<unsigned char>(s[i]))) ++i;
  std::size_t j = i;
  while (j < s.size() && std::isalpha(static_cast<unsigned char>(s[j]))) ++j;
  return util::to_lower(s.substr(i, j - i));
}

std::string grammar_reference() {
  const auto& res = resources::embedded();
  auto it = res.find("calclang_quickref.txt");
  return it == res.end() ? std::string() : std::string(it->second);
}

std::string systems_list() {
  std::string s;
  for (auto sys : model::all_organ_systems())
    s += std::string(model::code(sys)) + " " + std::string(model::label(sys)) + "\n";
  return s;
}

std::optional<std::vector<model::Calculator>> parse_drafts(const std::string& reply, const model::AbstractRecord& record,
                                                           std::string& error) {
  auto payload = extract_json(reply);
  if (!payload) {
    error = "no JSON document found in the reply";
    return std::nullopt;
  }
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(*payload);
  } catch (const nlohmann::json::parse_error& e) {
    error = std::string("invalid JSON: ") + e.what();
    return std::nullopt;
  }
  if (j.is_object()) j = nlohmann::json::array({j});
  if (!j.is_array() || j.empty()) {
    error = "expected a non-empty array of calculator documents";
    return std::nullopt;
  }
  std::vector<std::string> errors;
  std::vector<model::Calculator> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    auto doc = j[i];
    std::string where = "calculator " + std::to_string(i + 1);
    if (!doc.is_object()) {
      errors.push_back(where + ": not a JSON object");
      continue;
    }
    doc["id"] = "pmid-" + record.pmid + (j.size() > 1 ? "-" + std::to_string(i + 1) : "");
    doc["pmid"] = record.pmid;
    doc["status"] = "draft";
    doc["organ_systems"] = nlohmann::json::array();
    doc["citation_count"] = record.citation_count;
    try {
      auto calc = model::Calculator::from_json(doc);
      auto diags = lang::lint(calc.program_source);
      if (!diags.empty()) {
        errors.push_back(where + ": program_source: " + lang::format_diagnostics(diags));
        continue;
      }
      out.push_back(std::move(calc));
    } catch (const model::SchemaError& e) {
      errors.push_back(where + ": " + e.what());
    }
  }
  if (!errors.empty()) {
    error = util::join(errors, "\n");
    return std::nullopt;
  }
  return out;
}

}  // namespace

std::optional<bool> parse_yes_no(std::string_view reply) {
  auto w = first_word(reply);
  if (w == "yes") return true;
  if (w == "no") return false;
  return std::nullopt;
}

std::optional<std::vector<bool>> parse_answers(std::string_view reply, std::size_t count) {
  // Numbered lines first.
  static const std::regex numbered(R"(^\s*(?:Q\s*)?(\d+)\s*[.):]\s*(yes|no)\b)", std::regex::icase);
  std::vector<std::optional<bool>> by_number(count);
  bool any_numbered = false;
  for (const auto& line : util::split_lines(reply)) {
    std::smatch m;
    if (!std::regex_search(line, m, numbered)) continue;
    std::size_t n = std::stoul(m[1].str());
    if (n < 1 || n > count || by_number[n - 1]) return std::nullopt;
    by_number[n - 1] = util::to_lower(m[2].str()) == "yes";
    any_numbered = true;
  }
  if (any_numbered) {
    std::vector<bool> out;
    for (const auto& v : by_number) {
      if (!v) return std::nullopt;
      out.push_back(*v);
    }
    return out;
  }
  // Otherwise the reply must consist of yes/no words only.
  auto words = util::words(reply);
  if (words.size() != count) return std::nullopt;
  std::vector<bool> out;
  for (const auto& w : words) {
    if (w != "yes" && w != "no") return std::nullopt;
    out.push_back(w == "yes");
  }
  return out;
}

std::optional<std::string> extract_json(std::string_view reply) {
  auto fence = reply.find("```json");
  if (fence != std::string_view::npos) {
    auto start = reply.find('\n', fence);
    auto end = reply.find("```", start == std::string_view::npos ? fence + 7 : start);
    if (start != std::string_view::npos && end != std::string_view::npos)
      return std::string(util::trim(reply.substr(start + 1, end - start - 1)));
  }
  auto open = reply.find_first_of("[{");
  if (open == std::string_view::npos) return std::nullopt;
  char close = reply[open] == '[' ? ']' : '}';
  auto last = reply.rfind(close);
  if (last == std::string_view::npos || last < open) return std::nullopt;
  return std::string(reply.substr(open, last - open + 1));
}

std::set<model::OrganSystem> parse_organ_systems(std::string_view reply, std::vector<std::string>& unknown) {
  static const std::regex code(R"(\bA\d{2}\b)");
  std::set<model::OrganSystem> out;
  std::string text(reply);
  for (auto it = std::sregex_iterator(text.begin(), text.end(), code); it != std::sregex_iterator(); ++it) {
    auto c = it->str();
    if (auto s = model::organ_system_from_code(c)) out.insert(*s);
    else unknown.push_back(c);
  }
  return out;
}

ScreenDecision screen(const model::AbstractRecord& record, llm::Gateway& gateway, const llm::TemplateSet& templates) {
  auto req = templates.get("screen").request({{"title", record.title}, {"abstract", record.abstract}});
  std::function<std::optional<bool>(const std::string&, std::string&)> parse = [](const std::string& r, std::string& err) {
    auto v = parse_yes_no(r);
    if (!v) err = "unparseable";
    return v;
  };
  auto out = llm::ask_with_repair<bool>(gateway, req, templates.get("screen.repair"), parse);
  ScreenDecision d{record.pmid, false, "unparseable"};
  if (out.value) {
    d.verdict = *out.value;
    d.rationale = util::trim(out.replies.back());
  }
  return d;
}

DraftResult draft(const model::AbstractRecord& record, llm::Gateway& gateway, const llm::TemplateSet& templates) {
  auto req = templates.get("draft").request({{"pmid", record.pmid},
                                             {"title", record.title},
                                             {"abstract", record.abstract},
                                             {"grammar", grammar_reference()}});
  std::function<std::optional<std::vector<model::Calculator>>(const std::string&, std::string&)> parse =
      [&](const std::string& r, std::string& err) { return parse_drafts(r, record, err); };
  auto out = llm::ask_with_repair<std::vector<model::Calculator>>(
      gateway, req, templates.get("draft.repair"), parse,
      [](const std::string& err) { return llm::Bindings{{"errors", err}}; });
  DraftResult res;
  res.repaired = out.repaired;
  if (out.value) res.drafts = std::move(*out.value);
  else res.errors = util::split_lines(out.error);
  return res;
}

VerifyDecision verify(const model::Calculator& calc, const model::AbstractRecord& record, llm::Gateway& gateway,
                      const llm::TemplateSet& templates) {
  VerifyDecision d;
  d.calc_id = calc.id;
  d.mechanical_report = model::validate(calc);
  if (!d.mechanical_report.all_passed()) {
    d.reasons = d.mechanical_report.failures();
    return d;
  }
  auto doc = calc.to_json();
  doc.erase("status");
  auto req = templates.get("verify").request(
      {{"title", record.title}, {"abstract", record.abstract}, {"calculator", doc.dump(2)}});
  const auto& questions = verification_questions();
  std::function<std::optional<std::vector<bool>>(const std::string&, std::string&)> parse =
      [&](const std::string& r, std::string& err) {
        auto v = parse_answers(r, questions.size());
        if (!v) err = "unparseable";
        return v;
      };
  auto out = llm::ask_with_repair<std::vector<bool>>(gateway, req, templates.get("verify.repair"), parse);
  d.rationale = util::trim(out.replies.back());
  if (!out.value) {
    d.reasons.push_back("unparseable verification reply");
    return d;
  }
  for (std::size_t i = 0; i < questions.size(); ++i)
    if (!(*out.value)[i]) d.reasons.push_back("question " + std::to_string(i + 1) + ": " + questions[i]);
  d.verdict = d.reasons.empty();
  return d;
}

ClassifyResult classify_systems(const model::Calculator& calc, llm::Gateway& gateway,
                                const llm::TemplateSet& templates) {
  ClassifyResult res;
  auto req = templates.get("classify").request({{"title", calc.title},
                                                {"purpose", calc.purpose},
                                                {"eligibility", calc.eligibility},
                                                {"systems", systems_list()}});
  std::function<std::optional<std::set<model::OrganSystem>>(const std::string&, std::string&)> parse =
      [&](const std::string& r, std::string& err) -> std::optional<std::set<model::OrganSystem>> {
    std::vector<std::string> unknown;
    auto s = parse_organ_systems(r, unknown);
    for (const auto& u : unknown) res.warnings.push_back("unknown organ system code " + u + " dropped");
    if (s.empty()) {
      err = "no organ system code";
      return std::nullopt;
    }
    return s;
  };
  auto out = llm::ask_with_repair<std::set<model::OrganSystem>>(
      gateway, req, templates.get("classify.repair"), parse,
      [](const std::string&) { return llm::Bindings{{"systems", systems_list()}}; });
  if (out.value) res.systems = std::move(*out.value);
  else res.warnings.push_back("no organ system assigned");
  return res;
}

}  // namespace riskagent::curation
