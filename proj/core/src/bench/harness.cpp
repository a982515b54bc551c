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

#include "riskagent/bench/harness.hpp"

#include <regex>

#include "riskagent/util/http.hpp"
#include "riskagent/util/parallel.hpp"
#include "riskagent/util/strings.hpp"

namespace riskagent::bench {

std::string_view to_string(Method m) {
  switch (m) {
    case Method::agent: return "agent";
    case Method::cot: return "cot";
    case Method::rag: return "rag";
    case Method::name: return "name";
  }
  return "agent";
}

std::string_view to_string(Setting s) { return s == Setting::riskqa ? "riskqa" : "riskqa_star"; }

Method method_from_string(std::string_view s) {
  if (s == "agent") return Method::agent;
  if (s == "cot") return Method::cot;
  if (s == "rag") return Method::rag;
  if (s == "name") return Method::name;
  throw std::invalid_argument("unknown method '" + std::string(s) + "'");
}

Setting setting_from_string(std::string_view s) {
  if (s == "riskqa") return Setting::riskqa;
  if (s == "riskqa_star" || s == "riskqa-star") return Setting::riskqa_star;
  throw std::invalid_argument("unknown setting '" + std::string(s) + "'");
}

void check_combination(Method m, Setting s) {
  if ((m == Method::rag || m == Method::name) && s != Setting::riskqa_star)
    throw std::invalid_argument(std::string(to_string(m)) + " needs the oracle calculator; use setting riskqa_star");
}

nlohmann::json MethodRun::to_json() const {
  nlohmann::json j{{"item_id", item_id},
                   {"method", std::string(to_string(method))},
                   {"setting", std::string(to_string(setting))},
                   {"predicted", predicted ? nlohmann::json(*predicted) : nlohmann::json(nullptr)},
                   {"selected_calculator",
                    selected_calculator ? nlohmann::json(*selected_calculator) : nlohmann::json(nullptr)},
                   {"retrieval_top1", retrieval_top1 ? nlohmann::json(*retrieval_top1) : nlohmann::json(nullptr)},
                   {"fallback", fallback},
                   {"failed", failed},
                   {"final_reply", final_reply},
                   {"detail", detail}};
  if (!error.empty()) j["error"] = error;
  return j;
}

MethodRun MethodRun::from_json(const nlohmann::json& j) {
  MethodRun r;
  r.item_id = j.at("item_id").get<std::string>();
  r.method = method_from_string(j.at("method").get<std::string>());
  r.setting = setting_from_string(j.at("setting").get<std::string>());
  auto opt = [&](const char* k) -> std::optional<std::string> {
    if (!j.contains(k) || j[k].is_null()) return std::nullopt;
    return j[k].get<std::string>();
  };
  r.predicted = opt("predicted");
  r.selected_calculator = opt("selected_calculator");
  r.retrieval_top1 = opt("retrieval_top1");
  r.fallback = j.value("fallback", false);
  r.failed = j.value("failed", false);
  r.error = j.value("error", "");
  r.final_reply = j.value("final_reply", "");
  r.detail = j.value("detail", nlohmann::json::object());
  return r;
}

std::optional<std::string> extract_answer(std::string_view reply, const std::vector<std::string>& labels) {
  auto known = [&](const std::string& s) -> std::optional<std::string> {
    for (const auto& l : labels)
      if (l == s) return l;
    return std::nullopt;
  };
  std::string text(reply);
  static const std::regex pattern(R"((?:answer\s+is|answer\s*:)\s*\**\s*\(?\s*([A-Za-z0-9]+)\s*\)?)", std::regex::icase);
  std::optional<std::string> found;
  for (std::sregex_iterator it(text.begin(), text.end(), pattern), end; it != end; ++it)
    if (auto l = known((*it)[1].str())) found = l;
  if (found) return found;

  static const std::regex bare(R"(^\s*\(?\s*([A-Za-z0-9]+)\s*[).:]?\s*$)");
  std::smatch m;
  if (std::regex_match(text, m, bare)) return known(m[1].str());
  return std::nullopt;
}

namespace {

std::string summary_text(const model::Calculator& calc, const agent::RiskSummary& s) {
  std::string out = "calculator: " + calc.id + " (" + calc.title + ")\n" + s.narrative + "\n";
  for (const auto& o : s.outputs) out += o.render() + "\n";
  if (!s.missing_params.empty()) out += "missing or ranged parameters: " + util::join(s.missing_params, ", ") + "\n";
  return out;
}

void ask_for_label(MethodRun& run, const RiskQAItem& item, const llm::ChatRequest& request,
                   const agent::AgentContext& ctx) {
  auto reply = ctx.gateway.chat(request);
  run.final_reply = reply.content;
  run.predicted = extract_answer(reply.content, item.labels());
}

void run_agent(MethodRun& run, const RiskQAItem& item, const agent::AgentContext& ctx) {
  if (run.setting == Setting::riskqa) {
    auto sel = agent::select_tools(item.id, item.vignette, ctx, agent::SelectMode::single);
    run.detail["selection"] = sel.to_json();
    run.fallback = sel.fallback;
    if (!sel.candidates.empty()) run.retrieval_top1 = sel.candidates.front().id;
    if (sel.selected.empty()) return;
    run.selected_calculator = sel.selected.front();
  } else {
    run.selected_calculator = item.oracle_calculator_id;
  }
  const auto& calc = ctx.registry.at(*run.selected_calculator);
  auto session = agent::run_computation(item.vignette, calc, ctx.gateway, ctx.templates, ctx.max_turns);
  run.detail["session"] = {{"status", std::string(agent::to_string(session.status))}, {"turns", session.turns.size()}};
  if (session.status == agent::SessionStatus::failed_error) {
    run.failed = true;
    run.error = session.error;
    return;
  }
  if (session.status != agent::SessionStatus::summarized) return;
  auto summary = agent::summarize(session);
  run.detail["summary"] = summary.to_json();
  auto req = ctx.templates.get("answer_extract")
                 .request({{"question", item.vignette},
                           {"options", item.render_options()},
                           {"summary", summary_text(calc, summary)}});
  ask_for_label(run, item, req, ctx);
}

}  // namespace

MethodRun run_method(const RiskQAItem& item, Method method, Setting setting, const agent::AgentContext& ctx) {
  check_combination(method, setting);
  MethodRun run;
  run.item_id = item.id;
  run.method = method;
  run.setting = setting;
  try {
    switch (method) {
      case Method::agent:
        run_agent(run, item, ctx);
        break;
      case Method::cot:
        ask_for_label(run, item,
                      ctx.templates.get("cot").request({{"question", item.vignette}, {"options", item.render_options()}}),
                      ctx);
        break;
      case Method::rag: {
        const auto& calc = ctx.registry.at(item.oracle_calculator_id);
        run.selected_calculator = calc.id;
        const auto* abs = ctx.registry.abstract_for(calc.pmid);
        if (!abs) throw std::runtime_error("no source abstract for calculator " + calc.id);
        ask_for_label(run, item,
                      ctx.templates.get("rag").request({{"question", item.vignette},
                                                        {"options", item.render_options()},
                                                        {"abstract", abs->title + "\n" + abs->abstract}}),
                      ctx);
        break;
      }
      case Method::name: {
        const auto& calc = ctx.registry.at(item.oracle_calculator_id);
        run.selected_calculator = calc.id;
        ask_for_label(run, item,
                      ctx.templates.get("name").request(
                          {{"question", item.vignette}, {"options", item.render_options()}, {"title", calc.title}}),
                      ctx);
        break;
      }
    }
  } catch (const util::NetworkDenied&) {
    throw;
  } catch (const llm::LlmError& e) {
    run.failed = true;
    run.error = e.what();
    run.predicted.reset();
  } catch (const std::runtime_error& e) {
    run.failed = true;
    run.error = e.what();
    run.predicted.reset();
  }
  return run;
}

std::vector<MethodRun> run_benchmark(const std::vector<RiskQAItem>& items, Method method, Setting setting,
                                     const agent::AgentContext& ctx) {
  check_combination(method, setting);
  std::vector<MethodRun> runs(items.size());
  util::parallel_for(items.size(), ctx.gateway.in_flight_limit(),
                     [&](std::size_t i) { runs[i] = run_method(items[i], method, setting, ctx); });
  return runs;
}

}  // namespace riskagent::bench
