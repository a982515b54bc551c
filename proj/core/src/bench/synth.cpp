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

#include "riskagent/bench/synth.hpp"

#include <algorithm>
#include <cmath>

#include "riskagent/curation/stages.hpp"
#include "riskagent/lang/evaluator.hpp"
#include "riskagent/lang/parser.hpp"
#include "riskagent/util/strings.hpp"

namespace riskagent::bench {

lang::Binding sample_binding(const lang::Program& program, std::mt19937_64& rng) {
  lang::Binding b;
  for (const auto& p : program.params) {
    switch (p.kind) {
      case lang::ParamKind::boolean:
        b[p.name] = lang::BindingEntry::exact_bool(std::bernoulli_distribution(0.5)(rng));
        break;
      case lang::ParamKind::enumeration: {
        std::uniform_int_distribution<std::size_t> pick(0, p.labels.size() - 1);
        b[p.name] = lang::BindingEntry::exact_label(p.labels[pick(rng)]);
        break;
      }
      case lang::ParamKind::number: {
        double v = 0.0;
        if (p.domain && p.domain->is_finite_set()) {
          std::uniform_int_distribution<std::size_t> pick(0, p.domain->values.size() - 1);
          v = p.domain->values[pick(rng)];
        } else {
          double lo = p.domain ? p.domain->min : 0.0;
          double hi = p.domain ? p.domain->max : 100.0;
          if (!std::isfinite(lo)) lo = std::min(0.0, hi - 100.0);
          if (!std::isfinite(hi)) hi = lo + 100.0;
          v = std::round(std::uniform_real_distribution<double>(lo, hi)(rng));
          v = std::clamp(v, lo, hi);
        }
        b[p.name] = lang::BindingEntry::exact_number(v, p.unit);
        break;
      }
    }
  }
  return b;
}

namespace {

std::vector<std::string> distinct_labels(const std::vector<lang::InterpretationBand>& bands) {
  std::vector<std::string> out;
  for (const auto& b : bands)
    if (std::find(out.begin(), out.end(), b.label) == out.end()) out.push_back(b.label);
  return out;
}

}  // namespace

SynthResult synthesize(const model::Registry& registry, llm::Gateway& gateway, const llm::TemplateSet& templates,
                       const SynthOptions& options) {
  SynthResult out;
  std::mt19937_64 rng(options.seed);
  for (const auto* calc : registry.verified()) {
    auto program = lang::parse(calc->program_source);
    if (program.outputs.empty()) continue;
    const auto& output = program.outputs.front().name;
    auto labels = distinct_labels(lang::bands_for(calc->interpretation, output));
    if (labels.size() < kMinOptions || labels.size() > kMaxOptions) {
      out.warnings.push_back(calc->id + ": skipped, needs 2 to 10 interpretation labels");
      continue;
    }
    for (std::size_t n = 0; n < options.per_calculator; ++n) {
      std::string id = "synth-" + calc->id + "-" + std::to_string(n + 1);
      auto binding = sample_binding(program, rng);
      lang::EvalOutcome result;
      try {
        result = lang::eval_point(program, binding, calc->interpretation);
      } catch (const lang::EvalError& e) {
        out.warnings.push_back(id + ": " + e.what());
        continue;
      }
      const auto* res = result.find(output);
      if (!res || res->bands.size() != 1) {
        out.warnings.push_back(id + ": result falls in no single band");
        continue;
      }
      std::string expected = res->bands.front().label;
      std::string params;
      for (const auto& [name, entry] : binding) params += name + " = " + entry.render() + "\n";

      auto reply = gateway.chat(templates.get("synth").request({{"calculator", calc->title},
                                                                {"parameters", params},
                                                                {"result", res->render()},
                                                                {"labels", util::join(labels, ", ")}}));
      auto payload = curation::extract_json(reply.content);
      RiskQAItem item;
      try {
        if (!payload) throw DatasetError(id, "<reply>", "no JSON object in the reply");
        auto j = nlohmann::json::parse(*payload);
        if (!j.is_object()) throw DatasetError(id, "<reply>", "not a JSON object");
        j["id"] = id;
        j["oracle_calculator_id"] = calc->id;
        item = RiskQAItem::from_json(j);
      } catch (const nlohmann::json::exception& e) {
        out.warnings.push_back(id + ": " + e.what());
        continue;
      } catch (const DatasetError& e) {
        out.warnings.push_back(e.what());
        continue;
      }
      auto keyed = util::to_lower(item.option(item.answer_key)->text);
      if (keyed.find(util::to_lower(expected)) == std::string::npos) {
        out.warnings.push_back(id + ": keyed option does not name the computed label '" + expected + "'");
        continue;
      }
      out.items.push_back(std::move(item));
    }
  }
  return out;
}

}  // namespace riskagent::bench
