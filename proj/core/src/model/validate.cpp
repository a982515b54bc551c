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

#include "riskagent/model/validate.hpp"

#include <algorithm>
#include <map>

#include "riskagent/lang/parser.hpp"
#include "riskagent/util/strings.hpp"

namespace riskagent::model {

bool ValidationReport::all_passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
}

const CheckResult* ValidationReport::find(std::string_view name) const {
  for (const auto& c : checks)
    if (c.name == name) return &c;
  return nullptr;
}

std::vector<std::string> ValidationReport::failures() const {
  std::vector<std::string> out;
  for (const auto& c : checks)
    if (!c.passed) out.push_back(c.name + ": " + c.detail);
  return out;
}

nlohmann::json ValidationReport::to_json() const {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& c : checks) arr.push_back({{"check", c.name}, {"passed", c.passed}, {"detail", c.detail}});
  return {{"all_passed", all_passed()}, {"checks", arr}};
}

namespace {

CheckResult check_metadata(const Calculator& c) {
  std::vector<std::string> empty;
  if (c.id.empty()) empty.push_back("id");
  if (c.pmid.empty()) empty.push_back("pmid");
  if (util::trim(c.title).empty()) empty.push_back("title");
  if (util::trim(c.purpose).empty()) empty.push_back("purpose");
  if (util::trim(c.eligibility).empty()) empty.push_back("eligibility");
  if (empty.empty()) return {"metadata", true, ""};
  return {"metadata", false, "empty field(s): " + util::join(empty, ", ")};
}

CheckResult check_overlap(const Calculator& c) {
  const auto& bands = c.interpretation;
  for (std::size_t i = 0; i < bands.size(); ++i) {
    if (bands[i].label.empty()) return {"band_overlap", false, "band " + std::to_string(i + 1) + " has no label"};
    for (std::size_t k = i + 1; k < bands.size(); ++k) {
      if (bands[i].output == bands[k].output && lang::bands_overlap(bands[i], bands[k]))
        return {"band_overlap", false,
                "bands '" + bands[i].label + "' and '" + bands[k].label + "' of output '" + bands[i].output +
                    "' overlap"};
    }
  }
  return {"band_overlap", true, ""};
}

// Bands of an output without a declared range only need to be contiguous.
std::string contiguity_gap(std::vector<lang::InterpretationBand> bands) {
  std::sort(bands.begin(), bands.end(), [](const auto& a, const auto& b) { return a.lower < b.lower; });
  for (std::size_t i = 1; i < bands.size(); ++i) {
    const auto& prev = bands[i - 1];
    const auto& cur = bands[i];
    if (cur.lower > prev.upper ||
        (cur.lower == prev.upper && !prev.upper_inclusive() && !cur.lower_inclusive()))
      return "no band covers " + util::format_double(prev.upper);
  }
  return {};
}

CheckResult check_coverage(const Calculator& c, const lang::Program& prog) {
  std::map<std::string, std::vector<lang::InterpretationBand>> by_output;
  for (const auto& b : c.interpretation) {
    if (!prog.find_output(b.output))
      return {"band_coverage", false, "band '" + b.label + "' refers to unknown output '" + b.output + "'"};
    by_output[b.output].push_back(b);
  }
  for (const auto& [name, bands] : by_output) {
    const auto* out = prog.find_output(name);
    std::string gap = out->range ? lang::coverage_gap(bands, out->range->min, out->range->max) : contiguity_gap(bands);
    if (!gap.empty()) return {"band_coverage", false, "output '" + name + "': " + gap};
  }
  return {"band_coverage", true, ""};
}

}  // namespace

ValidationReport validate(const Calculator& calc) {
  ValidationReport r;
  r.checks.push_back(check_metadata(calc));
  std::optional<lang::Program> prog;
  try {
    prog = lang::parse(calc.program_source);
    r.checks.push_back({"parse", true, ""});
  } catch (const lang::LangError& e) {
    r.checks.push_back({"parse", false, e.diagnostic().to_string()});
  }
  if (prog) {
    auto diags = lang::typecheck(*prog);
    r.checks.push_back({"typecheck", diags.empty(), lang::format_diagnostics(diags)});
  } else {
    r.checks.push_back({"typecheck", false, "skipped: program does not parse"});
  }
  r.checks.push_back(check_overlap(calc));
  if (prog) {
    r.checks.push_back(check_coverage(calc, *prog));
  } else {
    r.checks.push_back({"band_coverage", false, "skipped: program does not parse"});
  }
  return r;
}

ToolDigest digest(const Calculator& calc) {
  ToolDigest d;
  d.id = calc.id;
  std::string text = "id: " + calc.id + "\n";
  text += "title: " + calc.title + "\n";
  if (!util::trim(calc.purpose).empty()) text += "purpose: " + util::trim(calc.purpose) + "\n";
  if (!util::trim(calc.eligibility).empty()) text += "eligibility: " + util::trim(calc.eligibility) + "\n";
  try {
    auto prog = lang::parse(calc.program_source);
    text += "parameters:\n";
    for (const auto& p : prog.params) {
      std::string line = p.name + ": " + std::string(lang::to_string(p.kind));
      if (p.unit) line += " (" + *p.unit + ")";
      if (p.kind == lang::ParamKind::enumeration) line += " {" + util::join(p.labels, ", ") + "}";
      d.parameters.push_back(p.name);
      text += "  - " + line + "\n";
    }
  } catch (const lang::LangError&) {
    text += "parameters: unavailable (program does not parse)\n";
  }
  d.text = std::move(text);
  return d;
}

}  // namespace riskagent::model
