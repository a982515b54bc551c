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

#pragma once

#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "riskagent/llm/gateway.hpp"
#include "riskagent/llm/templates.hpp"
#include "riskagent/model/calculator.hpp"
#include "riskagent/model/validate.hpp"

namespace riskagent::curation {

struct ScreenDecision {
  std::string pmid;
  bool verdict = false;
  std::string rationale;
};

struct DraftResult {
  std::vector<model::Calculator> drafts;
  std::vector<std::string> errors;  // from the last attempt when drafts is empty
  bool repaired = false;
};

struct VerifyDecision {
  std::string calc_id;
  bool verdict = false;
  std::string rationale;             // the model's reply, when asked
  std::vector<std::string> reasons;  // failed checks or questions
  model::ValidationReport mechanical_report;
};

struct ClassifyResult {
  std::set<model::OrganSystem> systems;
  std::vector<std::string> warnings;
};

/// YES/NO as the first word of a reply, ignoring case and punctuation.
std::optional<bool> parse_yes_no(std::string_view reply);

/// Verdicts for numbered checking questions: lines such as "2. NO - ..." or
/// a reply made only of yes/no words. Requires exactly `count` answers.
std::optional<std::vector<bool>> parse_answers(std::string_view reply, std::size_t count);

/// The JSON payload of a reply: a ```json fence if present, else the text
/// from the first '[' or '{' to the last matching bracket.
std::optional<std::string> extract_json(std::string_view reply);

/// Organ-system codes mentioned in a reply, in the order given. Unknown
/// codes of the form A<digits> are reported in `unknown`.
std::set<model::OrganSystem> parse_organ_systems(std::string_view reply, std::vector<std::string>& unknown);

inline const std::vector<std::string>& verification_questions() {
  static const std::vector<std::string> q{
      "faithfulness to the abstract",
      "completeness of the computing logic",
      "completeness of the interpretation",
  };
  return q;
}

ScreenDecision screen(const model::AbstractRecord& record, llm::Gateway& gateway, const llm::TemplateSet& templates);

/// Drafts carry status draft, ids "pmid-<PMID>" (suffixed -1, -2, ... when
/// the article yields several) and empty organ systems.
DraftResult draft(const model::AbstractRecord& record, llm::Gateway& gateway, const llm::TemplateSet& templates);

/// Validation first; the model is consulted only when every mechanical
/// check passes.
VerifyDecision verify(const model::Calculator& calc, const model::AbstractRecord& record, llm::Gateway& gateway,
                      const llm::TemplateSet& templates);

ClassifyResult classify_systems(const model::Calculator& calc, llm::Gateway& gateway,
                                const llm::TemplateSet& templates);

}  // namespace riskagent::curation
