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

#include <array>
#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "riskagent/agent/agent.hpp"

namespace riskagent::cohort {

class CohortError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct NoteRecord {
  std::string patient_id;
  std::string note_text;
  nlohmann::json metadata = nlohmann::json::object();

  nlohmann::json to_json() const;
  static NoteRecord from_json(const nlohmann::json& j);
};

/// JSONL of {patient_id, note_text, ...}; other fields land in metadata.
/// Duplicate ids and empty notes are errors.
std::vector<NoteRecord> load_notes(const std::filesystem::path& path);

inline constexpr std::size_t kMaxRisks = 20;

struct RiskDescription {
  std::string patient_id;
  std::string text;
};

struct RiskList {
  std::vector<RiskDescription> risks;
  std::vector<std::string> flags;
};

/// Bulleted or numbered lines. More than kMaxRisks are truncated and an
/// empty list is flagged.
RiskList parse_risk_list(std::string_view reply, const std::string& patient_id);

RiskList generate_risks(const NoteRecord& note, llm::Gateway& gateway, const llm::TemplateSet& templates);

/// Single-select tool choice with the risk text as the retrieval query.
agent::SelectionResult select_for_risk(const NoteRecord& note, const RiskDescription& risk,
                                       const agent::AgentContext& ctx);

struct Scores {
  int specificity = 0;
  int urgency = 0;
  int severity = 0;
  int absence = 0;

  nlohmann::json to_json() const;
  static Scores from_json(const nlohmann::json& j);
  bool operator==(const Scores&) const = default;
};

inline constexpr std::array<std::string_view, 4> kScoreNames{"specificity", "urgency", "severity", "absence"};

struct ScoreOutcome {
  std::optional<Scores> scores;  // absent when the reply never parsed
  std::vector<std::string> warnings;
};

/// Needs all four "name=<n>" fields. Values outside 0-100 are clamped and
/// reported in `warnings`.
std::optional<Scores> parse_scores(std::string_view reply, std::vector<std::string>& warnings, std::string& error);

ScoreOutcome score_result(const NoteRecord& note, const model::Calculator& calc, const agent::RiskSummary& summary,
                          llm::Gateway& gateway, const llm::TemplateSet& templates);

enum class RiskType { mortality, cardiac, stroke, respiratory, bleeding, infection, other };

std::string_view to_string(RiskType t);
RiskType risk_type_from_string(std::string_view s);

/// Keyword buckets checked in order over a calculator's title and purpose.
class RiskTypeRules {
 public:
  /// The bundled keyword table.
  static const RiskTypeRules& builtin();
  /// {"order": [...], "keywords": {bucket: [phrase, ...]}}
  static RiskTypeRules from_json(const nlohmann::json& j);

  RiskType classify(const model::Calculator& calc) const;
  RiskType classify(std::string_view text) const;

 private:
  std::vector<std::pair<RiskType, std::vector<std::vector<std::string>>>> buckets_;
};

inline RiskType classify_risk_type(const model::Calculator& calc) { return RiskTypeRules::builtin().classify(calc); }

}  // namespace riskagent::cohort
