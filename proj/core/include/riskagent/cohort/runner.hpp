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

#include <cstddef>
#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "riskagent/cohort/report.hpp"

namespace riskagent::cohort {

struct RiskChoice {
  std::string risk;
  std::string calculator_id;  // empty when nothing was selected
  bool fallback = false;
};

/// Everything recorded for one patient; also the checkpoint line format.
struct PatientOutcome {
  std::string patient_id;
  std::vector<RiskChoice> choices;
  std::vector<std::string> calculators;  // distinct selections, sorted
  std::vector<RiskResult> results;
  std::vector<agent::CalcFailure> failures;
  std::vector<std::string> flags;
  // Set when a gateway error cut a session short; such outcomes are not checkpointed.
  bool interrupted = false;

  nlohmann::json to_json() const;
  static PatientOutcome from_json(const nlohmann::json& j);
};

struct CohortConfig {
  /// One line per finished patient. Empty disables checkpointing.
  std::filesystem::path checkpoint;
  bool resume = false;
  std::size_t concurrency = 4;
};

struct CohortRun {
  std::vector<PatientOutcome> patients;  // sorted by patient_id
  std::vector<RiskResult> results;       // sorted by patient, then calculator
  CohortReport report;
};

/// Risk list, per-risk selection, computation, scoring and risk typing for
/// each note. Gateway failures outside a computation session abort the run;
/// finished patients stay in the checkpoint.
CohortRun run_cohort(const std::vector<NoteRecord>& notes, const agent::AgentContext& ctx, const CohortConfig& config,
                     const RiskTypeRules& rules = RiskTypeRules::builtin());

/// results.jsonl, patients.jsonl, report.json and the three CSV exports.
void write_outputs(const CohortRun& run, const std::filesystem::path& dir);

}  // namespace riskagent::cohort
