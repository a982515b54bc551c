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
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "riskagent/agent/calc_block.hpp"
#include "riskagent/lang/evaluator.hpp"
#include "riskagent/llm/gateway.hpp"
#include "riskagent/llm/templates.hpp"
#include "riskagent/model/calculator.hpp"

namespace riskagent::agent {

inline constexpr std::size_t kDefaultMaxTurns = 8;

enum class SessionStatus { summarized, failed_max_turns, failed_error };

std::string_view to_string(SessionStatus s);
SessionStatus session_status_from_string(std::string_view s);

/// One assistant message and the interpreter's reply to it.
struct Turn {
  std::string message;
  std::optional<CalcInvocation> invocation;
  /// Absent only for a final "Summary:" message.
  std::optional<std::string> observation;
  /// Set when the invocation evaluated successfully.
  std::optional<lang::EvalOutcome> outcome;

  nlohmann::json to_json() const;
  static Turn from_json(const nlohmann::json& j);
};

struct AgentSession {
  std::string patient_note;
  std::string calculator_id;
  std::vector<Turn> turns;
  SessionStatus status = SessionStatus::failed_error;
  std::string summary;  // text after "Summary:"
  std::string error;    // failed_error only

  /// Header line followed by one line per turn.
  std::string to_jsonl() const;
  void save(const std::filesystem::path& path) const;
  static AgentSession load(const std::filesystem::path& path);
};

class SummaryError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RiskSummary {
  std::string calculator_id;
  std::vector<lang::OutputResult> outputs;
  std::string narrative;
  std::vector<std::string> missing_params;
  bool ranged = false;
  /// Set when no invocation in the session succeeded; outputs are empty.
  std::optional<std::string> extraction_error;

  nlohmann::json to_json() const;
  static RiskSummary from_json(const nlohmann::json& j);
};

/// True when the message opens with "Summary:" after leading whitespace.
bool is_summary(std::string_view message);

/// The calculator card shown in the computation prompt.
std::string describe_for_computation(const model::Calculator& calc);

/// Runs one invocation against `calc` and renders the observation. Never
/// throws for bad bindings or domain errors; those become the observation.
std::string observe(const model::Calculator& calc, const lang::Program& program, const CalcInvocation& inv,
                    std::optional<lang::EvalOutcome>& outcome);

/// Interpreter-in-the-loop session. Throws std::invalid_argument when the
/// calculator is not verified or its program does not parse.
AgentSession run_computation(const std::string& note, const model::Calculator& calc, llm::Gateway& gateway,
                             const llm::TemplateSet& templates, std::size_t max_turns = kDefaultMaxTurns);

/// Throws SummaryError unless the session is summarized.
RiskSummary summarize(const AgentSession& session);

}  // namespace riskagent::agent
