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
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "riskagent/agent/session.hpp"
#include "riskagent/llm/gateway.hpp"
#include "riskagent/llm/templates.hpp"
#include "riskagent/model/registry.hpp"
#include "riskagent/retrieval/embedding.hpp"
#include "riskagent/retrieval/index.hpp"

namespace riskagent::agent {

enum class SelectMode { single, multi };

std::string_view to_string(SelectMode m);
SelectMode select_mode_from_string(std::string_view s);

/// Shared, read-only state for agent runs. The registry and index are never
/// mutated; the embedder and gateway are thread-safe.
struct AgentContext {
  const model::Registry& registry;
  const retrieval::VectorIndex& index;
  retrieval::EmbeddingProvider& embedder;
  llm::Gateway& gateway;
  const llm::TemplateSet& templates;
  std::size_t top_k = retrieval::kDefaultTopK;
  std::size_t max_turns = kDefaultMaxTurns;
};

struct SelectionResult {
  std::string patient_ref;
  std::vector<retrieval::RetrievalHit> candidates;
  std::vector<std::string> selected;
  std::string rationale;
  std::vector<std::string> warnings;
  /// Single mode fell back to the top retrieval hit.
  bool fallback = false;

  nlohmann::json to_json() const;
};

/// Ids named on the last "Selected:" line. "none" gives an empty list;
/// nullopt means there was no such line. Names outside `candidates` are
/// dropped and reported in `dropped`.
std::optional<std::vector<std::string>> parse_selection(std::string_view reply,
                                                        const std::vector<std::string>& candidates,
                                                        std::vector<std::string>& dropped);

SelectionResult select_tools(const std::string& patient_ref, const std::string& note, const AgentContext& ctx,
                             SelectMode mode);

/// Retrieval embeds `risk` instead of the note, and the prompt asks for a
/// calculator that quantifies it.
SelectionResult select_tools_for_risk(const std::string& patient_ref, const std::string& note, const std::string& risk,
                                      const AgentContext& ctx, SelectMode mode);

struct CalcFailure {
  std::string calculator_id;
  std::string reason;

  nlohmann::json to_json() const;
};

struct PatientResult {
  SelectionResult selection;
  std::vector<AgentSession> sessions;
  std::vector<RiskSummary> summaries;
  std::vector<CalcFailure> failures;

  nlohmann::json to_json() const;
};

/// Selection, then one computation session per selected calculator. A
/// failing calculator is recorded and does not stop the others.
PatientResult run_patient(const std::string& patient_ref, const std::string& note, const AgentContext& ctx,
                          SelectMode mode);

}  // namespace riskagent::agent
