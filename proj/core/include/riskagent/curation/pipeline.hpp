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

#include "riskagent/curation/query.hpp"
#include "riskagent/curation/stages.hpp"
#include "riskagent/model/registry.hpp"

namespace riskagent::curation {

struct StageCounts {
  std::size_t input = 0;
  std::size_t boolean_pass = 0;
  std::size_t screen_pass = 0;
  std::size_t drafted = 0;
  std::size_t verified = 0;

  bool monotone() const noexcept;
  nlohmann::json to_json() const;
  bool operator==(const StageCounts&) const = default;
};

/// A record or draft that left the funnel, and why.
struct SkipEntry {
  std::string pmid;
  std::string calc_id;  // empty for article-level skips
  std::string stage;    // boolean | screen | draft | verify | classify
  std::string reason;

  nlohmann::json to_json() const;
};

/// The checkpoint cannot be used; rerun without resume to start fresh.
class ResumeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct PipelineConfig {
  BooleanQuery query = BooleanQuery::default_screen();
  /// Per-pmid stage log. Empty disables checkpointing.
  std::filesystem::path checkpoint;
  bool resume = false;
  std::size_t concurrency = 4;
};

struct PipelineResult {
  /// Verified calculators that received at least one organ system, with
  /// their source abstracts attached.
  model::Registry registry;
  StageCounts counts;
  std::vector<SkipEntry> skips;
  std::vector<std::string> warnings;
};

/// Records run boolean filter, screen, draft, verify and classify in that
/// order. Completed stages are appended to the checkpoint; with resume set
/// they are read back instead of being asked again.
PipelineResult run_pipeline(const std::vector<model::AbstractRecord>& corpus, const PipelineConfig& config,
                            llm::Gateway& gateway, const llm::TemplateSet& templates);

/// Writes registry/, counts.json and skips.jsonl under `dir`.
void write_outputs(const PipelineResult& result, const std::filesystem::path& dir);

}  // namespace riskagent::curation
