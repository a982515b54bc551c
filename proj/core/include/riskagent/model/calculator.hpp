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

#include <cstdint>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "riskagent/lang/bands.hpp"
#include "riskagent/model/organ_system.hpp"

namespace riskagent::model {

enum class CalcStatus { draft, verified, rejected };

std::string_view to_string(CalcStatus s);
CalcStatus status_from_string(std::string_view s);

/// A document failed schema validation; field() names the first violation.
class SchemaError : public std::runtime_error {
 public:
  SchemaError(std::string field, const std::string& reason);
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

/// A structured calculator document.
struct Calculator {
  std::string id;
  std::string pmid;
  std::string title;
  std::string purpose;
  std::string eligibility;
  std::set<OrganSystem> organ_systems;
  std::string program_source;
  std::vector<lang::InterpretationBand> interpretation;
  std::string utility;
  std::uint64_t citation_count = 0;
  std::optional<std::uint64_t> cohort_size;  // omitted from JSON when absent
  CalcStatus status = CalcStatus::draft;
  nlohmann::json extra = nlohmann::json::object();  // unknown fields, preserved

  nlohmann::json to_json() const;
  /// Throws SchemaError. Checks shape and field-level invariants only; see
  /// validate() for program and band checks.
  static Calculator from_json(const nlohmann::json& j);

  bool operator==(const Calculator&) const = default;
};

nlohmann::json band_to_json(const lang::InterpretationBand& b);
lang::InterpretationBand band_from_json(const nlohmann::json& j);

/// One source article of the curation corpus.
struct AbstractRecord {
  std::string pmid;
  std::string title;
  std::string abstract;
  int year = 0;
  std::uint64_t citation_count = 0;

  nlohmann::json to_json() const;
  static AbstractRecord from_json(const nlohmann::json& j);
  bool operator==(const AbstractRecord&) const = default;
};

}  // namespace riskagent::model
