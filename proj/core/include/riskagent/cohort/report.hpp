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
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "riskagent/cohort/steps.hpp"

namespace riskagent::cohort {

struct RiskResult {
  std::string patient_id;
  std::string calculator_id;
  agent::RiskSummary summary;
  std::optional<Scores> scores;  // absent when scoring failed
  RiskType risk_type = RiskType::other;
  std::vector<std::string> warnings;

  nlohmann::json to_json() const;
  static RiskResult from_json(const nlohmann::json& j);
};

/// Ten bins of width 10; 100 falls in the last.
struct ScoreHistogram {
  std::array<std::size_t, 10> bins{};
  std::size_t count = 0;

  void add(int score);
  bool operator==(const ScoreHistogram&) const = default;
};

struct CalculatorStats {
  std::size_t patients = 0;
  std::size_t unscored = 0;
  std::array<ScoreHistogram, 4> scores{};  // in kScoreNames order
  /// Patients by urgency, then severity (both descending), then id;
  /// unscored patients last.
  std::vector<std::string> ranking;
};

struct CohortReport {
  std::size_t patients = 0;
  std::size_t results = 0;
  /// calculators per patient -> number of patients, including 0
  std::map<std::size_t, std::size_t> per_patient;
  double mean_per_patient = 0.0;
  std::map<std::string, CalculatorStats> per_calculator;
  /// Patients with at least one result of the type.
  std::map<RiskType, std::size_t> risk_type_patients;

  nlohmann::json to_json() const;
  /// calculators,patients
  std::string per_patient_csv() const;
  /// calculator_id,patients,unscored
  std::string per_calculator_csv() const;
  /// calculator_id,metric,bin_low,bin_high,count
  std::string scores_csv() const;
};

/// Throws std::invalid_argument when a (patient, calculator) pair repeats
/// or more patients have results than `patients`.
CohortReport aggregate(const std::vector<RiskResult>& results, std::size_t patients);

}  // namespace riskagent::cohort
