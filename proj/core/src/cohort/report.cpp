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

#include "riskagent/cohort/report.hpp"

#include <algorithm>
#include <set>
#include <sstream>
#include <tuple>

namespace riskagent::cohort {

nlohmann::json RiskResult::to_json() const {
  return {{"patient_id", patient_id},
          {"calculator_id", calculator_id},
          {"summary", summary.to_json()},
          {"scores", scores ? scores->to_json() : nlohmann::json(nullptr)},
          {"risk_type", std::string(to_string(risk_type))},
          {"warnings", warnings}};
}

RiskResult RiskResult::from_json(const nlohmann::json& j) {
  RiskResult r;
  r.patient_id = j.at("patient_id").get<std::string>();
  r.calculator_id = j.at("calculator_id").get<std::string>();
  r.summary = agent::RiskSummary::from_json(j.at("summary"));
  if (j.contains("scores") && !j["scores"].is_null()) r.scores = Scores::from_json(j["scores"]);
  r.risk_type = risk_type_from_string(j.at("risk_type").get<std::string>());
  r.warnings = j.value("warnings", std::vector<std::string>{});
  return r;
}

void ScoreHistogram::add(int score) {
  int bin = std::clamp(score, 0, 100) / 10;
  ++bins[static_cast<std::size_t>(std::min(bin, 9))];
  ++count;
}

nlohmann::json CohortReport::to_json() const {
  nlohmann::json pp = nlohmann::json::object();
  for (const auto& [k, n] : per_patient) pp[std::to_string(k)] = n;
  nlohmann::json calcs = nlohmann::json::object();
  for (const auto& [id, s] : per_calculator) {
    nlohmann::json hist = nlohmann::json::object();
    for (std::size_t m = 0; m < kScoreNames.size(); ++m) hist[std::string(kScoreNames[m])] = s.scores[m].bins;
    calcs[id] = {{"patients", s.patients}, {"unscored", s.unscored}, {"score_histograms", hist}, {"ranking", s.ranking}};
  }
  nlohmann::json types = nlohmann::json::object();
  for (const auto& [t, n] : risk_type_patients) types[std::string(to_string(t))] = n;
  return {{"patients", patients},
          {"results", results},
          {"per_patient_histogram", pp},
          {"mean_per_patient", mean_per_patient},
          {"per_calculator", calcs},
          {"risk_type_patients", types}};
}

std::string CohortReport::per_patient_csv() const {
  std::ostringstream out;
  out << "calculators,patients\n";
  for (const auto& [k, n] : per_patient) out << k << ',' << n << "\n";
  return out.str();
}

std::string CohortReport::per_calculator_csv() const {
  std::ostringstream out;
  out << "calculator_id,patients,unscored\n";
  for (const auto& [id, s] : per_calculator) out << id << ',' << s.patients << ',' << s.unscored << "\n";
  return out.str();
}

std::string CohortReport::scores_csv() const {
  std::ostringstream out;
  out << "calculator_id,metric,bin_low,bin_high,count\n";
  for (const auto& [id, s] : per_calculator)
    for (std::size_t m = 0; m < kScoreNames.size(); ++m)
      for (std::size_t b = 0; b < 10; ++b)
        out << id << ',' << kScoreNames[m] << ',' << b * 10 << ',' << (b == 9 ? 100 : b * 10 + 9) << ','
            << s.scores[m].bins[b] << "\n";
  return out.str();
}

CohortReport aggregate(const std::vector<RiskResult>& results, std::size_t patients) {
  std::vector<const RiskResult*> sorted;
  for (const auto& r : results) sorted.push_back(&r);
  std::sort(sorted.begin(), sorted.end(), [](const RiskResult* a, const RiskResult* b) {
    return std::tie(a->patient_id, a->calculator_id) < std::tie(b->patient_id, b->calculator_id);
  });

  CohortReport rep;
  rep.patients = patients;
  rep.results = results.size();
  std::map<std::string, std::size_t> per_patient;
  std::map<RiskType, std::set<std::string>> by_type;
  std::map<std::string, std::vector<const RiskResult*>> by_calc;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const auto& r = *sorted[i];
    if (i > 0 && sorted[i - 1]->patient_id == r.patient_id && sorted[i - 1]->calculator_id == r.calculator_id)
      throw std::invalid_argument("duplicate result for patient " + r.patient_id + " and calculator " + r.calculator_id);
    ++per_patient[r.patient_id];
    by_type[r.risk_type].insert(r.patient_id);
    by_calc[r.calculator_id].push_back(&r);
  }
  if (per_patient.size() > patients)
    throw std::invalid_argument(std::to_string(per_patient.size()) + " patients have results but the cohort has " +
                                std::to_string(patients));

  if (patients > per_patient.size()) rep.per_patient[0] = patients - per_patient.size();
  for (const auto& [id, n] : per_patient) ++rep.per_patient[n];
  rep.mean_per_patient = patients == 0 ? 0.0 : static_cast<double>(results.size()) / static_cast<double>(patients);

  for (auto t : {RiskType::mortality, RiskType::cardiac, RiskType::stroke, RiskType::respiratory, RiskType::bleeding,
                 RiskType::infection, RiskType::other})
    rep.risk_type_patients[t] = by_type[t].size();

  for (auto& [id, rs] : by_calc) {
    auto& s = rep.per_calculator[id];
    s.patients = rs.size();
    std::vector<const RiskResult*> scored;
    std::vector<std::string> unscored;
    for (const auto* r : rs) {
      if (!r->scores) {
        ++s.unscored;
        unscored.push_back(r->patient_id);
        continue;
      }
      scored.push_back(r);
      s.scores[0].add(r->scores->specificity);
      s.scores[1].add(r->scores->urgency);
      s.scores[2].add(r->scores->severity);
      s.scores[3].add(r->scores->absence);
    }
    std::sort(scored.begin(), scored.end(), [](const RiskResult* a, const RiskResult* b) {
      if (a->scores->urgency != b->scores->urgency) return a->scores->urgency > b->scores->urgency;
      if (a->scores->severity != b->scores->severity) return a->scores->severity > b->scores->severity;
      return a->patient_id < b->patient_id;
    });
    for (const auto* r : scored) s.ranking.push_back(r->patient_id);
    s.ranking.insert(s.ranking.end(), unscored.begin(), unscored.end());
  }
  return rep;
}

}  // namespace riskagent::cohort
