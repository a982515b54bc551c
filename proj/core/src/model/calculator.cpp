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

#include "riskagent/model/calculator.hpp"

#include <cmath>
#include <limits>

namespace riskagent::model {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

const std::set<std::string, std::less<>> kKnownFields{
    "id",      "pmid",          "title",          "purpose",     "eligibility", "organ_systems",
    "program_source", "interpretation", "utility", "citation_count", "cohort_size", "status"};

std::string require_string(const nlohmann::json& j, const char* field, bool non_empty = false) {
  if (!j.contains(field)) throw SchemaError(field, "missing");
  const auto& v = j.at(field);
  if (!v.is_string()) throw SchemaError(field, "expected a string");
  auto s = v.get<std::string>();
  if (non_empty && s.empty()) throw SchemaError(field, "must not be empty");
  return s;
}

std::uint64_t require_count(const nlohmann::json& v, const std::string& field) {
  if (v.is_number_unsigned()) return v.get<std::uint64_t>();
  if (v.is_number_integer() && v.get<std::int64_t>() >= 0) return static_cast<std::uint64_t>(v.get<std::int64_t>());
  throw SchemaError(field, "expected a non-negative integer");
}

double bound_from(const nlohmann::json& v, const std::string& field, double inf) {
  if (v.is_null()) return inf;
  if (v.is_number()) return v.get<double>();
  if (v.is_string()) {
    auto s = v.get<std::string>();
    if (s == "-inf" || s == "inf" || s == "+inf") return s == "-inf" ? -kInf : kInf;
  }
  throw SchemaError(field, "expected a number or null");
}

nlohmann::json bound_to(double v) {
  if (std::isinf(v)) return nullptr;
  return v;
}

}  // namespace

SchemaError::SchemaError(std::string field, const std::string& reason)
    : std::runtime_error("field '" + field + "': " + reason), field_(std::move(field)) {}

std::string_view to_string(CalcStatus s) {
  switch (s) {
    case CalcStatus::draft: return "draft";
    case CalcStatus::verified: return "verified";
    case CalcStatus::rejected: return "rejected";
  }
  return "draft";
}

CalcStatus status_from_string(std::string_view s) {
  if (s == "draft") return CalcStatus::draft;
  if (s == "verified") return CalcStatus::verified;
  if (s == "rejected") return CalcStatus::rejected;
  throw SchemaError("status", "unknown status '" + std::string(s) + "'");
}

nlohmann::json band_to_json(const lang::InterpretationBand& b) {
  return {{"output", b.output},
          {"lower", bound_to(b.lower)},
          {"upper", bound_to(b.upper)},
          {"bounds", std::string(lang::to_string(b.bounds))},
          {"label", b.label},
          {"statement", b.statement}};
}

lang::InterpretationBand band_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw SchemaError("interpretation", "bands must be objects");
  lang::InterpretationBand b;
  b.output = require_string(j, "output", true);
  b.lower = bound_from(j.value("lower", nlohmann::json()), "interpretation.lower", -kInf);
  b.upper = bound_from(j.value("upper", nlohmann::json()), "interpretation.upper", kInf);
  if (j.contains("bounds")) {
    try {
      b.bounds = lang::bounds_from_string(j.at("bounds").get<std::string>());
    } catch (const std::exception&) {
      throw SchemaError("interpretation.bounds", "expected one of \"[)\", \"[]\", \"()\", \"(]\"");
    }
  }
  b.label = require_string(j, "label", true);
  b.statement = j.contains("statement") ? require_string(j, "statement") : std::string();
  if (b.lower > b.upper) throw SchemaError("interpretation", "band '" + b.label + "' has lower > upper");
  return b;
}

nlohmann::json Calculator::to_json() const {
  nlohmann::json j = extra.is_object() ? extra : nlohmann::json::object();
  j["id"] = id;
  j["pmid"] = pmid;
  j["title"] = title;
  j["purpose"] = purpose;
  j["eligibility"] = eligibility;
  nlohmann::json systems = nlohmann::json::array();
  for (auto s : organ_systems) systems.push_back(std::string(code(s)));
  j["organ_systems"] = systems;
  j["program_source"] = program_source;
  nlohmann::json bands = nlohmann::json::array();
  for (const auto& b : interpretation) bands.push_back(band_to_json(b));
  j["interpretation"] = bands;
  j["utility"] = utility;
  j["citation_count"] = citation_count;
  if (cohort_size) j["cohort_size"] = *cohort_size;
  j["status"] = std::string(to_string(status));
  return j;
}

Calculator Calculator::from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw SchemaError("<document>", "expected a JSON object");
  Calculator c;
  c.id = require_string(j, "id", true);
  c.pmid = require_string(j, "pmid", true);
  c.title = require_string(j, "title");
  c.purpose = require_string(j, "purpose");
  c.eligibility = require_string(j, "eligibility");
  if (!j.contains("organ_systems")) throw SchemaError("organ_systems", "missing");
  if (!j.at("organ_systems").is_array()) throw SchemaError("organ_systems", "expected an array of codes");
  for (const auto& v : j.at("organ_systems")) {
    if (!v.is_string()) throw SchemaError("organ_systems", "expected code strings");
    auto sys = organ_system_from_code(v.get<std::string>());
    if (!sys) throw SchemaError("organ_systems", "unknown organ system code '" + v.get<std::string>() + "'");
    c.organ_systems.insert(*sys);
  }
  c.program_source = require_string(j, "program_source");
  if (!j.contains("interpretation")) throw SchemaError("interpretation", "missing");
  if (!j.at("interpretation").is_array()) throw SchemaError("interpretation", "expected an array");
  for (const auto& b : j.at("interpretation")) c.interpretation.push_back(band_from_json(b));
  c.utility = require_string(j, "utility");
  if (!j.contains("citation_count")) throw SchemaError("citation_count", "missing");
  c.citation_count = require_count(j.at("citation_count"), "citation_count");
  if (j.contains("cohort_size")) c.cohort_size = require_count(j.at("cohort_size"), "cohort_size");
  c.status = status_from_string(require_string(j, "status"));
  if (c.organ_systems.empty() && c.status != CalcStatus::draft)
    throw SchemaError("organ_systems", "may be empty only while status is draft");
  for (const auto& [key, value] : j.items())
    if (!kKnownFields.count(key)) c.extra[key] = value;
  return c;
}

nlohmann::json AbstractRecord::to_json() const {
  return {{"pmid", pmid}, {"title", title}, {"abstract", abstract}, {"year", year}, {"citation_count", citation_count}};
}

AbstractRecord AbstractRecord::from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw SchemaError("<record>", "expected a JSON object");
  AbstractRecord r;
  r.pmid = require_string(j, "pmid", true);
  r.title = j.contains("title") ? require_string(j, "title") : std::string();
  r.abstract = require_string(j, "abstract", true);
  if (j.contains("year")) {
    if (!j.at("year").is_number_integer()) throw SchemaError("year", "expected an integer");
    r.year = j.at("year").get<int>();
  }
  if (j.contains("citation_count")) r.citation_count = require_count(j.at("citation_count"), "citation_count");
  return r;
}

}  // namespace riskagent::model
