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

#include "riskagent/lang/binding.hpp"

#include <stdexcept>

#include "riskagent/util/strings.hpp"

namespace riskagent::lang {

std::string render_value(const Value& v) {
  if (const bool* b = std::get_if<bool>(&v)) return *b ? "true" : "false";
  if (const double* d = std::get_if<double>(&v)) return util::format_double(*d);
  return std::get<std::string>(v);
}

BindingEntry BindingEntry::exact_bool(bool b) {
  BindingEntry e;
  e.kind = Kind::exact;
  e.value = b;
  return e;
}

BindingEntry BindingEntry::exact_number(double x, std::optional<std::string> unit) {
  BindingEntry e;
  e.kind = Kind::exact;
  e.value = x;
  e.unit = std::move(unit);
  return e;
}

BindingEntry BindingEntry::exact_label(std::string label) {
  BindingEntry e;
  e.kind = Kind::exact;
  e.value = std::move(label);
  return e;
}

BindingEntry BindingEntry::interval(double lo, double hi, std::optional<std::string> unit) {
  BindingEntry e;
  e.kind = Kind::interval;
  e.lo = lo;
  e.hi = hi;
  e.unit = std::move(unit);
  return e;
}

BindingEntry BindingEntry::one_of(std::vector<std::string> labels) {
  BindingEntry e;
  e.kind = Kind::label_set;
  e.labels = std::move(labels);
  return e;
}

BindingEntry BindingEntry::unknown() { return BindingEntry{}; }

std::string BindingEntry::render() const {
  std::string out;
  switch (kind) {
    case Kind::exact: out = render_value(value); break;
    case Kind::interval: out = "[" + util::format_double(lo) + ", " + util::format_double(hi) + "]"; break;
    case Kind::label_set: out = "{" + util::join(labels, ", ") + "}"; break;
    case Kind::unknown: return "UNKNOWN";
  }
  if (unit) out += " " + *unit;
  return out;
}

bool all_exact(const Binding& b) {
  for (const auto& [name, entry] : b)
    if (!entry.is_exact()) return false;
  return true;
}

namespace {

BindingEntry entry_from_json(const std::string& name, const nlohmann::json& v) {
  using nlohmann::json;
  if (v.is_null()) return BindingEntry::unknown();
  if (v.is_boolean()) return BindingEntry::exact_bool(v.get<bool>());
  if (v.is_number()) return BindingEntry::exact_number(v.get<double>());
  if (v.is_string()) {
    auto s = v.get<std::string>();
    if (s == "UNKNOWN") return BindingEntry::unknown();
    return BindingEntry::exact_label(std::move(s));
  }
  if (v.is_array()) {
    if (v.size() == 2 && v[0].is_number() && v[1].is_number())
      return BindingEntry::interval(v[0].get<double>(), v[1].get<double>());
    std::vector<std::string> labels;
    for (const auto& item : v) {
      if (!item.is_string()) throw BindingError(name, "arrays must be [lo, hi] numbers or a list of labels");
      labels.push_back(item.get<std::string>());
    }
    if (labels.empty()) throw BindingError(name, "empty label set");
    return BindingEntry::one_of(std::move(labels));
  }
  if (v.is_object()) {
    std::optional<std::string> unit;
    if (v.contains("unit")) unit = v.at("unit").get<std::string>();
    if (v.contains("value")) {
      auto e = entry_from_json(name, v.at("value"));
      e.unit = unit;
      return e;
    }
    if (v.contains("lo") && v.contains("hi"))
      return BindingEntry::interval(v.at("lo").get<double>(), v.at("hi").get<double>(), unit);
    throw BindingError(name, "object form needs \"value\" or \"lo\"/\"hi\"");
  }
  throw BindingError(name, "unsupported JSON value");
}

}  // namespace

Binding binding_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw std::invalid_argument("parameter bindings must be a JSON object");
  Binding b;
  for (const auto& [name, v] : j.items()) b[name] = entry_from_json(name, v);
  return b;
}

nlohmann::json binding_to_json(const Binding& b) {
  nlohmann::json out = nlohmann::json::object();
  for (const auto& [name, e] : b) {
    nlohmann::json v;
    switch (e.kind) {
      case BindingEntry::Kind::exact:
        if (const bool* x = std::get_if<bool>(&e.value)) v = *x;
        else if (const double* d = std::get_if<double>(&e.value)) v = *d;
        else v = std::get<std::string>(e.value);
        break;
      case BindingEntry::Kind::interval: v = nlohmann::json::array({e.lo, e.hi}); break;
      case BindingEntry::Kind::label_set: v = e.labels; break;
      case BindingEntry::Kind::unknown: v = "UNKNOWN"; break;
    }
    if (e.unit) v = nlohmann::json{{"value", v}, {"unit", *e.unit}};
    if (e.unit && e.kind == BindingEntry::Kind::interval)
      v = nlohmann::json{{"lo", e.lo}, {"hi", e.hi}, {"unit", *e.unit}};
    out[name] = v;
  }
  return out;
}

}  // namespace riskagent::lang
