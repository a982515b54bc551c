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

#include "riskagent/bench/dataset.hpp"

#include <fstream>
#include <set>

#include "riskagent/util/jsonl.hpp"
#include "riskagent/util/strings.hpp"

namespace riskagent::bench {

DatasetError::DatasetError(std::string item, std::string field, const std::string& reason)
    : std::runtime_error("item " + (item.empty() ? std::string("<unnamed>") : item) + ", field '" + field + "': " + reason),
      item_(std::move(item)),
      field_(std::move(field)) {}

const AnswerOption* RiskQAItem::option(std::string_view label) const {
  for (const auto& o : options)
    if (o.label == label) return &o;
  return nullptr;
}

std::vector<std::string> RiskQAItem::labels() const {
  std::vector<std::string> out;
  for (const auto& o : options) out.push_back(o.label);
  return out;
}

std::string RiskQAItem::render_options() const {
  std::string out;
  for (const auto& o : options) out += "(" + o.label + ") " + o.text + "\n";
  return out;
}

nlohmann::json RiskQAItem::to_json() const {
  nlohmann::json opts = nlohmann::json::array();
  for (const auto& o : options) opts.push_back({{"label", o.label}, {"text", o.text}});
  return {{"id", id},
          {"vignette", vignette},
          {"options", opts},
          {"answer_key", answer_key},
          {"oracle_calculator_id", oracle_calculator_id}};
}

namespace {

std::string text_field(const nlohmann::json& j, const std::string& item, const char* field) {
  if (!j.contains(field)) throw DatasetError(item, field, "missing");
  if (!j[field].is_string()) throw DatasetError(item, field, "must be a string");
  auto v = j[field].get<std::string>();
  if (util::trim(v).empty()) throw DatasetError(item, field, "must not be empty");
  return v;
}

}  // namespace

RiskQAItem RiskQAItem::from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw DatasetError("", "<item>", "not a JSON object");
  RiskQAItem it;
  it.id = text_field(j, "", "id");
  it.vignette = text_field(j, it.id, "vignette");
  it.answer_key = text_field(j, it.id, "answer_key");
  it.oracle_calculator_id = text_field(j, it.id, "oracle_calculator_id");
  if (!j.contains("options") || !j["options"].is_array()) throw DatasetError(it.id, "options", "must be an array");
  std::set<std::string> seen;
  for (const auto& o : j["options"]) {
    if (!o.is_object()) throw DatasetError(it.id, "options", "each option must be an object");
    AnswerOption opt{text_field(o, it.id, "label"), text_field(o, it.id, "text")};
    if (!seen.insert(opt.label).second) throw DatasetError(it.id, "options", "duplicate label " + opt.label);
    it.options.push_back(std::move(opt));
  }
  if (it.options.size() < kMinOptions || it.options.size() > kMaxOptions)
    throw DatasetError(it.id, "options", "needs between 2 and 10 options, got " + std::to_string(it.options.size()));
  if (!it.option(it.answer_key))
    throw DatasetError(it.id, "answer_key", "'" + it.answer_key + "' is not one of the option labels");
  return it;
}

std::vector<RiskQAItem> load_dataset(const std::filesystem::path& path, const model::Registry* registry) {
  std::vector<RiskQAItem> items;
  std::set<std::string> ids;
  for (const auto& j : util::read_jsonl(path)) {
    auto it = RiskQAItem::from_json(j);
    if (!ids.insert(it.id).second) throw DatasetError(it.id, "id", "duplicate item id");
    if (registry && !registry->find(it.oracle_calculator_id))
      throw DatasetError(it.id, "oracle_calculator_id", "'" + it.oracle_calculator_id + "' is not in the registry");
    items.push_back(std::move(it));
  }
  return items;
}

void save_dataset(const std::vector<RiskQAItem>& items, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  for (const auto& it : items) out << it.to_json().dump() << "\n";
}

}  // namespace riskagent::bench
