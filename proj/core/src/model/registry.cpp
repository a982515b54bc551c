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

#include "riskagent/model/registry.hpp"

#include <algorithm>
#include <fstream>
#include <set>

#include "riskagent/model/validate.hpp"
#include "riskagent/util/jsonl.hpp"

namespace riskagent::model {

namespace fs = std::filesystem;

namespace {

constexpr const char* kAbstractsFile = "abstracts.jsonl";

Calculator parse_document(const nlohmann::json& j, const std::string& source) {
  try {
    return Calculator::from_json(j);
  } catch (const SchemaError& e) {
    throw RegistryError(source + ": malformed calculator document: " + e.what());
  }
}

}  // namespace

ConflictError::ConflictError(std::string id, std::string first, std::string second)
    : RegistryError("duplicate calculator id '" + id + "' in " + first + " and " + second), id_(std::move(id)) {}

void Registry::add(Calculator calc, std::string source) {
  if (auto it = calcs_.find(calc.id); it != calcs_.end()) throw ConflictError(calc.id, it->second.source, source);
  if (calc.status == CalcStatus::verified) {
    auto report = validate(calc);
    if (!report.all_passed())
      throw RegistryError(source + ": verified calculator '" + calc.id + "' fails validation: " +
                          report.failures().front());
  }
  std::string id = calc.id;
  calcs_.emplace(std::move(id), Entry{std::move(calc), std::move(source)});
}

void Registry::add_abstract(AbstractRecord record) {
  std::string key = record.pmid;
  abstracts_.insert_or_assign(std::move(key), std::move(record));
}

Registry Registry::load(const fs::path& path) {
  if (!fs::exists(path)) throw RegistryError("registry path does not exist: " + path.string());
  Registry reg;
  if (fs::is_directory(path)) {
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(path))
      if (entry.is_regular_file() && entry.path().extension() == ".json") files.push_back(entry.path());
    std::sort(files.begin(), files.end());
    for (const auto& f : files) {
      nlohmann::json j;
      try {
        j = nlohmann::json::parse(util::read_file(f));
      } catch (const nlohmann::json::parse_error& e) {
        throw RegistryError(f.string() + ": invalid JSON: " + e.what());
      }
      reg.add(parse_document(j, f.string()), f.string());
    }
    if (auto sidecar = path / kAbstractsFile; fs::exists(sidecar)) {
      for (const auto& j : util::read_jsonl(sidecar)) {
        try {
          reg.add_abstract(AbstractRecord::from_json(j));
        } catch (const SchemaError& e) {
          throw RegistryError(sidecar.string() + ": malformed abstract record: " + e.what());
        }
      }
    }
    return reg;
  }
  int lineno = 0;
  for (const auto& j : util::read_jsonl(path)) {
    ++lineno;
    std::string source = path.string() + ":" + std::to_string(lineno);
    reg.add(parse_document(j, source), source);
  }
  return reg;
}

const Calculator* Registry::find(std::string_view id) const {
  auto it = calcs_.find(id);
  return it == calcs_.end() ? nullptr : &it->second.calc;
}

const Calculator& Registry::at(std::string_view id) const {
  if (const auto* c = find(id)) return *c;
  throw RegistryError("no calculator with id '" + std::string(id) + "'");
}

const AbstractRecord* Registry::abstract_for(std::string_view pmid) const {
  auto it = abstracts_.find(pmid);
  return it == abstracts_.end() ? nullptr : &it->second;
}

std::vector<const Calculator*> Registry::all() const {
  std::vector<const Calculator*> out;
  for (const auto& [id, e] : calcs_) out.push_back(&e.calc);
  return out;
}

std::vector<const Calculator*> Registry::verified() const {
  std::vector<const Calculator*> out;
  for (const auto& [id, e] : calcs_)
    if (e.calc.status == CalcStatus::verified) out.push_back(&e.calc);
  return out;
}

void Registry::save_directory(const fs::path& dir) const {
  fs::create_directories(dir);
  for (const auto& [id, e] : calcs_) util::write_file(dir / (id + ".json"), e.calc.to_json().dump(2) + "\n");
  if (!abstracts_.empty()) {
    std::vector<nlohmann::json> lines;
    for (const auto& [pmid, rec] : abstracts_) lines.push_back(rec.to_json());
    util::write_jsonl(dir / kAbstractsFile, lines);
  }
}

void Registry::save_bundle(const fs::path& file) const {
  std::vector<nlohmann::json> lines;
  for (const auto& [id, e] : calcs_) lines.push_back(e.calc.to_json());
  util::write_jsonl(file, lines);
}

std::vector<AbstractRecord> load_corpus(const fs::path& path) {
  std::vector<AbstractRecord> out;
  std::set<std::string> seen;
  int lineno = 0;
  for (const auto& j : util::read_jsonl(path)) {
    ++lineno;
    AbstractRecord r;
    try {
      r = AbstractRecord::from_json(j);
    } catch (const SchemaError& e) {
      throw RegistryError(path.string() + ":" + std::to_string(lineno) + ": " + e.what());
    }
    if (!seen.insert(r.pmid).second)
      throw RegistryError(path.string() + ":" + std::to_string(lineno) + ": duplicate pmid '" + r.pmid + "'");
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace riskagent::model
