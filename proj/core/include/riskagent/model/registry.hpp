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

#include <filesystem>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "riskagent/model/calculator.hpp"

namespace riskagent::model {

class RegistryError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Two documents share an id.
class ConflictError : public RegistryError {
 public:
  ConflictError(std::string id, std::string first, std::string second);
  const std::string& id() const noexcept { return id_; }

 private:
  std::string id_;
};

/// In-memory calculator collection. Iteration is ordered by id.
///
/// A registry built by load() is never mutated afterwards and may be read
/// from any number of threads.
class Registry {
 public:
  /// Loads a directory of `*.json` calculator documents (plus an optional
  /// `abstracts.jsonl` sidecar) or a single `.jsonl` bundle.
  static Registry load(const std::filesystem::path& path);

  /// Throws ConflictError on a duplicate id, RegistryError if a verified
  /// calculator fails validation.
  void add(Calculator calc, std::string source = "<memory>");
  void add_abstract(AbstractRecord record);

  const Calculator* find(std::string_view id) const;
  const Calculator& at(std::string_view id) const;
  const AbstractRecord* abstract_for(std::string_view pmid) const;

  std::vector<const Calculator*> all() const;
  std::vector<const Calculator*> verified() const;
  std::size_t size() const noexcept { return calcs_.size(); }
  bool empty() const noexcept { return calcs_.empty(); }

  /// One pretty-printed `<id>.json` per calculator, plus `abstracts.jsonl`
  /// when abstracts are attached.
  void save_directory(const std::filesystem::path& dir) const;
  void save_bundle(const std::filesystem::path& file) const;

 private:
  struct Entry {
    Calculator calc;
    std::string source;
  };
  std::map<std::string, Entry, std::less<>> calcs_;
  std::map<std::string, AbstractRecord, std::less<>> abstracts_;
};

/// Reads a JSONL corpus; duplicate pmids and empty abstracts are errors.
std::vector<AbstractRecord> load_corpus(const std::filesystem::path& path);

}  // namespace riskagent::model
