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
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "riskagent/model/registry.hpp"

namespace riskagent::bench {

inline constexpr std::size_t kMinOptions = 2;
inline constexpr std::size_t kMaxOptions = 10;

class DatasetError : public std::runtime_error {
 public:
  DatasetError(std::string item, std::string field, const std::string& reason);
  const std::string& item() const noexcept { return item_; }
  const std::string& field() const noexcept { return field_; }

 private:
  std::string item_;
  std::string field_;
};

struct AnswerOption {
  std::string label;
  std::string text;
  bool operator==(const AnswerOption&) const = default;
};

struct RiskQAItem {
  std::string id;
  std::string vignette;
  std::vector<AnswerOption> options;
  std::string answer_key;
  std::string oracle_calculator_id;

  const AnswerOption* option(std::string_view label) const;
  std::vector<std::string> labels() const;
  /// "(A) text" lines, as shown in prompts.
  std::string render_options() const;

  nlohmann::json to_json() const;
  /// Throws DatasetError naming the item and field.
  static RiskQAItem from_json(const nlohmann::json& j);
  bool operator==(const RiskQAItem&) const = default;
};

/// JSONL, one item per line. Duplicate ids and, when a registry is given,
/// unresolvable oracle ids are errors.
std::vector<RiskQAItem> load_dataset(const std::filesystem::path& path, const model::Registry* registry = nullptr);

void save_dataset(const std::vector<RiskQAItem>& items, const std::filesystem::path& path);

}  // namespace riskagent::bench
