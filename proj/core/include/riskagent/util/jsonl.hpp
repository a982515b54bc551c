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
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace riskagent::util {

/// Reads one JSON value per non-blank line. Errors name the file and line.
std::vector<nlohmann::json> read_jsonl(const std::filesystem::path& path);

/// Appends one compact line and flushes.
void append_jsonl(const std::filesystem::path& path, const nlohmann::json& value);

void write_jsonl(const std::filesystem::path& path, const std::vector<nlohmann::json>& values);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, const std::string& text);

}  // namespace riskagent::util
