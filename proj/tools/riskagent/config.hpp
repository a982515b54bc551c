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
#include <filesystem>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "riskagent/llm/backend.hpp"

namespace riskagent::cli {

/// Bad configuration: an unreadable file, an unknown key, a missing path.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using EnvLookup = std::function<std::optional<std::string>(std::string_view)>;

/// Reads the process environment.
EnvLookup process_env();

struct Config {
  // remote | replay:<file> | scripted:<file>
  std::string backend = "remote";
  llm::RemoteConfig remote;

  std::string embedder = "hashing";  // hashing | remote
  std::size_t embed_dim = 256;
  std::uint64_t embed_seed = 0;
  std::string embed_url;
  std::string index_source = "raw_abstract";

  std::filesystem::path registry;
  std::filesystem::path index;
  std::filesystem::path templates;

  std::size_t top_k = 10;
  std::size_t max_turns = 8;
  std::size_t concurrency = 4;

  std::filesystem::path file;  // the config file read, if any

  /// The effective settings, without the API key.
  nlohmann::json to_json() const;
};

/// Defaults, then the config file (RISKAGENT_CONFIG or `explicit_file`),
/// then RISKAGENT_ENDPOINT and RISKAGENT_API_KEY. Relative paths in the file,
/// replay: and scripted: backend files included, resolve against the file's
/// directory. A file that contains an API key is rejected.
Config load_config(const std::optional<std::filesystem::path>& explicit_file, const EnvLookup& env);

/// Applies one JSON config document on top of `config`.
void apply_config_json(Config& config, const nlohmann::json& j, const std::filesystem::path& base_dir);

}  // namespace riskagent::cli
