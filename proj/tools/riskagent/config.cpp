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

#include "config.hpp"

#include <cstdlib>
#include <set>

#include "riskagent/util/jsonl.hpp"

namespace riskagent::cli {

namespace fs = std::filesystem;

EnvLookup process_env() {
  return [](std::string_view name) -> std::optional<std::string> {
    const char* v = std::getenv(std::string(name).c_str());
    if (!v || !*v) return std::nullopt;
    return std::string(v);
  };
}

nlohmann::json Config::to_json() const {
  return {{"backend", backend},
          {"gateway",
           {{"endpoint", remote.endpoint},
            {"api_key_set", !remote.api_key.empty()},
            {"models", remote.models},
            {"max_in_flight", remote.max_in_flight},
            {"retry",
             {{"max_attempts", remote.retry.max_attempts},
              {"base_delay_ms", remote.retry.base_delay.count()},
              {"timeout_ms", remote.retry.timeout.count()}}}}},
          {"embedding",
           {{"provider", embedder}, {"dim", embed_dim}, {"seed", embed_seed}, {"url", embed_url}, {"source", index_source}}},
          {"paths", {{"registry", registry.string()}, {"index", index.string()}, {"templates", templates.string()}}},
          {"defaults", {{"top_k", top_k}, {"max_turns", max_turns}, {"concurrency", concurrency}}}};
}

namespace {

void check_keys(const nlohmann::json& j, const std::string& where, const std::set<std::string>& allowed) {
  if (!j.is_object()) throw ConfigError(where + " must be an object");
  for (const auto& [k, v] : j.items()) {
    if (k == "api_key" || k == "apiKey")
      throw ConfigError(where + "." + k + ": secrets are accepted only via the RISKAGENT_API_KEY environment variable");
    if (!allowed.count(k)) throw ConfigError("unknown config key " + where + "." + k);
  }
}

fs::path resolve(const std::string& v, const fs::path& base) {
  fs::path p = v;
  if (p.empty() || p.is_absolute()) return p;
  return base / p;
}

}  // namespace

void apply_config_json(Config& c, const nlohmann::json& j, const fs::path& base) {
  check_keys(j, "config", {"backend", "gateway", "embedding", "paths", "defaults"});
  try {
    if (j.contains("backend")) {
      c.backend = j["backend"].get<std::string>();
      for (std::string prefix : {"replay:", "scripted:"})
        if (c.backend.rfind(prefix, 0) == 0)
          c.backend = prefix + resolve(c.backend.substr(prefix.size()), base).string();
    }
    if (j.contains("gateway")) {
      const auto& g = j["gateway"];
      check_keys(g, "gateway", {"endpoint", "models", "max_in_flight", "retry"});
      if (g.contains("endpoint")) c.remote.endpoint = g["endpoint"].get<std::string>();
      if (g.contains("models"))
        for (const auto& [tag, model] : g["models"].items()) c.remote.models[tag] = model.get<std::string>();
      if (g.contains("max_in_flight")) c.remote.max_in_flight = g["max_in_flight"].get<std::size_t>();
      if (g.contains("retry")) {
        const auto& r = g["retry"];
        check_keys(r, "gateway.retry", {"max_attempts", "base_delay_ms", "timeout_ms"});
        if (r.contains("max_attempts")) c.remote.retry.max_attempts = r["max_attempts"].get<int>();
        if (r.contains("base_delay_ms")) c.remote.retry.base_delay = std::chrono::milliseconds(r["base_delay_ms"].get<long>());
        if (r.contains("timeout_ms")) c.remote.retry.timeout = std::chrono::milliseconds(r["timeout_ms"].get<long>());
      }
    }
    if (j.contains("embedding")) {
      const auto& e = j["embedding"];
      check_keys(e, "embedding", {"provider", "dim", "seed", "url", "source"});
      if (e.contains("provider")) c.embedder = e["provider"].get<std::string>();
      if (e.contains("dim")) c.embed_dim = e["dim"].get<std::size_t>();
      if (e.contains("seed")) c.embed_seed = e["seed"].get<std::uint64_t>();
      if (e.contains("url")) c.embed_url = e["url"].get<std::string>();
      if (e.contains("source")) c.index_source = e["source"].get<std::string>();
    }
    if (j.contains("paths")) {
      const auto& p = j["paths"];
      check_keys(p, "paths", {"registry", "index", "templates"});
      if (p.contains("registry")) c.registry = resolve(p["registry"].get<std::string>(), base);
      if (p.contains("index")) c.index = resolve(p["index"].get<std::string>(), base);
      if (p.contains("templates")) c.templates = resolve(p["templates"].get<std::string>(), base);
    }
    if (j.contains("defaults")) {
      const auto& d = j["defaults"];
      check_keys(d, "defaults", {"top_k", "max_turns", "concurrency"});
      if (d.contains("top_k")) c.top_k = d["top_k"].get<std::size_t>();
      if (d.contains("max_turns")) c.max_turns = d["max_turns"].get<std::size_t>();
      if (d.contains("concurrency")) c.concurrency = d["concurrency"].get<std::size_t>();
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("bad config value: ") + e.what());
  }
}

Config load_config(const std::optional<fs::path>& explicit_file, const EnvLookup& env) {
  Config c;
  std::optional<fs::path> file = explicit_file;
  if (!file) {
    if (auto v = env("RISKAGENT_CONFIG")) file = fs::path(*v);
  }
  if (file) {
    if (!fs::exists(*file)) throw ConfigError("config file " + file->string() + " does not exist");
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(util::read_file(*file));
    } catch (const nlohmann::json::parse_error& e) {
      throw ConfigError("config file " + file->string() + " is not valid JSON: " + e.what());
    }
    apply_config_json(c, j, file->parent_path());
    c.file = *file;
  }
  if (auto v = env("RISKAGENT_ENDPOINT")) c.remote.endpoint = *v;
  if (auto v = env("RISKAGENT_API_KEY")) c.remote.api_key = *v;
  return c;
}

}  // namespace riskagent::cli
