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


#include "riskagent/llm/chat.hpp"

#include "riskagent/util/hash.hpp"
#include "riskagent/util/jsonl.hpp"

namespace riskagent::llm {

std::string_view to_string(Role r) {
  switch (r) {
    case Role::system: return "system";
    case Role::user: return "user";
    case Role::assistant: return "assistant";
    case Role::tool: return "tool";
  }
  return "user";
}

Role role_from_string(std::string_view s) {
  if (s == "system") return Role::system;
  if (s == "user") return Role::user;
  if (s == "assistant") return Role::assistant;
  if (s == "tool") return Role::tool;
  throw LlmError("unknown chat role '" + std::string(s) + "'");
}

nlohmann::json ChatMessage::to_json() const { return {{"role", to_string(role)}, {"content", content}}; }

ChatMessage ChatMessage::from_json(const nlohmann::json& j) {
  return {role_from_string(j.at("role").get<std::string>()), j.at("content").get<std::string>()};
}

nlohmann::json ChatRequest::to_json() const {
  nlohmann::json msgs = nlohmann::json::array();
  for (const auto& m : messages) msgs.push_back(m.to_json());
  return {{"messages", msgs},
          {"temperature", temperature},
          {"max_tokens", max_tokens},
          {"model_tag", model_tag},
          {"purpose", purpose}};
}

ChatRequest ChatRequest::from_json(const nlohmann::json& j) {
  ChatRequest r;
  for (const auto& m : j.at("messages")) r.messages.push_back(ChatMessage::from_json(m));
  r.temperature = j.value("temperature", 0.0);
  r.max_tokens = j.value("max_tokens", 1024);
  r.model_tag = j.value("model_tag", "strong");
  r.purpose = j.value("purpose", "");
  return r;
}

std::string ChatRequest::hash() const { return util::sha256_hex(to_json().dump()); }

std::size_t ChatRequest::assistant_turns() const {
  std::size_t n = 0;
  for (const auto& m : messages)
    if (m.role == Role::assistant) ++n;
  return n;
}

const ChatMessage* ChatRequest::last_user() const {
  for (auto it = messages.rbegin(); it != messages.rend(); ++it)
    if (it->role == Role::user) return &*it;
  return nullptr;
}

TransportError::TransportError(const std::string& message, int attempts)
    : LlmError(message + " (after " + std::to_string(attempts) + " attempt" + (attempts == 1 ? "" : "s") + ")"),
      attempts_(attempts) {}

RequestError::RequestError(int status, const std::string& body_excerpt)
    : LlmError("request rejected with HTTP " + std::to_string(status) + ": " + body_excerpt), status_(status) {}

ReplayDivergence::ReplayDivergence(std::size_t index, const std::string& detail)
    : LlmError("replay diverged at request " + std::to_string(index) + ": " + detail), index_(index) {}

nlohmann::json Exchange::to_json() const {
  return {{"index", index},
          {"request_hash", request.hash()},
          {"request", request.to_json()},
          {"response", response.to_json()},
          {"latency_ms", latency_ms},
          {"backend", backend}};
}

Exchange Exchange::from_json(const nlohmann::json& j) {
  Exchange e;
  e.index = j.value("index", std::size_t{0});
  e.request = ChatRequest::from_json(j.at("request"));
  e.response = ChatMessage::from_json(j.at("response"));
  e.latency_ms = j.value("latency_ms", 0.0);
  e.backend = j.value("backend", "");
  return e;
}

std::vector<Exchange> read_transcript(const std::string& path) {
  std::vector<Exchange> out;
  for (const auto& j : util::read_jsonl(path)) out.push_back(Exchange::from_json(j));
  return out;
}

}  // namespace riskagent::llm
