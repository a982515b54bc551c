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

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

namespace riskagent::llm {

enum class Role { system, user, assistant, tool };

std::string_view to_string(Role r);
Role role_from_string(std::string_view s);

struct ChatMessage {
  Role role = Role::user;
  std::string content;

  nlohmann::json to_json() const;
  static ChatMessage from_json(const nlohmann::json& j);
  bool operator==(const ChatMessage&) const = default;
};

struct ChatRequest {
  std::vector<ChatMessage> messages;
  double temperature = 0.0;
  int max_tokens = 1024;
  std::string model_tag = "strong";
  std::string purpose;  // template role id, e.g. "screen"

  nlohmann::json to_json() const;
  static ChatRequest from_json(const nlohmann::json& j);
  /// SHA-256 over the canonical JSON form; keys replay.
  std::string hash() const;
  /// Assistant messages already present (the turn number of a session).
  std::size_t assistant_turns() const;
  const ChatMessage* last_user() const;
  bool operator==(const ChatRequest&) const = default;
};

class LlmError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Retries exhausted or the connection failed outright.
class TransportError : public LlmError {
 public:
  TransportError(const std::string& message, int attempts);
  int attempts() const noexcept { return attempts_; }

 private:
  int attempts_;
};

/// Non-retryable HTTP 4xx.
class RequestError : public LlmError {
 public:
  RequestError(int status, const std::string& body_excerpt);
  int status() const noexcept { return status_; }

 private:
  int status_;
};

/// A scripted or replayed backend has no reply for this request.
class ReplayExhausted : public LlmError {
 public:
  using LlmError::LlmError;
};

/// A replayed request differs from the recorded one.
class ReplayDivergence : public LlmError {
 public:
  ReplayDivergence(std::size_t index, const std::string& detail);
  std::size_t index() const noexcept { return index_; }

 private:
  std::size_t index_;
};

/// One recorded request/response pair.
struct Exchange {
  std::size_t index = 0;
  ChatRequest request;
  ChatMessage response;
  double latency_ms = 0.0;
  std::string backend;

  nlohmann::json to_json() const;
  static Exchange from_json(const nlohmann::json& j);
};

std::vector<Exchange> read_transcript(const std::string& path);

}  // namespace riskagent::llm
