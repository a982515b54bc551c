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

#include <atomic>
#include <chrono>
#include <cstddef>
#include <deque>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "riskagent/llm/chat.hpp"

namespace riskagent::llm {

/// A chat-completion provider. Implementations must be safe for up to
/// max_in_flight() concurrent calls.
class Backend {
 public:
  virtual ~Backend() = default;
  virtual ChatMessage complete(const ChatRequest& request) = 0;
  virtual std::string tag() const = 0;
  virtual std::size_t max_in_flight() const { return 4; }
};

/// One authored reply. Matchers are optional; in rules mode an entry
/// applies to the first request they all accept.
struct ScriptEntry {
  std::string response;
  std::optional<std::string> purpose;
  std::vector<std::string> contains;     // each a substring of some user message
  std::optional<std::size_t> turn;       // assistant messages already present
  bool repeat = false;                   // rules mode: never consumed

  static ScriptEntry reply(std::string text);
  static ScriptEntry from_json(const nlohmann::json& j);
  bool matches(const ChatRequest& r) const;
};

/// Deterministic offline backend.
///
/// sequential: replies are handed out strictly in order, and an entry's
/// matchers are assertions on the request it answers.
/// rules: each request takes the first unconsumed entry whose matchers
/// accept it.
class ScriptedBackend : public Backend {
 public:
  enum class Mode { sequential, rules };

  explicit ScriptedBackend(std::vector<ScriptEntry> entries = {}, Mode mode = Mode::sequential);
  /// Bare replies, sequential.
  static std::shared_ptr<ScriptedBackend> from_replies(const std::vector<std::string>& replies);
  /// A JSONL file of entries (sequential) or a JSON object
  /// {"mode": "sequential"|"rules", "entries": [...]}.
  static std::shared_ptr<ScriptedBackend> load(const std::string& path);

  void push(std::string reply);
  void push(ScriptEntry entry);

  ChatMessage complete(const ChatRequest& request) override;
  std::string tag() const override { return "scripted"; }
  std::size_t max_in_flight() const override { return 1; }

  std::size_t remaining() const;
  std::size_t served() const;

 private:
  mutable std::mutex mu_;
  Mode mode_;
  std::deque<ScriptEntry> entries_;
  std::size_t served_ = 0;
};

/// Replies computed by a function; handy for adversarial tests.
class CallbackBackend : public Backend {
 public:
  using Fn = std::function<std::string(const ChatRequest&)>;
  explicit CallbackBackend(Fn fn, std::size_t in_flight = 1) : fn_(std::move(fn)), in_flight_(in_flight) {}
  ChatMessage complete(const ChatRequest& request) override;
  std::string tag() const override { return "callback"; }
  std::size_t max_in_flight() const override { return in_flight_; }

 private:
  Fn fn_;
  std::size_t in_flight_;
};

/// Serves a recorded transcript. The n-th request must hash to the n-th
/// recorded request.
class ReplayBackend : public Backend {
 public:
  explicit ReplayBackend(std::vector<Exchange> transcript);
  static std::shared_ptr<ReplayBackend> load(const std::string& path);

  ChatMessage complete(const ChatRequest& request) override;
  std::string tag() const override { return "replay"; }
  std::size_t max_in_flight() const override { return 1; }
  std::size_t position() const;

 private:
  mutable std::mutex mu_;
  std::vector<Exchange> transcript_;
  std::size_t next_ = 0;
};

struct RetryPolicy {
  int max_attempts = 5;
  std::chrono::milliseconds base_delay{1000};
  double factor = 2.0;
  std::chrono::milliseconds timeout{120000};
};

struct RemoteConfig {
  std::string endpoint;  // base URL; "/chat/completions" is appended unless present
  std::string api_key;
  std::map<std::string, std::string> models{{"strong", "gpt-4o"}, {"fast", "gpt-4o-mini"}};
  std::size_t max_in_flight = 4;
  RetryPolicy retry;
};

/// OpenAI-compatible chat completions over HTTP(S). Retries HTTP 429, 5xx
/// and transport failures with exponential backoff.
class RemoteBackend : public Backend {
 public:
  explicit RemoteBackend(RemoteConfig config);
  ChatMessage complete(const ChatRequest& request) override;
  std::string tag() const override { return "remote"; }
  std::size_t max_in_flight() const override { return config_.max_in_flight; }

  /// HTTP attempts made so far, over all requests.
  std::size_t attempts() const noexcept;
  std::string url() const;

 private:
  RemoteConfig config_;
  std::atomic<std::size_t> attempts_{0};
};

}  // namespace riskagent::llm
