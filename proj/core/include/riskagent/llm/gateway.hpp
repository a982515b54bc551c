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

#include <condition_variable>
#include <filesystem>
#include <memory>
#include <mutex>
#include <optional>
#include <vector>

#include "riskagent/llm/backend.hpp"
#include "riskagent/llm/chat.hpp"

namespace riskagent::llm {

/// Front door for every model call. Enforces temperature 0, bounds the
/// number of in-flight requests and keeps an append-only transcript,
/// optionally mirrored to a JSONL file as it grows.
class Gateway {
 public:
  explicit Gateway(std::shared_ptr<Backend> backend, std::size_t max_in_flight = 4);

  ChatMessage chat(const ChatRequest& request);

  /// Start mirroring exchanges to `path` (truncated first).
  void record_to(const std::filesystem::path& path);

  std::vector<Exchange> transcript() const;
  std::size_t calls() const;
  /// Effective concurrency: min(configured limit, backend limit).
  std::size_t in_flight_limit() const noexcept { return limit_; }
  Backend& backend() noexcept { return *backend_; }

 private:
  std::shared_ptr<Backend> backend_;
  std::size_t limit_;
  mutable std::mutex mu_;
  std::condition_variable cv_;
  std::size_t active_ = 0;
  std::vector<Exchange> transcript_;
  std::optional<std::filesystem::path> record_path_;
};

}  // namespace riskagent::llm
