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


#include "riskagent/llm/gateway.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>

#include "riskagent/util/jsonl.hpp"
#include "riskagent/util/strings.hpp"

namespace riskagent::llm {

Gateway::Gateway(std::shared_ptr<Backend> backend, std::size_t max_in_flight) : backend_(std::move(backend)) {
  if (!backend_) throw LlmError("gateway needs a backend");
  limit_ = std::max<std::size_t>(1, std::min(max_in_flight, backend_->max_in_flight()));
}

void Gateway::record_to(const std::filesystem::path& path) {
  std::lock_guard lock(mu_);
  std::ofstream(path, std::ios::trunc);
  record_path_ = path;
}

ChatMessage Gateway::chat(const ChatRequest& request) {
  if (request.temperature != 0.0)
    throw LlmError("temperature must be 0 for pipeline requests (got " + std::to_string(request.temperature) + ")");
  {
    std::unique_lock lock(mu_);
    cv_.wait(lock, [&] { return active_ < limit_; });
    ++active_;
  }
  auto start = std::chrono::steady_clock::now();
  ChatMessage reply;
  try {
    reply = backend_->complete(request);
    reply.content = util::sanitize_utf8(reply.content);
  } catch (...) {
    std::lock_guard lock(mu_);
    --active_;
    cv_.notify_one();
    throw;
  }
  double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  std::lock_guard lock(mu_);
  --active_;
  cv_.notify_one();
  Exchange ex{transcript_.size(), request, reply, ms, backend_->tag()};
  if (record_path_) util::append_jsonl(*record_path_, ex.to_json());
  transcript_.push_back(std::move(ex));
  return reply;
}

std::vector<Exchange> Gateway::transcript() const {
  std::lock_guard lock(mu_);
  return transcript_;
}

std::size_t Gateway::calls() const {
  std::lock_guard lock(mu_);
  return transcript_.size();
}

}  // namespace riskagent::llm
