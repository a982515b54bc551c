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

#include <chrono>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace riskagent::util {

/// Connection failure, timeout or an unreadable reply.
class TransportError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised instead of opening a connection when RISKAGENT_DENY_NETWORK is set.
class NetworkDenied : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct HttpResponse {
  int status = 0;
  std::string body;
};

struct HttpOptions {
  std::chrono::milliseconds timeout{60000};
  std::vector<std::pair<std::string, std::string>> headers;
};

/// POSTs a JSON body. Any HTTP status is returned; only transport failures throw.
HttpResponse http_post_json(const std::string& url, const std::string& body, const HttpOptions& options = {});

/// Number of outbound connection attempts made by this process.
std::uint64_t network_attempts() noexcept;

bool network_denied();

}  // namespace riskagent::util
