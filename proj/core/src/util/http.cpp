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


#include "riskagent/util/http.hpp"

#include <atomic>
#include <cstdlib>

#include "httplib.h"

namespace riskagent::util {

namespace {

std::atomic<std::uint64_t> g_attempts{0};

struct SplitUrl {
  std::string origin;  // scheme://host[:port]
  std::string path;
};

SplitUrl split_url(const std::string& url) {
  auto scheme_end = url.find("://");
  if (scheme_end == std::string::npos) throw TransportError("malformed URL '" + url + "': missing scheme");
  std::string scheme = url.substr(0, scheme_end);
  if (scheme != "http" && scheme != "https") throw TransportError("unsupported URL scheme '" + scheme + "'");
  auto path_start = url.find('/', scheme_end + 3);
  if (path_start == std::string::npos) return {url, "/"};
  return {url.substr(0, path_start), url.substr(path_start)};
}

}  // namespace

bool network_denied() {
  const char* v = std::getenv("RISKAGENT_DENY_NETWORK");
  return v && *v && std::string(v) != "0";
}

std::uint64_t network_attempts() noexcept { return g_attempts.load(); }

HttpResponse http_post_json(const std::string& url, const std::string& body, const HttpOptions& options) {
  if (network_denied()) throw NetworkDenied("network access is disabled (RISKAGENT_DENY_NETWORK); refusing POST to " + url);
  auto parts = split_url(url);
  httplib::Client client(parts.origin);
  auto secs = std::chrono::duration_cast<std::chrono::seconds>(options.timeout);
  auto usecs = std::chrono::duration_cast<std::chrono::microseconds>(options.timeout - secs);
  client.set_connection_timeout(secs.count(), usecs.count());
  client.set_read_timeout(secs.count(), usecs.count());
  client.set_write_timeout(secs.count(), usecs.count());
  httplib::Headers headers;
  for (const auto& [k, v] : options.headers) headers.emplace(k, v);
  ++g_attempts;
  auto res = client.Post(parts.path, headers, body, "application/json");
  if (!res) throw TransportError("POST " + url + " failed: " + httplib::to_string(res.error()));
  return {res->status, res->body};
}

}  // namespace riskagent::util
