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


#include "riskagent/llm/backend.hpp"

#include <thread>

#include "riskagent/util/http.hpp"
#include "riskagent/util/jsonl.hpp"

namespace riskagent::llm {

namespace {

std::string excerpt(const std::string& s, std::size_t n = 200) { return s.size() <= n ? s : s.substr(0, n) + "..."; }

std::string describe(const ChatRequest& r) {
  std::string d = "purpose '" + r.purpose + "', turn " + std::to_string(r.assistant_turns());
  if (const auto* u = r.last_user()) d += ", last user message \"" + excerpt(u->content, 80) + "\"";
  return d;
}

}  // namespace

ScriptEntry ScriptEntry::reply(std::string text) {
  ScriptEntry e;
  e.response = std::move(text);
  return e;
}

ScriptEntry ScriptEntry::from_json(const nlohmann::json& j) {
  if (j.is_string()) return reply(j.get<std::string>());
  ScriptEntry e;
  e.response = j.at("response").get<std::string>();
  if (j.contains("purpose")) e.purpose = j["purpose"].get<std::string>();
  if (j.contains("contains")) {
    if (j["contains"].is_string()) e.contains = {j["contains"].get<std::string>()};
    else e.contains = j["contains"].get<std::vector<std::string>>();
  }
  if (j.contains("turn")) e.turn = j["turn"].get<std::size_t>();
  e.repeat = j.value("repeat", false);
  return e;
}

bool ScriptEntry::matches(const ChatRequest& r) const {
  if (purpose && *purpose != r.purpose) return false;
  if (turn && *turn != r.assistant_turns()) return false;
  for (const auto& needle : contains) {
    bool found = false;
    for (const auto& m : r.messages)
      if (m.role == Role::user && m.content.find(needle) != std::string::npos) found = true;
    if (!found) return false;
  }
  return true;
}

ScriptedBackend::ScriptedBackend(std::vector<ScriptEntry> entries, Mode mode)
    : mode_(mode), entries_(entries.begin(), entries.end()) {}

std::shared_ptr<ScriptedBackend> ScriptedBackend::from_replies(const std::vector<std::string>& replies) {
  std::vector<ScriptEntry> e;
  for (const auto& r : replies) e.push_back(ScriptEntry::reply(r));
  return std::make_shared<ScriptedBackend>(std::move(e));
}

std::shared_ptr<ScriptedBackend> ScriptedBackend::load(const std::string& path) {
  std::string text = util::read_file(path);
  std::size_t first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '{') {
    // Either a single-object script or JSONL whose first line is an entry.
    try {
      auto j = nlohmann::json::parse(text);
      if (j.contains("entries")) {
        std::string mode = j.value("mode", "sequential");
        if (mode != "sequential" && mode != "rules") throw LlmError("unknown script mode '" + mode + "' in " + path);
        std::vector<ScriptEntry> entries;
        for (const auto& e : j["entries"]) entries.push_back(ScriptEntry::from_json(e));
        return std::make_shared<ScriptedBackend>(std::move(entries), mode == "rules" ? Mode::rules : Mode::sequential);
      }
    } catch (const nlohmann::json::parse_error&) {
    }
  }
  std::vector<ScriptEntry> entries;
  for (const auto& j : util::read_jsonl(path)) entries.push_back(ScriptEntry::from_json(j));
  return std::make_shared<ScriptedBackend>(std::move(entries));
}

void ScriptedBackend::push(std::string reply) { push(ScriptEntry::reply(std::move(reply))); }

void ScriptedBackend::push(ScriptEntry entry) {
  std::lock_guard lock(mu_);
  entries_.push_back(std::move(entry));
}

ChatMessage ScriptedBackend::complete(const ChatRequest& request) {
  std::lock_guard lock(mu_);
  std::size_t index = served_;
  if (mode_ == Mode::sequential) {
    if (entries_.empty()) throw ReplayExhausted("scripted replies exhausted at request " + std::to_string(index) + " (" + describe(request) + ")");
    if (!entries_.front().matches(request))
      throw ReplayDivergence(index, "scripted entry does not accept the request (" + describe(request) + ")");
    ScriptEntry e = std::move(entries_.front());
    entries_.pop_front();
    ++served_;
    return {Role::assistant, std::move(e.response)};
  }
  for (auto it = entries_.begin(); it != entries_.end(); ++it) {
    if (!it->matches(request)) continue;
    std::string reply = it->response;
    if (!it->repeat) entries_.erase(it);
    ++served_;
    return {Role::assistant, std::move(reply)};
  }
  throw ReplayExhausted("no scripted rule matches request " + std::to_string(index) + " (" + describe(request) + ")");
}

std::size_t ScriptedBackend::remaining() const {
  std::lock_guard lock(mu_);
  return entries_.size();
}

std::size_t ScriptedBackend::served() const {
  std::lock_guard lock(mu_);
  return served_;
}

ChatMessage CallbackBackend::complete(const ChatRequest& request) { return {Role::assistant, fn_(request)}; }

ReplayBackend::ReplayBackend(std::vector<Exchange> transcript) : transcript_(std::move(transcript)) {}

std::shared_ptr<ReplayBackend> ReplayBackend::load(const std::string& path) {
  return std::make_shared<ReplayBackend>(read_transcript(path));
}

ChatMessage ReplayBackend::complete(const ChatRequest& request) {
  std::lock_guard lock(mu_);
  if (next_ >= transcript_.size())
    throw ReplayExhausted("transcript exhausted at request " + std::to_string(next_) + " (" + describe(request) + ")");
  const auto& rec = transcript_[next_];
  if (rec.request.hash() != request.hash()) {
    std::string detail = "recorded " + describe(rec.request) + "; got " + describe(request);
    throw ReplayDivergence(next_, detail);
  }
  ++next_;
  return rec.response;
}

std::size_t ReplayBackend::position() const {
  std::lock_guard lock(mu_);
  return next_;
}

RemoteBackend::RemoteBackend(RemoteConfig config) : config_(std::move(config)) {
  if (config_.endpoint.empty()) throw LlmError("remote backend needs an endpoint URL");
  if (config_.retry.max_attempts < 1 || config_.retry.max_attempts > 5)
    throw LlmError("retry attempts must be between 1 and 5");
  if (config_.max_in_flight == 0) config_.max_in_flight = 1;
}

std::string RemoteBackend::url() const {
  std::string u = config_.endpoint;
  if (u.find("/chat/completions") != std::string::npos) return u;
  while (!u.empty() && u.back() == '/') u.pop_back();
  return u + "/chat/completions";
}

std::size_t RemoteBackend::attempts() const noexcept { return attempts_.load(); }

ChatMessage RemoteBackend::complete(const ChatRequest& request) {
  auto model = config_.models.find(request.model_tag);
  nlohmann::json body{{"model", model == config_.models.end() ? request.model_tag : model->second},
                      {"temperature", request.temperature},
                      {"max_tokens", request.max_tokens},
                      {"messages", nlohmann::json::array()}};
  for (const auto& m : request.messages) body["messages"].push_back(m.to_json());
  std::string payload = body.dump();

  util::HttpOptions opts;
  opts.timeout = config_.retry.timeout;
  if (!config_.api_key.empty()) opts.headers.emplace_back("Authorization", "Bearer " + config_.api_key);

  auto delay = config_.retry.base_delay;
  std::string last_error;
  const std::string target = url();
  for (int attempt = 1; attempt <= config_.retry.max_attempts; ++attempt) {
    if (attempt > 1) {
      std::this_thread::sleep_for(delay);
      delay = std::chrono::milliseconds(static_cast<long long>(static_cast<double>(delay.count()) * config_.retry.factor));
    }
    util::HttpResponse res;
    try {
      ++attempts_;
      res = util::http_post_json(target, payload, opts);
    } catch (const util::NetworkDenied&) {
      --attempts_;
      throw;
    } catch (const util::TransportError& e) {
      last_error = e.what();
      continue;
    }
    if (res.status == 429 || res.status >= 500) {
      last_error = "HTTP " + std::to_string(res.status) + ": " + excerpt(res.body);
      continue;
    }
    if (res.status < 200 || res.status >= 300) throw RequestError(res.status, excerpt(res.body));
    try {
      auto j = nlohmann::json::parse(res.body);
      const auto& msg = j.at("choices").at(0).at("message");
      const auto& content = msg.at("content");
      return {Role::assistant, content.is_null() ? std::string() : content.get<std::string>()};
    } catch (const nlohmann::json::exception& e) {
      throw LlmError(std::string("unreadable chat completion reply: ") + e.what() + "; body: " + excerpt(res.body));
    }
  }
  throw TransportError("chat completion failed: " + last_error, config_.retry.max_attempts);
}

}  // namespace riskagent::llm
