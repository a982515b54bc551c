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


#include <atomic>
#include <cstdlib>
#include <fstream>
#include <thread>

#include "doctest.h"
#include "fixtures.hpp"
#include "httplib.h"
#include "riskagent/llm/gateway.hpp"
#include "riskagent/llm/templates.hpp"
#include "riskagent/util/http.hpp"
#include "riskagent/util/parallel.hpp"

using namespace riskagent;
using namespace riskagent::llm;
using riskagent::testing::scratch_dir;

namespace {

ChatRequest ask(std::string text, std::string purpose = "screen") {
  ChatRequest r;
  r.messages.push_back({Role::user, std::move(text)});
  r.purpose = std::move(purpose);
  return r;
}

/// Stub chat-completions server that fails with the given statuses first.
struct StubServer {
  httplib::Server server;
  std::thread thread;
  int port = 0;
  std::atomic<int> hits{0};
  std::vector<int> failures;
  nlohmann::json last_body;

  explicit StubServer(std::vector<int> fail_with) : failures(std::move(fail_with)) {
    server.Post("/v1/chat/completions", [this](const httplib::Request& req, httplib::Response& res) {
      int n = hits++;
      last_body = nlohmann::json::parse(req.body);
      if (n < static_cast<int>(failures.size())) {
        res.status = failures[n];
        res.set_content("{\"error\": \"busy\"}", "application/json");
        return;
      }
      nlohmann::json out{{"choices", {{{"message", {{"role", "assistant"}, {"content", "pong"}}}}}}};
      res.set_content(out.dump(), "application/json");
    });
    port = server.bind_to_any_port("127.0.0.1");
    thread = std::thread([this] { server.listen_after_bind(); });
    server.wait_until_ready();
  }
  ~StubServer() {
    server.stop();
    thread.join();
  }
  RemoteConfig config() const {
    RemoteConfig c;
    c.endpoint = "http://127.0.0.1:" + std::to_string(port) + "/v1";
    c.api_key = "test-key";
    c.retry.base_delay = std::chrono::milliseconds(1);
    return c;
  }
};

}  // namespace

TEST_CASE("scripted backend") {
  auto b = (ScriptedBackend::from_replies({"yes"}));
  Gateway g(b);
  CHECK(g.chat(ask("ok?")).content == "yes");
  CHECK_THROWS_AS(g.chat(ask("again?")), ReplayExhausted);
  CHECK(g.calls() == 1);
}

TEST_CASE("sequential scripts assert their matchers") {
  auto e = ScriptEntry::reply("NO");
  e.purpose = "screen";
  ScriptedBackend b({e});
  CHECK_THROWS_AS(b.complete(ask("x", "draft")), ReplayDivergence);
}

TEST_CASE("rule scripts match by purpose, turn and content") {
  auto first = ScriptEntry::reply("turn zero");
  first.turn = 0;
  auto second = ScriptEntry::reply("turn one");
  second.turn = 1;
  auto any = ScriptEntry::reply("generic");
  any.contains = {"kidney"};
  any.repeat = true;
  ScriptedBackend b({first, second, any}, ScriptedBackend::Mode::rules);
  auto r = ask("start");
  CHECK(b.complete(r).content == "turn zero");
  r.messages.push_back({Role::assistant, "a"});
  r.messages.push_back({Role::user, "next"});
  CHECK(b.complete(r).content == "turn one");
  CHECK(b.complete(ask("kidney risk")).content == "generic");
  CHECK(b.complete(ask("kidney again")).content == "generic");
  CHECK_THROWS_AS(b.complete(ask("liver")), ReplayExhausted);
}

TEST_CASE("scripts load from files") {
  auto dir = scratch_dir("scripts");
  {
    std::ofstream(dir / "seq.jsonl") << "\"one\"\n{\"response\": \"two\", \"purpose\": \"screen\"}\n";
    std::ofstream(dir / "rules.json") << R"({"mode": "rules", "entries": [{"response": "r", "contains": "x", "repeat": true}]})";
  }
  auto seq = ScriptedBackend::load((dir / "seq.jsonl").string());
  CHECK(seq->complete(ask("a")).content == "one");
  CHECK(seq->complete(ask("b")).content == "two");
  auto rules = ScriptedBackend::load((dir / "rules.json").string());
  CHECK(rules->complete(ask("x")).content == "r");
  CHECK(rules->complete(ask("xx")).content == "r");
}

TEST_CASE("gateway rejects non-zero temperature") {
  Gateway g((ScriptedBackend::from_replies({"a"})));
  auto r = ask("q");
  r.temperature = 0.7;
  CHECK_THROWS_WITH_AS(g.chat(r), doctest::Contains("temperature"), LlmError);
}

TEST_CASE("gateway replaces invalid UTF-8 in replies") {
  Gateway g((ScriptedBackend::from_replies({"ok \xff\xfe end", "caf\xc3\xa9"})));
  CHECK(g.chat(ask("q")).content == "ok \xef\xbf\xbd\xef\xbf\xbd end");
  CHECK(g.chat(ask("q")).content == "caf\xc3\xa9");
  CHECK_NOTHROW((void)g.transcript().front().to_json().dump());
}

TEST_CASE("gateway bounds in-flight requests") {
  std::atomic<int> active{0}, peak{0};
  auto backend = std::make_shared<CallbackBackend>(
      [&](const ChatRequest&) {
        int now = ++active;
        int p = peak.load();
        while (now > p && !peak.compare_exchange_weak(p, now)) {
        }
        std::this_thread::sleep_for(std::chrono::milliseconds(5));
        --active;
        return std::string("ok");
      },
      8);
  Gateway g(backend, 2);
  CHECK(g.in_flight_limit() == 2);
  util::parallel_for(12, 6, [&](std::size_t) { g.chat(ask("q")); });
  CHECK(peak.load() <= 2);
  CHECK(g.calls() == 12);
}

TEST_CASE("template rendering") {
  auto t = PromptTemplate::parse("screen", "# placeholders: x\n---\nIs {x} ok?");
  CHECK(t.render({{"x", "A"}}) == "Is A ok?");
  CHECK(t.render({{"x", "A"}}) == t.render({{"x", "A"}}));
  auto y = PromptTemplate::parse("screen", "# placeholders: x, y\n---\n{x} and {y}");
  CHECK_THROWS_WITH_AS(y.render({{"x", "1"}}), doctest::Contains("'y'"), TemplateError);
  CHECK_THROWS_WITH_AS(PromptTemplate::parse("screen", "# placeholders: x\n---\n{x} {z}"), doctest::Contains("'z'"),
                       TemplateError);
  auto braces = PromptTemplate::parse("draft", "# placeholders: v\n---\n{{\"k\": {v}}}");
  CHECK(braces.render({{"v", "1"}}) == "{\"k\": 1}");
  CHECK_THROWS_AS(PromptTemplate::parse("poetry", "# placeholders:\n---\nhi"), TemplateError);
  CHECK(PromptTemplate::parse("draft.repair", "# placeholders:\n---\nfix it").role_id == "draft.repair");
}

TEST_CASE("builtin templates cover every role") {
  auto set = TemplateSet::builtin();
  for (const auto& role : template_roles()) CHECK_MESSAGE(set.has(role), role);
  CHECK(set.get("screen").model_tag == "fast");
  CHECK(set.get("draft").model_tag == "strong");
  CHECK(set.get("cot").body.find("Let's think step-by-step") != std::string::npos);
  auto req = set.get("screen").request({{"title", "T"}, {"abstract", "A"}});
  CHECK(req.purpose == "screen");
  CHECK(req.temperature == 0.0);
}

TEST_CASE("record and replay") {
  auto dir = scratch_dir("replay");
  auto run = [](Gateway& g, const std::string& second) {
    std::vector<std::string> out;
    out.push_back(g.chat(ask("first")).content);
    out.push_back(g.chat(ask(second)).content);
    out.push_back(g.chat(ask("third")).content);
    return out;
  };
  Gateway live((ScriptedBackend::from_replies({"a", "b", "c"})));
  live.record_to(dir / "t.jsonl");
  auto recorded = run(live, "second");
  CHECK(read_transcript((dir / "t.jsonl").string()).size() == 3);

  Gateway replay((ReplayBackend::load((dir / "t.jsonl").string())));
  CHECK(run(replay, "second") == recorded);

  Gateway edited((ReplayBackend::load((dir / "t.jsonl").string())));
  try {
    run(edited, "second, edited");
    FAIL("expected divergence");
  } catch (const ReplayDivergence& e) {
    CHECK(e.index() == 1);
  }

  Gateway empty(std::make_shared<ReplayBackend>(std::vector<Exchange>{}));
  CHECK(empty.calls() == 0);
}

TEST_CASE("remote backend retries 429 then succeeds") {
  StubServer stub({429, 429});
  RemoteBackend remote(stub.config());
  ChatRequest r = ask("ping");
  r.model_tag = "fast";
  CHECK(remote.complete(r).content == "pong");
  CHECK(stub.hits == 3);
  CHECK(remote.attempts() == 3);
  CHECK(stub.last_body["model"] == "gpt-4o-mini");
  CHECK(stub.last_body["temperature"] == 0.0);
}

TEST_CASE("remote backend gives up after five attempts") {
  StubServer stub({500, 502, 503, 500, 500, 500});
  RemoteBackend remote(stub.config());
  try {
    remote.complete(ask("ping"));
    FAIL("expected a transport error");
  } catch (const TransportError& e) {
    CHECK(e.attempts() == 5);
  }
  CHECK(stub.hits == 5);
}

TEST_CASE("remote backend does not retry other 4xx") {
  StubServer stub({400});
  RemoteBackend remote(stub.config());
  CHECK_THROWS_AS(remote.complete(ask("ping")), RequestError);
  CHECK(stub.hits == 1);
}

TEST_CASE("remote backend treats connection failures as retryable") {
  RemoteConfig c;
  c.endpoint = "http://127.0.0.1:1/v1";
  c.retry.base_delay = std::chrono::milliseconds(1);
  c.retry.max_attempts = 2;
  c.retry.timeout = std::chrono::milliseconds(200);
  RemoteBackend remote(c);
  CHECK_THROWS_AS(remote.complete(ask("ping")), TransportError);
  CHECK(remote.attempts() == 2);
}

TEST_CASE("network denial") {
  StubServer stub({});
  RemoteBackend remote(stub.config());
  auto before = util::network_attempts();
  setenv("RISKAGENT_DENY_NETWORK", "1", 1);
  CHECK_THROWS_AS(remote.complete(ask("ping")), util::NetworkDenied);
  unsetenv("RISKAGENT_DENY_NETWORK");
  CHECK(util::network_attempts() == before);
  CHECK(stub.hits == 0);
}
