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


#include <cmath>
#include <thread>

#include "doctest.h"
#include "fixtures.hpp"
#include "httplib.h"
#include "retrieval_oracle.hpp"
#include "riskagent/retrieval/index.hpp"
#include "riskagent/util/jsonl.hpp"

using namespace riskagent;
using namespace riskagent::retrieval;
using riskagent::testing::fixture;
using riskagent::testing::scratch_dir;

namespace {

model::Calculator calc_with(std::string id, std::string pmid, model::CalcStatus status) {
  auto c = model::Calculator::from_json(nlohmann::json::parse(util::read_file(fixture("registry/f1.json"))));
  c.id = std::move(id);
  c.pmid = std::move(pmid);
  c.status = status;
  return c;
}

model::Registry small_registry() {
  model::Registry reg;
  for (int i = 1; i <= 3; ++i) {
    reg.add(calc_with("c" + std::to_string(i), std::to_string(i), model::CalcStatus::verified));
    reg.add_abstract({std::to_string(i), "Title " + std::to_string(i), "abstract about topic " + std::to_string(i), 2000, 0});
  }
  reg.add(calc_with("c4", "4", model::CalcStatus::draft));
  return reg;
}

}  // namespace

TEST_CASE("hashing embedder") {
  HashingEmbedder e(64, 3);
  auto a = e.embed_doc("Atrial fibrillation stroke risk");
  CHECK(a.size() == 64);
  double norm = 0;
  for (float x : a) norm += x * x;
  CHECK(norm == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(e.embed_query("atrial FIBRILLATION, stroke risk!") == a);
  CHECK(HashingEmbedder(64, 4).embed_doc("Atrial fibrillation stroke risk") != a);
  auto zero = e.embed_doc("   ");
  CHECK(std::all_of(zero.begin(), zero.end(), [](float x) { return x == 0.0f; }));
}

TEST_CASE("index build") {
  HashingEmbedder e(32);
  auto reg = small_registry();
  auto idx = index_build(e, reg);
  CHECK(idx.size() == 3);
  CHECK(idx.ids() == std::vector<std::string>{"c1", "c2", "c3"});
  CHECK(index_build(e, reg).serialize() == idx.serialize());
  CHECK(index_build(e, reg, TextSource::digest).size() == 3);

  auto empty = index_build(e, model::Registry{});
  CHECK(empty.size() == 0);
  CHECK(empty.search(std::vector<float>(32, 1.0f)).empty());

  FixedEmbedder fixed(32);
  try {
    index_build(fixed, reg);
    FAIL("expected failure");
  } catch (const IndexError& err) {
    CHECK(std::string(err.what()).find("'c1'") != std::string::npos);
  }
}

TEST_CASE("search on basis vectors") {
  VectorIndex idx(4);
  for (int i = 0; i < 4; ++i) {
    std::vector<float> e(4, 0.0f);
    e[i] = 1.0f;
    idx.add("e" + std::to_string(i + 1), e);
  }
  auto hits = idx.search(std::vector<float>{0, 1, 0, 0}, 1);
  REQUIRE(hits.size() == 1);
  CHECK(hits[0].id == "e2");
  CHECK(hits[0].score == 1.0);
  CHECK(idx.search(std::vector<float>{0, 1, 0, 0}, 100).size() == 4);
  CHECK_THROWS_WITH_AS(idx.search(std::vector<float>{1, 0}), doctest::Contains("index dim 4, query dim 2"), IndexError);
  CHECK_THROWS_AS(idx.add("e1", std::vector<float>(4, 0.0f)), IndexError);
}

TEST_CASE("search matches a full-sort oracle") {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    auto c = riskagent::testing::random_index(seed, 50, 16);
    std::mt19937_64 rng(seed + 100);
    std::normal_distribution<float> normal;
    std::vector<float> q(16);
    for (auto& x : q) x = normal(rng);
    for (std::size_t k : {1, 10, 50, 60}) CHECK(c.index.search(q, k) == riskagent::testing::full_sort(c, q, k));
  }
}

TEST_CASE("ties order by ascending id") {
  VectorIndex idx(2);
  for (const char* id : {"b", "c", "a", "d"}) idx.add(id, std::vector<float>{1, 1});
  auto hits = idx.search(std::vector<float>{0.5f, 0.5f}, 4);
  std::vector<std::string> order;
  for (const auto& h : hits) order.push_back(h.id);
  CHECK(order == std::vector<std::string>{"a", "b", "c", "d"});
}

TEST_CASE("positive query scaling keeps the order") {
  auto c = riskagent::testing::random_index(9, 200, 8);
  std::vector<float> q{0.3f, -1.2f, 0.7f, 2.0f, 0.1f, -0.4f, 1.1f, 0.9f};
  auto base = c.index.search(q, 200);
  for (float s : {0.25f, 2.0f, 8.0f}) {
    std::vector<float> scaled(q);
    for (auto& x : scaled) x *= s;
    auto hits = c.index.search(scaled, 200);
    REQUIRE(hits.size() == base.size());
    for (std::size_t i = 0; i < hits.size(); ++i) {
      CHECK(hits[i].id == base[i].id);
      CHECK(hits[i].score == base[i].score * s);
    }
  }
}

TEST_CASE("save and load") {
  auto dir = scratch_dir("index");
  HashingEmbedder e(32);
  auto idx = index_build(e, small_registry());
  idx.save(dir / "i.rcix");
  CHECK(VectorIndex::load(dir / "i.rcix") == idx);

  auto bytes = idx.serialize();
  auto bad = bytes;
  bad[0] = 'X';
  CHECK_THROWS_WITH_AS(VectorIndex::deserialize(bad), doctest::Contains("magic"), FormatError);

  // Header claims 5 rows but only 4 are present.
  VectorIndex four(2);
  for (int i = 0; i < 4; ++i) four.add("r" + std::to_string(i), std::vector<float>{1.0f * i, 2.0f});
  auto raw = four.serialize();
  raw[10] = 5;
  try {
    VectorIndex::deserialize(raw);
    FAIL("expected a truncation error");
  } catch (const FormatError& err) {
    CHECK(err.offset() > 14);
    CHECK(std::string(err.what()).find("truncated") != std::string::npos);
  }

  auto cut = std::vector<unsigned char>(bytes.begin(), bytes.end() - 1);
  CHECK_THROWS_AS(VectorIndex::deserialize(cut), FormatError);
}

TEST_CASE("remote embedder against a stub server") {
  httplib::Server server;
  std::string seen_role;
  server.Post("/embed", [&](const httplib::Request& req, httplib::Response& res) {
    auto j = nlohmann::json::parse(req.body);
    seen_role = j["role"];
    nlohmann::json out{{"vectors", nlohmann::json::array()}};
    for (const auto& t : j["texts"]) out["vectors"].push_back({static_cast<double>(t.get<std::string>().size()), 1.0});
    res.set_content(out.dump(), "application/json");
  });
  int port = server.bind_to_any_port("127.0.0.1");
  std::thread th([&] { server.listen_after_bind(); });
  server.wait_until_ready();

  RemoteEmbedder remote("http://127.0.0.1:" + std::to_string(port) + "/embed", "k", 2);
  auto v = remote.embed_query("abcd");
  CHECK(v == Vector{4.0f, 1.0f});
  CHECK(seen_role == "query");
  RemoteEmbedder wrong_dim("http://127.0.0.1:" + std::to_string(port) + "/embed", "k", 3);
  CHECK_THROWS_AS(wrong_dim.embed_doc("x"), EmbeddingError);

  server.stop();
  th.join();
}
