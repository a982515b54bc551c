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


#include "riskagent/retrieval/embedding.hpp"

#include <cmath>

#include <nlohmann/json.hpp>

#include "riskagent/util/http.hpp"
#include "riskagent/util/strings.hpp"

namespace riskagent::retrieval {

std::string_view to_string(EmbedRole role) { return role == EmbedRole::doc ? "doc" : "query"; }

std::vector<Vector> EmbeddingProvider::embed(const std::vector<std::string>& texts, EmbedRole role) {
  std::vector<Vector> out;
  if (concurrent()) {
    out = do_embed(texts, role);
  } else {
    std::lock_guard lock(mu_);
    out = do_embed(texts, role);
  }
  if (out.size() != texts.size())
    throw EmbeddingError("provider returned " + std::to_string(out.size()) + " vectors for " +
                         std::to_string(texts.size()) + " texts");
  for (const auto& v : out)
    if (v.size() != dim())
      throw EmbeddingError("provider returned a vector of dim " + std::to_string(v.size()) + ", expected " +
                           std::to_string(dim()));
  return out;
}

Vector EmbeddingProvider::embed_doc(const std::string& text) { return embed({text}, EmbedRole::doc).front(); }

Vector EmbeddingProvider::embed_query(const std::string& text) { return embed({text}, EmbedRole::query).front(); }

HashingEmbedder::HashingEmbedder(std::size_t dim, std::uint64_t seed) : dim_(dim), seed_(seed) {
  if (dim == 0) throw EmbeddingError("embedding dim must be positive");
}

namespace {

std::uint64_t fnv1a(std::string_view s, std::uint64_t seed) {
  std::uint64_t h = 0xcbf29ce484222325ULL ^ (seed * 0x9e3779b97f4a7c15ULL);
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace

std::vector<Vector> HashingEmbedder::do_embed(const std::vector<std::string>& texts, EmbedRole) {
  std::vector<Vector> out;
  out.reserve(texts.size());
  for (const auto& text : texts) {
    std::vector<double> acc(dim_, 0.0);
    for (const auto& w : util::words(text)) {
      auto h = fnv1a(w, seed_);
      acc[h % dim_] += (h >> 63) ? -1.0 : 1.0;
    }
    double norm = 0.0;
    for (double x : acc) norm += x * x;
    norm = std::sqrt(norm);
    Vector v(dim_, 0.0f);
    if (norm > 0)
      for (std::size_t i = 0; i < dim_; ++i) v[i] = static_cast<float>(acc[i] / norm);
    out.push_back(std::move(v));
  }
  return out;
}

void FixedEmbedder::set(std::string text, Vector v) {
  if (v.size() != dim_) throw EmbeddingError("vector dim mismatch for preset text");
  table_[std::move(text)] = std::move(v);
}

std::vector<Vector> FixedEmbedder::do_embed(const std::vector<std::string>& texts, EmbedRole) {
  std::vector<Vector> out;
  for (const auto& t : texts) {
    auto it = table_.find(t);
    if (it == table_.end()) throw EmbeddingError("no preset vector for text \"" + t.substr(0, 40) + "\"");
    out.push_back(it->second);
  }
  return out;
}

RemoteEmbedder::RemoteEmbedder(std::string url, std::string api_key, std::size_t dim, bool concurrent)
    : url_(std::move(url)), api_key_(std::move(api_key)), dim_(dim), concurrent_(concurrent) {}

std::vector<Vector> RemoteEmbedder::do_embed(const std::vector<std::string>& texts, EmbedRole role) {
  nlohmann::json req{{"texts", texts}, {"role", to_string(role)}};
  util::HttpOptions opts;
  if (!api_key_.empty()) opts.headers.emplace_back("Authorization", "Bearer " + api_key_);
  util::HttpResponse res;
  try {
    res = util::http_post_json(url_, req.dump(), opts);
  } catch (const std::exception& e) {
    throw EmbeddingError(e.what());
  }
  if (res.status != 200)
    throw EmbeddingError("embeddings endpoint returned HTTP " + std::to_string(res.status) + ": " +
                         res.body.substr(0, 200));
  try {
    auto j = nlohmann::json::parse(res.body);
    return j.at("vectors").get<std::vector<Vector>>();
  } catch (const nlohmann::json::exception& e) {
    throw EmbeddingError(std::string("unreadable embeddings reply: ") + e.what());
  }
}

}  // namespace riskagent::retrieval
