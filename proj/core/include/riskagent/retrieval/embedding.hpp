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
#include <cstdint>
#include <map>
#include <mutex>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace riskagent::retrieval {

using Vector = std::vector<float>;

enum class EmbedRole { doc, query };

std::string_view to_string(EmbedRole role);

class EmbeddingError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Maps text to fixed-length vectors. Documents and queries may be encoded
/// differently. Calls are serialized when concurrent() is false.
class EmbeddingProvider {
 public:
  virtual ~EmbeddingProvider() = default;

  virtual std::size_t dim() const = 0;
  virtual bool concurrent() const { return true; }

  std::vector<Vector> embed(const std::vector<std::string>& texts, EmbedRole role);
  Vector embed_doc(const std::string& text);
  Vector embed_query(const std::string& text);

 protected:
  virtual std::vector<Vector> do_embed(const std::vector<std::string>& texts, EmbedRole role) = 0;

 private:
  std::mutex mu_;
};

/// Seeded feature hashing over lower-cased word tokens, L2-normalised.
/// Offline and deterministic; the same encoder serves both roles.
class HashingEmbedder : public EmbeddingProvider {
 public:
  explicit HashingEmbedder(std::size_t dim = 256, std::uint64_t seed = 0);
  std::size_t dim() const override { return dim_; }

 protected:
  std::vector<Vector> do_embed(const std::vector<std::string>& texts, EmbedRole role) override;

 private:
  std::size_t dim_;
  std::uint64_t seed_;
};

/// Returns preset vectors keyed by exact text; unknown text is an error.
class FixedEmbedder : public EmbeddingProvider {
 public:
  explicit FixedEmbedder(std::size_t dim) : dim_(dim) {}
  void set(std::string text, Vector v);
  std::size_t dim() const override { return dim_; }

 protected:
  std::vector<Vector> do_embed(const std::vector<std::string>& texts, EmbedRole role) override;

 private:
  std::size_t dim_;
  std::map<std::string, Vector, std::less<>> table_;
};

/// POSTs {texts, role} to an embeddings endpoint and reads {vectors}.
class RemoteEmbedder : public EmbeddingProvider {
 public:
  RemoteEmbedder(std::string url, std::string api_key, std::size_t dim, bool concurrent = false);
  std::size_t dim() const override { return dim_; }
  bool concurrent() const override { return concurrent_; }

 protected:
  std::vector<Vector> do_embed(const std::vector<std::string>& texts, EmbedRole role) override;

 private:
  std::string url_;
  std::string api_key_;
  std::size_t dim_;
  bool concurrent_;
};

}  // namespace riskagent::retrieval
