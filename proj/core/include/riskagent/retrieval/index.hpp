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
#include <filesystem>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "riskagent/model/registry.hpp"
#include "riskagent/retrieval/embedding.hpp"

namespace riskagent::retrieval {

inline constexpr std::size_t kDefaultTopK = 10;

struct RetrievalHit {
  std::string id;
  double score = 0.0;
  bool operator==(const RetrievalHit&) const = default;
};

class IndexError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Corrupt or truncated index file.
class FormatError : public IndexError {
 public:
  FormatError(std::size_t offset, const std::string& message);
  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

/// Exact dot-product index over a flat row-major matrix. Immutable once
/// built; concurrent searches are safe.
class VectorIndex {
 public:
  explicit VectorIndex(std::size_t dim = 0) : dim_(dim) {}

  void add(std::string id, std::span<const float> row);

  /// Highest dot products first, ties by ascending id. Scores accumulate in
  /// double precision.
  std::vector<RetrievalHit> search(std::span<const float> query, std::size_t k = kDefaultTopK) const;

  std::size_t dim() const noexcept { return dim_; }
  std::size_t size() const noexcept { return ids_.size(); }
  const std::vector<std::string>& ids() const noexcept { return ids_; }
  std::span<const float> row(std::size_t i) const;

  std::vector<unsigned char> serialize() const;
  static VectorIndex deserialize(std::span<const unsigned char> bytes);
  void save(const std::filesystem::path& path) const;
  static VectorIndex load(const std::filesystem::path& path);

  /// Bitwise on every float.
  bool operator==(const VectorIndex& other) const;

 private:
  std::size_t dim_;
  std::vector<std::string> ids_;
  std::vector<float> rows_;
};

enum class TextSource { raw_abstract, digest };

std::string_view to_string(TextSource s);
TextSource text_source_from_string(std::string_view s);

/// One row per verified calculator, in id order.
VectorIndex index_build(EmbeddingProvider& provider, const model::Registry& registry,
                        TextSource source = TextSource::raw_abstract);

/// The text index_build embeds for one calculator.
std::string document_text(const model::Registry& registry, const model::Calculator& calc, TextSource source);

}  // namespace riskagent::retrieval
