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


#include "riskagent/retrieval/index.hpp"

#include <algorithm>
#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>
#include <set>

#include "riskagent/model/validate.hpp"

namespace riskagent::retrieval {

namespace {

constexpr unsigned char kMagic[4] = {'R', 'C', 'I', 'X'};
constexpr std::uint16_t kVersion = 1;

void put_u16(std::vector<unsigned char>& out, std::uint16_t v) {
  out.push_back(static_cast<unsigned char>(v & 0xff));
  out.push_back(static_cast<unsigned char>(v >> 8));
}

void put_u32(std::vector<unsigned char>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<unsigned char>((v >> (8 * i)) & 0xff));
}

class Reader {
 public:
  explicit Reader(std::span<const unsigned char> bytes) : bytes_(bytes) {}

  void need(std::size_t n, const char* what) const {
    if (bytes_.size() - pos_ < n)
      throw FormatError(pos_, std::string("truncated ") + what + ": need " + std::to_string(n) + " bytes, " +
                                  std::to_string(bytes_.size() - pos_) + " left");
  }
  std::uint16_t u16(const char* what) {
    need(2, what);
    std::uint16_t v = static_cast<std::uint16_t>(bytes_[pos_] | (bytes_[pos_ + 1] << 8));
    pos_ += 2;
    return v;
  }
  std::uint32_t u32(const char* what) {
    need(4, what);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(bytes_[pos_ + i]) << (8 * i);
    pos_ += 4;
    return v;
  }
  std::span<const unsigned char> take(std::size_t n, const char* what) {
    need(n, what);
    auto s = bytes_.subspan(pos_, n);
    pos_ += n;
    return s;
  }
  std::size_t pos() const noexcept { return pos_; }
  std::size_t remaining() const noexcept { return bytes_.size() - pos_; }

 private:
  std::span<const unsigned char> bytes_;
  std::size_t pos_ = 0;
};

bool hit_before(const RetrievalHit& a, const RetrievalHit& b) {
  if (a.score != b.score) return a.score > b.score;
  return a.id < b.id;
}

}  // namespace

FormatError::FormatError(std::size_t offset, const std::string& message)
    : IndexError("index format error at byte " + std::to_string(offset) + ": " + message), offset_(offset) {}

void VectorIndex::add(std::string id, std::span<const float> row) {
  if (row.size() != dim_)
    throw IndexError("dimension mismatch: index dim " + std::to_string(dim_) + ", row dim " + std::to_string(row.size()));
  if (std::find(ids_.begin(), ids_.end(), id) != ids_.end()) throw IndexError("duplicate index id '" + id + "'");
  ids_.push_back(std::move(id));
  rows_.insert(rows_.end(), row.begin(), row.end());
}

std::span<const float> VectorIndex::row(std::size_t i) const {
  return std::span<const float>(rows_).subspan(i * dim_, dim_);
}

std::vector<RetrievalHit> VectorIndex::search(std::span<const float> query, std::size_t k) const {
  if (query.size() != dim_)
    throw IndexError("dimension mismatch: index dim " + std::to_string(dim_) + ", query dim " +
                     std::to_string(query.size()));
  std::vector<RetrievalHit> hits;
  hits.reserve(ids_.size());
  for (std::size_t i = 0; i < ids_.size(); ++i) {
    const float* r = rows_.data() + i * dim_;
    double s = 0.0;
    for (std::size_t d = 0; d < dim_; ++d) s += static_cast<double>(r[d]) * static_cast<double>(query[d]);
    hits.push_back({ids_[i], s});
  }
  k = std::min(k, hits.size());
  std::partial_sort(hits.begin(), hits.begin() + static_cast<std::ptrdiff_t>(k), hits.end(), hit_before);
  hits.resize(k);
  return hits;
}

std::vector<unsigned char> VectorIndex::serialize() const {
  std::vector<unsigned char> out(std::begin(kMagic), std::end(kMagic));
  put_u16(out, kVersion);
  put_u32(out, static_cast<std::uint32_t>(dim_));
  put_u32(out, static_cast<std::uint32_t>(ids_.size()));
  for (float f : rows_) put_u32(out, std::bit_cast<std::uint32_t>(f));
  for (const auto& id : ids_) {
    put_u32(out, static_cast<std::uint32_t>(id.size()));
    out.insert(out.end(), id.begin(), id.end());
  }
  return out;
}

VectorIndex VectorIndex::deserialize(std::span<const unsigned char> bytes) {
  Reader r(bytes);
  auto magic = r.take(4, "header");
  if (!std::equal(magic.begin(), magic.end(), std::begin(kMagic))) throw FormatError(0, "bad magic bytes");
  auto version = r.u16("header");
  if (version != kVersion) throw FormatError(4, "unsupported version " + std::to_string(version));
  std::uint32_t dim = r.u32("header");
  std::uint32_t count = r.u32("header");
  std::size_t payload = static_cast<std::size_t>(dim) * count * 4;
  if (r.remaining() < payload)
    throw FormatError(r.pos(), "truncated payload: header declares " + std::to_string(count) + " rows of dim " +
                                   std::to_string(dim) + " (" + std::to_string(payload) + " bytes), " +
                                   std::to_string(r.remaining()) + " bytes present");
  VectorIndex index(dim);
  index.rows_.resize(static_cast<std::size_t>(dim) * count);
  for (auto& f : index.rows_) f = std::bit_cast<float>(r.u32("row data"));
  std::set<std::string> seen;
  for (std::uint32_t i = 0; i < count; ++i) {
    std::size_t at = r.pos();
    auto len = r.u32("id table");
    auto raw = r.take(len, "id table");
    std::string id(raw.begin(), raw.end());
    if (!seen.insert(id).second) throw FormatError(at, "duplicate id '" + id + "'");
    index.ids_.push_back(std::move(id));
  }
  if (r.remaining() != 0) throw FormatError(r.pos(), "trailing bytes after id table");
  return index;
}

void VectorIndex::save(const std::filesystem::path& path) const {
  auto bytes = serialize();
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IndexError("cannot write " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IndexError("write failed for " + path.string());
}

VectorIndex VectorIndex::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IndexError("cannot read " + path.string());
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return deserialize(bytes);
}

bool VectorIndex::operator==(const VectorIndex& other) const {
  return dim_ == other.dim_ && ids_ == other.ids_ && rows_.size() == other.rows_.size() &&
         std::memcmp(rows_.data(), other.rows_.data(), rows_.size() * sizeof(float)) == 0;
}

std::string_view to_string(TextSource s) { return s == TextSource::raw_abstract ? "raw_abstract" : "digest"; }

TextSource text_source_from_string(std::string_view s) {
  if (s == "raw_abstract") return TextSource::raw_abstract;
  if (s == "digest") return TextSource::digest;
  throw std::invalid_argument("unknown text source '" + std::string(s) + "' (expected raw_abstract or digest)");
}

std::string document_text(const model::Registry& registry, const model::Calculator& calc, TextSource source) {
  if (source == TextSource::digest) return model::digest(calc).text;
  const auto* rec = registry.abstract_for(calc.pmid);
  if (!rec) throw IndexError("no source abstract for calculator '" + calc.id + "' (pmid " + calc.pmid + ")");
  return rec->title + "\n" + rec->abstract;
}

VectorIndex index_build(EmbeddingProvider& provider, const model::Registry& registry, TextSource source) {
  VectorIndex index(provider.dim());
  for (const auto* calc : registry.verified()) {
    std::string text = document_text(registry, *calc, source);
    Vector v;
    try {
      v = provider.embed_doc(text);
    } catch (const std::exception& e) {
      throw IndexError("embedding failed for calculator '" + calc->id + "': " + e.what());
    }
    index.add(calc->id, v);
  }
  return index;
}

}  // namespace riskagent::retrieval
