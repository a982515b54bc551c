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

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "riskagent/retrieval/index.hpp"

namespace riskagent::testing {

struct RandomIndexCase {
  retrieval::VectorIndex index;
  std::vector<std::vector<float>> rows;
  std::vector<std::string> ids;
};

/// n random rows of the given dim; every seventh row duplicates an earlier
/// one so that ties occur. Ids are inserted in shuffled order.
inline RandomIndexCase random_index(std::uint64_t seed, std::size_t n, std::size_t dim) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<float> normal(0.0f, 1.0f);
  RandomIndexCase c{retrieval::VectorIndex(dim), {}, {}};
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<float> v(dim);
    if (i % 7 == 6) {
      v = c.rows[rng() % c.rows.size()];
    } else {
      for (auto& x : v) x = normal(rng);
    }
    c.rows.push_back(std::move(v));
    char buf[32];
    std::snprintf(buf, sizeof buf, "c%05zu", i);
    c.ids.emplace_back(buf);
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);
  for (auto i : order) c.index.add(c.ids[i], c.rows[i]);
  return c;
}

/// Scores every row and fully sorts; the reference for search().
inline std::vector<retrieval::RetrievalHit> full_sort(const RandomIndexCase& c, const std::vector<float>& q,
                                                      std::size_t k) {
  std::vector<retrieval::RetrievalHit> all;
  for (std::size_t i = 0; i < c.rows.size(); ++i) {
    double s = 0.0;
    for (std::size_t d = 0; d < q.size(); ++d) s += static_cast<double>(c.rows[i][d]) * static_cast<double>(q[d]);
    all.push_back({c.ids[i], s});
  }
  std::sort(all.begin(), all.end(), [](const auto& a, const auto& b) {
    return a.score > b.score || (a.score == b.score && a.id < b.id);
  });
  all.resize(std::min(k, all.size()));
  return all;
}

}  // namespace riskagent::testing
