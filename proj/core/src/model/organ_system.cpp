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

#include "riskagent/model/organ_system.hpp"

#include <utility>

namespace riskagent::model {

namespace {

struct Entry {
  OrganSystem system;
  std::string_view code;
  std::string_view label;
};

constexpr std::array<Entry, kOrganSystemCount> kTable{{
    {OrganSystem::A02, "A02", "Musculoskeletal"},
    {OrganSystem::A03, "A03", "Digestive"},
    {OrganSystem::A04, "A04", "Respiratory"},
    {OrganSystem::A05, "A05", "Urogenital"},
    {OrganSystem::A06, "A06", "Endocrine"},
    {OrganSystem::A07, "A07", "Cardiovascular"},
    {OrganSystem::A08, "A08", "Nervous"},
    {OrganSystem::A14, "A14", "Stomatognathic"},
    {OrganSystem::A15, "A15", "Hemic and Immune"},
    {OrganSystem::A17, "A17", "Integumentary"},
}};

const Entry& entry(OrganSystem s) { return kTable[static_cast<std::size_t>(s)]; }

}  // namespace

const std::array<OrganSystem, kOrganSystemCount>& all_organ_systems() {
  static const std::array<OrganSystem, kOrganSystemCount> all = [] {
    std::array<OrganSystem, kOrganSystemCount> a{};
    for (std::size_t i = 0; i < kTable.size(); ++i) a[i] = kTable[i].system;
    return a;
  }();
  return all;
}

std::string_view code(OrganSystem s) { return entry(s).code; }
std::string_view label(OrganSystem s) { return entry(s).label; }

std::optional<OrganSystem> organ_system_from_code(std::string_view c) {
  for (const auto& e : kTable)
    if (e.code == c) return e.system;
  return std::nullopt;
}

}  // namespace riskagent::model
