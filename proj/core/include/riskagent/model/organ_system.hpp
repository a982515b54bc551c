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

#include <array>
#include <optional>
#include <string>
#include <string_view>

namespace riskagent::model {

/// MeSH anatomical system categories used to tag calculators.
enum class OrganSystem { A02, A03, A04, A05, A06, A07, A08, A14, A15, A17 };

inline constexpr std::size_t kOrganSystemCount = 10;

const std::array<OrganSystem, kOrganSystemCount>& all_organ_systems();
std::string_view code(OrganSystem s);
std::string_view label(OrganSystem s);
std::optional<OrganSystem> organ_system_from_code(std::string_view code);

}  // namespace riskagent::model
