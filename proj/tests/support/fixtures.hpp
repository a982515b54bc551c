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

#include <filesystem>
#include <string>

#include "riskagent/lang/binding.hpp"
#include "program_gen.hpp"

namespace riskagent::testing {

inline std::filesystem::path fixture(const std::string& rel) {
  return std::filesystem::path(RISKAGENT_FIXTURE_DIR) / rel;
}

/// Fresh scratch directory under the build tree, emptied on creation.
inline std::filesystem::path scratch_dir(const std::string& name) {
  auto p = std::filesystem::path(RISKAGENT_SCRATCH_DIR) / name;
  std::filesystem::remove_all(p);
  std::filesystem::create_directories(p);
  return p;
}

inline lang::BindingEntry to_entry(const RefValue& v) {
  if (const bool* b = std::get_if<bool>(&v)) return lang::BindingEntry::exact_bool(*b);
  if (const double* d = std::get_if<double>(&v)) return lang::BindingEntry::exact_number(*d);
  return lang::BindingEntry::exact_label(std::get<std::string>(v));
}

inline lang::Binding to_binding(const GenProgram& p, const Assignment& a) {
  lang::Binding b;
  for (std::size_t i = 0; i < p.params.size(); ++i) b[p.params[i].name] = to_entry(a[i]);
  return b;
}

}  // namespace riskagent::testing
