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

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include "riskagent/lang/binding.hpp"

namespace riskagent::agent {

/// Malformed calc block. The message is shown to the model as-is.
class BlockError : public std::runtime_error {
 public:
  BlockError(int line, const std::string& message);
  int line() const noexcept { return line_; }

 private:
  int line_;
};

/// One request to run a calculator.
struct CalcInvocation {
  std::string calculator_id;
  lang::Binding binding;
};

/// Raw text of the first ```calc fenced block, if any. An unterminated
/// fence runs to the end of the reply.
std::optional<std::string> find_calc_block(std::string_view reply);

/// Parses the body of a calc block:
///
///   calculator: <id>
///   name = true | false | 12.5 [unit] | label | "label" | UNKNOWN
///        | [lo, hi] [unit] | {a, b}
///
/// Blank lines and lines starting with '#' are skipped. Throws BlockError.
CalcInvocation parse_calc_block(std::string_view body);

/// Inverse of parse_calc_block, for transcripts.
std::string render_calc_block(const CalcInvocation& inv);

}  // namespace riskagent::agent
