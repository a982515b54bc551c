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

#include <stdexcept>
#include <string>
#include <vector>

namespace riskagent::lang {

struct SourcePos {
  int line = 1;
  int column = 1;
};

/// A positioned message from the lexer, parser, scope resolver or type
/// checker. Rendered text is handed to the agent loop verbatim, so the
/// format of to_string() is part of the agent-facing contract.
struct Diagnostic {
  int line = 0;
  int column = 0;
  std::string code;  // lexical | syntax | scope | type
  std::string message;

  std::string to_string() const;
  bool operator==(const Diagnostic&) const = default;
};

std::string format_diagnostics(const std::vector<Diagnostic>& diags);

/// Thrown by parse() for lexical, syntax and scope errors.
class LangError : public std::runtime_error {
 public:
  explicit LangError(Diagnostic diag);
  const Diagnostic& diagnostic() const noexcept { return diag_; }

 private:
  Diagnostic diag_;
};

/// A binding does not fit the program's parameter declarations.
class BindingError : public std::runtime_error {
 public:
  BindingError(std::string param, const std::string& message);
  const std::string& param() const noexcept { return param_; }

 private:
  std::string param_;
};

/// Arithmetic domain failure (division by zero, log of non-positive, ...).
/// Carries the offending operation and its operand values.
class EvalError : public std::runtime_error {
 public:
  EvalError(std::string op, std::vector<double> operands, const std::string& message);
  const std::string& op() const noexcept { return op_; }
  const std::vector<double>& operands() const noexcept { return operands_; }

 private:
  std::string op_;
  std::vector<double> operands_;
};

}  // namespace riskagent::lang
