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

#include "riskagent/lang/diagnostic.hpp"

#include <sstream>

namespace riskagent::lang {

std::string Diagnostic::to_string() const {
  std::ostringstream out;
  out << line << ":" << column << ": " << code << " error: " << message;
  return out.str();
}

std::string format_diagnostics(const std::vector<Diagnostic>& diags) {
  std::string text;
  for (const auto& d : diags) {
    if (!text.empty()) text += '\n';
    text += d.to_string();
  }
  return text;
}

LangError::LangError(Diagnostic diag)
    : std::runtime_error(diag.to_string()), diag_(std::move(diag)) {}

BindingError::BindingError(std::string param, const std::string& message)
    : std::runtime_error("binding error for '" + param + "': " + message),
      param_(std::move(param)) {}

EvalError::EvalError(std::string op, std::vector<double> operands, const std::string& message)
    : std::runtime_error(message), op_(std::move(op)), operands_(std::move(operands)) {}

}  // namespace riskagent::lang
