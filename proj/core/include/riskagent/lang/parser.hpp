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

#include <string_view>
#include <vector>

#include "riskagent/lang/ast.hpp"

namespace riskagent::lang {

/// Parses CalcLang source. Identifiers are resolved during parsing, so a
/// reference to an undeclared name is reported here as a scope error.
/// Throws LangError carrying the first diagnostic.
Program parse(std::string_view source);

/// Returns an empty list iff every expression is well typed.
std::vector<Diagnostic> typecheck(const Program& program);

/// Static type of each let, in declaration order. Only meaningful for
/// programs that typecheck.
std::vector<ValueType> let_types(const Program& program);

/// parse + typecheck, collecting everything into one list.
std::vector<Diagnostic> lint(std::string_view source);

}  // namespace riskagent::lang
