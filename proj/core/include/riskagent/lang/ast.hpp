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

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "riskagent/lang/diagnostic.hpp"

namespace riskagent::lang {

enum class ValueType { boolean, number, enumeration, label };

std::string_view to_string(ValueType t);

enum class ParamKind { boolean, number, enumeration };

std::string_view to_string(ParamKind k);

/// Declared domain of a numeric parameter: either a closed interval or an
/// explicit finite value set (sorted ascending, unique).
struct NumberDomain {
  double min = 0.0;
  double max = 0.0;
  std::vector<double> values;

  bool is_finite_set() const noexcept { return !values.empty(); }
  bool contains(double v) const;
  bool operator==(const NumberDomain&) const = default;
};

struct ParamDecl {
  std::string name;
  ParamKind kind = ParamKind::boolean;
  std::optional<std::string> unit;
  std::optional<NumberDomain> domain;  // numbers only
  std::vector<std::string> labels;     // enums only, declaration order
  SourcePos pos;

  bool has_label(std::string_view label) const;
};

enum class UnaryOp { negate, logical_not };
enum class BinaryOp { add, sub, mul, div, lt, le, gt, ge, eq, ne, logical_and, logical_or };
enum class Builtin { exp, ln, log10, sqrt, pow, abs, min, max, floor, ceil, round };

std::string_view to_string(UnaryOp op);
std::string_view to_string(BinaryOp op);
std::string_view to_string(Builtin fn);
int arity(Builtin fn);
std::optional<Builtin> builtin_from_name(std::string_view name);

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct Expr {
  enum class Kind { number, boolean, label, ident, unary, binary, conditional, call };

  Kind kind = Kind::number;
  SourcePos pos;
  double number = 0.0;
  bool boolean = false;
  std::string text;  // label literal or identifier name
  bool is_let = false;
  int slot = -1;     // index into params or lets
  UnaryOp unary_op = UnaryOp::negate;
  BinaryOp binary_op = BinaryOp::add;
  Builtin fn = Builtin::exp;
  std::vector<ExprPtr> args;
};

struct LetDecl {
  std::string name;
  ExprPtr value;
  SourcePos pos;
};

struct OutputRange {
  double min = 0.0;
  double max = 0.0;
  bool operator==(const OutputRange&) const = default;
};

struct OutputDecl {
  std::string name;
  ExprPtr value;
  std::optional<OutputRange> range;
  SourcePos pos;
};

struct Program {
  std::vector<ParamDecl> params;
  std::vector<LetDecl> lets;
  std::vector<OutputDecl> outputs;

  const ParamDecl* find_param(std::string_view name) const;
  const OutputDecl* find_output(std::string_view name) const;
};

/// Canonical source rendering; parse(print(p)) is structurally equal to p.
std::string print(const Program& program);
std::string print(const Expr& expr);

bool structurally_equal(const Expr& a, const Expr& b);
bool structurally_equal(const Program& a, const Program& b);

}  // namespace riskagent::lang
