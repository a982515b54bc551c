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

#include "riskagent/lang/ast.hpp"

#include <algorithm>
#include <array>
#include <sstream>
#include <utility>

#include "riskagent/util/strings.hpp"

namespace riskagent::lang {

namespace {

constexpr std::array<std::pair<Builtin, std::string_view>, 11> kBuiltins{{
    {Builtin::exp, "exp"},
    {Builtin::ln, "ln"},
    {Builtin::log10, "log10"},
    {Builtin::sqrt, "sqrt"},
    {Builtin::pow, "pow"},
    {Builtin::abs, "abs"},
    {Builtin::min, "min"},
    {Builtin::max, "max"},
    {Builtin::floor, "floor"},
    {Builtin::ceil, "ceil"},
    {Builtin::round, "round"},
}};

std::string quote(std::string_view s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  out += '"';
  return out;
}

}  // namespace

std::string_view to_string(ValueType t) {
  switch (t) {
    case ValueType::boolean: return "boolean";
    case ValueType::number: return "number";
    case ValueType::enumeration: return "enum";
    case ValueType::label: return "label";
  }
  return "?";
}

std::string_view to_string(ParamKind k) {
  switch (k) {
    case ParamKind::boolean: return "boolean";
    case ParamKind::number: return "number";
    case ParamKind::enumeration: return "enum";
  }
  return "?";
}

std::string_view to_string(UnaryOp op) { return op == UnaryOp::negate ? "-" : "not"; }

std::string_view to_string(BinaryOp op) {
  switch (op) {
    case BinaryOp::add: return "+";
    case BinaryOp::sub: return "-";
    case BinaryOp::mul: return "*";
    case BinaryOp::div: return "/";
    case BinaryOp::lt: return "<";
    case BinaryOp::le: return "<=";
    case BinaryOp::gt: return ">";
    case BinaryOp::ge: return ">=";
    case BinaryOp::eq: return "==";
    case BinaryOp::ne: return "!=";
    case BinaryOp::logical_and: return "and";
    case BinaryOp::logical_or: return "or";
  }
  return "?";
}

std::string_view to_string(Builtin fn) {
  for (auto [b, name] : kBuiltins)
    if (b == fn) return name;
  return "?";
}

int arity(Builtin fn) {
  switch (fn) {
    case Builtin::pow:
    case Builtin::min:
    case Builtin::max: return 2;
    default: return 1;
  }
}

std::optional<Builtin> builtin_from_name(std::string_view name) {
  for (auto [b, n] : kBuiltins)
    if (n == name) return b;
  return std::nullopt;
}

bool NumberDomain::contains(double v) const {
  if (is_finite_set()) return std::binary_search(values.begin(), values.end(), v);
  return v >= min && v <= max;
}

bool ParamDecl::has_label(std::string_view label) const {
  return std::find(labels.begin(), labels.end(), label) != labels.end();
}

const ParamDecl* Program::find_param(std::string_view name) const {
  for (const auto& p : params)
    if (p.name == name) return &p;
  return nullptr;
}

const OutputDecl* Program::find_output(std::string_view name) const {
  for (const auto& o : outputs)
    if (o.name == name) return &o;
  return nullptr;
}

std::string print(const Expr& e) {
  switch (e.kind) {
    case Expr::Kind::number: return util::format_double(e.number);
    case Expr::Kind::boolean: return e.boolean ? "true" : "false";
    case Expr::Kind::label: return quote(e.text);
    case Expr::Kind::ident: return e.text;
    case Expr::Kind::unary:
      if (e.unary_op == UnaryOp::negate) return "-(" + print(*e.args[0]) + ")";
      return "not (" + print(*e.args[0]) + ")";
    case Expr::Kind::binary:
      return "(" + print(*e.args[0]) + " " + std::string(to_string(e.binary_op)) + " " +
             print(*e.args[1]) + ")";
    case Expr::Kind::conditional:
      return "(" + print(*e.args[0]) + " ? " + print(*e.args[1]) + " : " + print(*e.args[2]) +
             ")";
    case Expr::Kind::call: {
      std::string out(to_string(e.fn));
      out += "(";
      for (std::size_t i = 0; i < e.args.size(); ++i) {
        if (i) out += ", ";
        out += print(*e.args[i]);
      }
      return out + ")";
    }
  }
  return {};
}

std::string print(const Program& program) {
  // Declarations are emitted params first, then lets, then outputs. That
  // order is always valid because lets may only refer to earlier names.
  std::ostringstream out;
  for (const auto& p : program.params) {
    out << "param " << p.name << ": " << to_string(p.kind);
    if (p.unit) out << " unit " << quote(*p.unit);
    if (p.kind == ParamKind::number && p.domain) {
      if (p.domain->is_finite_set()) {
        out << " in {";
        for (std::size_t i = 0; i < p.domain->values.size(); ++i)
          out << (i ? ", " : "") << util::format_double(p.domain->values[i]);
        out << "}";
      } else {
        out << " in [" << util::format_double(p.domain->min) << ", "
            << util::format_double(p.domain->max) << "]";
      }
    }
    if (p.kind == ParamKind::enumeration) {
      out << " in {";
      for (std::size_t i = 0; i < p.labels.size(); ++i) out << (i ? ", " : "") << quote(p.labels[i]);
      out << "}";
    }
    out << ";\n";
  }
  for (const auto& l : program.lets) out << "let " << l.name << " = " << print(*l.value) << ";\n";
  for (const auto& o : program.outputs) {
    out << "output " << o.name << " = " << print(*o.value);
    if (o.range)
      out << " range [" << util::format_double(o.range->min) << ", "
          << util::format_double(o.range->max) << "]";
    out << ";\n";
  }
  return out.str();
}

bool structurally_equal(const Expr& a, const Expr& b) {
  if (a.kind != b.kind || a.args.size() != b.args.size()) return false;
  switch (a.kind) {
    case Expr::Kind::number:
      if (a.number != b.number) return false;
      break;
    case Expr::Kind::boolean:
      if (a.boolean != b.boolean) return false;
      break;
    case Expr::Kind::label:
      if (a.text != b.text) return false;
      break;
    case Expr::Kind::ident:
      if (a.text != b.text || a.is_let != b.is_let || a.slot != b.slot) return false;
      break;
    case Expr::Kind::unary:
      if (a.unary_op != b.unary_op) return false;
      break;
    case Expr::Kind::binary:
      if (a.binary_op != b.binary_op) return false;
      break;
    case Expr::Kind::conditional: break;
    case Expr::Kind::call:
      if (a.fn != b.fn) return false;
      break;
  }
  for (std::size_t i = 0; i < a.args.size(); ++i)
    if (!structurally_equal(*a.args[i], *b.args[i])) return false;
  return true;
}

bool structurally_equal(const Program& a, const Program& b) {
  if (a.params.size() != b.params.size() || a.lets.size() != b.lets.size() ||
      a.outputs.size() != b.outputs.size())
    return false;
  for (std::size_t i = 0; i < a.params.size(); ++i) {
    const auto& p = a.params[i];
    const auto& q = b.params[i];
    if (p.name != q.name || p.kind != q.kind || p.unit != q.unit || p.domain != q.domain ||
        p.labels != q.labels)
      return false;
  }
  for (std::size_t i = 0; i < a.lets.size(); ++i)
    if (a.lets[i].name != b.lets[i].name || !structurally_equal(*a.lets[i].value, *b.lets[i].value))
      return false;
  for (std::size_t i = 0; i < a.outputs.size(); ++i)
    if (a.outputs[i].name != b.outputs[i].name || a.outputs[i].range != b.outputs[i].range ||
        !structurally_equal(*a.outputs[i].value, *b.outputs[i].value))
      return false;
  return true;
}

}  // namespace riskagent::lang
