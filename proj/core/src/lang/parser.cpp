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

#include "riskagent/lang/parser.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <map>
#include <set>

namespace riskagent::lang {

namespace {

enum class Tok { ident, number, string, punct, end };

struct Token {
  Tok kind = Tok::end;
  std::string text;
  double number = 0.0;
  SourcePos pos;
};

[[noreturn]] void fail(SourcePos pos, std::string code, std::string message) {
  throw LangError(Diagnostic{pos.line, pos.column, std::move(code), std::move(message)});
}

std::vector<Token> lex(std::string_view src) {
  std::vector<Token> out;
  int line = 1;
  int col = 1;
  std::size_t i = 0;
  auto advance = [&](std::size_t n = 1) {
    for (std::size_t k = 0; k < n && i < src.size(); ++k, ++i) {
      if (src[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
  };
  while (i < src.size()) {
    char c = src[i];
    if (c == '#') {
      while (i < src.size() && src[i] != '\n') advance();
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance();
      continue;
    }
    Token t;
    t.pos = {line, col};
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < src.size() && (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_')) ++j;
      t.kind = Tok::ident;
      t.text = std::string(src.substr(i, j - i));
      advance(j - i);
    } else if (std::isdigit(static_cast<unsigned char>(c)) ||
               (c == '.' && i + 1 < src.size() && std::isdigit(static_cast<unsigned char>(src[i + 1])))) {
      std::size_t j = i;
      while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
      if (j < src.size() && src[j] == '.') {
        ++j;
        while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
      }
      if (j < src.size() && (src[j] == 'e' || src[j] == 'E')) {
        std::size_t k = j + 1;
        if (k < src.size() && (src[k] == '+' || src[k] == '-')) ++k;
        if (k < src.size() && std::isdigit(static_cast<unsigned char>(src[k]))) {
          while (k < src.size() && std::isdigit(static_cast<unsigned char>(src[k]))) ++k;
          j = k;
        } else {
          fail(t.pos, "lexical", "malformed exponent in number literal");
        }
      }
      t.kind = Tok::number;
      t.text = std::string(src.substr(i, j - i));
      auto res = std::from_chars(t.text.data(), t.text.data() + t.text.size(), t.number);
      if (res.ec != std::errc() || !std::isfinite(t.number))
        fail(t.pos, "lexical", "number literal '" + t.text + "' is out of range");
      advance(j - i);
    } else if (c == '"') {
      std::string value;
      std::size_t j = i + 1;
      bool closed = false;
      while (j < src.size()) {
        if (src[j] == '\n') break;
        if (src[j] == '\\' && j + 1 < src.size()) {
          value += src[j + 1];
          j += 2;
          continue;
        }
        if (src[j] == '"') {
          closed = true;
          break;
        }
        value += src[j++];
      }
      if (!closed) fail(t.pos, "lexical", "unterminated string literal");
      t.kind = Tok::string;
      t.text = std::move(value);
      advance(j + 1 - i);
    } else {
      static const std::string_view two[] = {"<=", ">=", "==", "!="};
      t.kind = Tok::punct;
      for (auto op : two) {
        if (src.substr(i, 2) == op) t.text = std::string(op);
      }
      if (t.text.empty()) {
        if (std::string_view("()[]{},;:?+-*/<>=").find(c) == std::string_view::npos) {
          std::string shown(1, c);
          if (static_cast<unsigned char>(c) >= 0x80) shown = "non-ASCII byte";
          fail(t.pos, "lexical", "unexpected character '" + shown + "'");
        }
        t.text = std::string(1, c);
      }
      advance(t.text.size());
    }
    out.push_back(std::move(t));
  }
  Token end;
  end.kind = Tok::end;
  end.pos = {line, col};
  out.push_back(end);
  return out;
}

const std::set<std::string, std::less<>> kReserved{"param", "let", "output", "and", "or",
                                                    "not",   "true", "false"};

std::string describe(const Token& t) {
  switch (t.kind) {
    case Tok::end: return "end of input";
    case Tok::string: return "string \"" + t.text + "\"";
    case Tok::number: return "number " + t.text;
    default: return "'" + t.text + "'";
  }
}

class Parser {
 public:
  explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

  Program run() {
    Program prog;
    while (peek().kind != Tok::end) {
      const Token& t = peek();
      if (is_word(t, "param")) {
        prog.params.push_back(param_decl(prog));
      } else if (is_word(t, "let")) {
        prog.lets.push_back(let_decl(prog));
      } else if (is_word(t, "output")) {
        prog.outputs.push_back(output_decl());
      } else {
        fail(t.pos, "syntax", "expected 'param', 'let' or 'output' but found " + describe(t));
      }
    }
    if (prog.outputs.empty()) fail(peek().pos, "syntax", "program declares no output");
    return prog;
  }

 private:
  struct Symbol {
    bool is_let = false;
    int slot = -1;
  };

  std::vector<Token> toks_;
  std::size_t at_ = 0;
  std::map<std::string, Symbol, std::less<>> symbols_;
  std::set<std::string, std::less<>> outputs_;

  const Token& peek(std::size_t ahead = 0) const {
    return toks_[std::min(at_ + ahead, toks_.size() - 1)];
  }
  const Token& next() {
    const Token& t = toks_[at_];
    if (at_ + 1 < toks_.size()) ++at_;
    return t;
  }
  static bool is_word(const Token& t, std::string_view w) { return t.kind == Tok::ident && t.text == w; }
  static bool is_punct(const Token& t, std::string_view p) { return t.kind == Tok::punct && t.text == p; }

  void expect_punct(std::string_view p, std::string_view context) {
    if (!is_punct(peek(), p))
      fail(peek().pos, "syntax",
           "expected '" + std::string(p) + "' " + std::string(context) + " but found " + describe(peek()));
    next();
  }

  std::string identifier(std::string_view context) {
    const Token& t = peek();
    if (t.kind != Tok::ident)
      fail(t.pos, "syntax", "expected identifier " + std::string(context) + " but found " + describe(t));
    if (kReserved.count(t.text))
      fail(t.pos, "syntax", "'" + t.text + "' is a reserved word and cannot be used as a name");
    return next().text;
  }

  void declare(const std::string& name, SourcePos pos, Symbol sym) {
    if (symbols_.count(name) || outputs_.count(name))
      fail(pos, "scope", "duplicate declaration of '" + name + "'");
    symbols_.emplace(name, sym);
  }

  double signed_number(std::string_view context) {
    bool neg = false;
    if (is_punct(peek(), "-")) {
      next();
      neg = true;
    }
    if (peek().kind != Tok::number)
      fail(peek().pos, "syntax", "expected number " + std::string(context) + " but found " + describe(peek()));
    double v = next().number;
    return neg ? -v : v;
  }

  ParamDecl param_decl(const Program& prog) {
    next();  // param
    ParamDecl decl;
    decl.pos = peek().pos;
    decl.name = identifier("after 'param'");
    expect_punct(":", "after parameter name");
    const Token& kind = peek();
    if (is_word(kind, "boolean")) {
      decl.kind = ParamKind::boolean;
    } else if (is_word(kind, "number")) {
      decl.kind = ParamKind::number;
    } else if (is_word(kind, "enum")) {
      decl.kind = ParamKind::enumeration;
    } else {
      fail(kind.pos, "syntax", "expected parameter kind (boolean, number or enum) but found " + describe(kind));
    }
    next();
    if (is_word(peek(), "unit")) {
      if (decl.kind != ParamKind::number) fail(peek().pos, "syntax", "only number parameters may declare a unit");
      next();
      if (peek().kind != Tok::string) fail(peek().pos, "syntax", "expected unit string but found " + describe(peek()));
      decl.unit = next().text;
    }
    if (is_word(peek(), "in")) {
      next();
      if (decl.kind == ParamKind::boolean) fail(peek().pos, "syntax", "boolean parameters cannot declare a domain");
      if (decl.kind == ParamKind::number) {
        NumberDomain dom;
        SourcePos dpos = peek().pos;
        if (is_punct(peek(), "[")) {
          next();
          dom.min = signed_number("as domain lower bound");
          expect_punct(",", "between domain bounds");
          dom.max = signed_number("as domain upper bound");
          expect_punct("]", "to close the domain");
          if (dom.min > dom.max) fail(dpos, "syntax", "domain of '" + decl.name + "' has min greater than max");
        } else if (is_punct(peek(), "{")) {
          next();
          do {
            dom.values.push_back(signed_number("in value set"));
          } while (is_punct(peek(), ",") && (next(), true));
          expect_punct("}", "to close the value set");
          std::sort(dom.values.begin(), dom.values.end());
          if (std::adjacent_find(dom.values.begin(), dom.values.end()) != dom.values.end())
            fail(dpos, "syntax", "value set of '" + decl.name + "' repeats a value");
          dom.min = dom.values.front();
          dom.max = dom.values.back();
        } else {
          fail(peek().pos, "syntax", "expected '[' or '{' to start a domain but found " + describe(peek()));
        }
        decl.domain = std::move(dom);
      } else {
        SourcePos dpos = peek().pos;
        expect_punct("{", "to start the label set");
        do {
          const Token& l = peek();
          if (l.kind != Tok::ident && l.kind != Tok::string)
            fail(l.pos, "syntax", "expected enum label but found " + describe(l));
          std::string label = next().text;
          if (decl.has_label(label)) fail(l.pos, "syntax", "enum label '" + label + "' is repeated");
          decl.labels.push_back(std::move(label));
        } while (is_punct(peek(), ",") && (next(), true));
        expect_punct("}", "to close the label set");
        (void)dpos;
      }
    }
    if (decl.kind == ParamKind::enumeration && decl.labels.empty())
      fail(decl.pos, "syntax", "enum parameter '" + decl.name + "' needs a label set: in {a, b, ...}");
    expect_punct(";", "after parameter declaration");
    declare(decl.name, decl.pos, Symbol{false, static_cast<int>(prog.params.size())});
    return decl;
  }

  LetDecl let_decl(const Program& prog) {
    next();  // let
    LetDecl decl;
    decl.pos = peek().pos;
    decl.name = identifier("after 'let'");
    expect_punct("=", "after let name");
    decl.value = expression();
    expect_punct(";", "after let expression");
    declare(decl.name, decl.pos, Symbol{true, static_cast<int>(prog.lets.size())});
    return decl;
  }

  OutputDecl output_decl() {
    next();  // output
    OutputDecl decl;
    decl.pos = peek().pos;
    decl.name = identifier("after 'output'");
    expect_punct("=", "after output name");
    decl.value = expression();
    if (is_word(peek(), "range")) {
      SourcePos rpos = next().pos;
      expect_punct("[", "to start the output range");
      OutputRange r;
      r.min = signed_number("as range lower bound");
      expect_punct(",", "between range bounds");
      r.max = signed_number("as range upper bound");
      expect_punct("]", "to close the output range");
      if (r.min > r.max) fail(rpos, "syntax", "range of output '" + decl.name + "' has min greater than max");
      decl.range = r;
    }
    expect_punct(";", "after output expression");
    if (symbols_.count(decl.name) || outputs_.count(decl.name))
      fail(decl.pos, "scope", "duplicate declaration of '" + decl.name + "'");
    outputs_.insert(decl.name);
    return decl;
  }

  bool starts_operand(const Token& t) const {
    switch (t.kind) {
      case Tok::number:
      case Tok::string: return true;
      case Tok::ident: return !kReserved.count(t.text) || t.text == "true" || t.text == "false" || t.text == "not";
      case Tok::punct: return t.text == "(" || t.text == "-";
      case Tok::end: return false;
    }
    return false;
  }

  void require_operand(const Token& op) {
    if (!starts_operand(peek()))
      fail(op.pos, "syntax", "expected an operand after '" + op.text + "' but found " + describe(peek()));
  }

  static ExprPtr make_binary(BinaryOp op, SourcePos pos, ExprPtr lhs, ExprPtr rhs) {
    auto e = std::make_shared<Expr>();
    e->kind = Expr::Kind::binary;
    e->binary_op = op;
    e->pos = pos;
    e->args = {std::move(lhs), std::move(rhs)};
    return e;
  }

  ExprPtr expression() {
    if (!starts_operand(peek())) fail(peek().pos, "syntax", "expected an expression but found " + describe(peek()));
    return conditional();
  }

  ExprPtr conditional() {
    auto cond = or_expr();
    if (!is_punct(peek(), "?")) return cond;
    const Token& q = next();
    require_operand(q);
    auto then_e = conditional();
    if (!is_punct(peek(), ":"))
      fail(peek().pos, "syntax", "expected ':' in conditional expression but found " + describe(peek()));
    const Token& colon = next();
    require_operand(colon);
    auto else_e = conditional();
    auto e = std::make_shared<Expr>();
    e->kind = Expr::Kind::conditional;
    e->pos = q.pos;
    e->args = {std::move(cond), std::move(then_e), std::move(else_e)};
    return e;
  }

  ExprPtr or_expr() {
    auto lhs = and_expr();
    while (is_word(peek(), "or")) {
      const Token& op = next();
      require_operand(op);
      lhs = make_binary(BinaryOp::logical_or, op.pos, lhs, and_expr());
    }
    return lhs;
  }

  ExprPtr and_expr() {
    auto lhs = not_expr();
    while (is_word(peek(), "and")) {
      const Token& op = next();
      require_operand(op);
      lhs = make_binary(BinaryOp::logical_and, op.pos, lhs, not_expr());
    }
    return lhs;
  }

  ExprPtr not_expr() {
    if (is_word(peek(), "not")) {
      const Token& op = next();
      require_operand(op);
      auto e = std::make_shared<Expr>();
      e->kind = Expr::Kind::unary;
      e->unary_op = UnaryOp::logical_not;
      e->pos = op.pos;
      e->args = {not_expr()};
      return e;
    }
    return comparison();
  }

  static std::optional<BinaryOp> comparison_op(const Token& t) {
    if (t.kind != Tok::punct) return std::nullopt;
    if (t.text == "<") return BinaryOp::lt;
    if (t.text == "<=") return BinaryOp::le;
    if (t.text == ">") return BinaryOp::gt;
    if (t.text == ">=") return BinaryOp::ge;
    if (t.text == "==") return BinaryOp::eq;
    if (t.text == "!=") return BinaryOp::ne;
    return std::nullopt;
  }

  ExprPtr comparison() {
    auto lhs = additive();
    if (auto op = comparison_op(peek())) {
      const Token& t = next();
      require_operand(t);
      lhs = make_binary(*op, t.pos, lhs, additive());
      if (comparison_op(peek()))
        fail(peek().pos, "syntax", "comparison operators do not chain; use 'and'");
    } else if (is_punct(peek(), "=")) {
      fail(peek().pos, "syntax", "'=' is not a comparison; use '=='");
    }
    return lhs;
  }

  ExprPtr additive() {
    auto lhs = multiplicative();
    while (is_punct(peek(), "+") || is_punct(peek(), "-")) {
      const Token& op = next();
      require_operand(op);
      lhs = make_binary(op.text == "+" ? BinaryOp::add : BinaryOp::sub, op.pos, lhs, multiplicative());
    }
    return lhs;
  }

  ExprPtr multiplicative() {
    auto lhs = unary();
    while (is_punct(peek(), "*") || is_punct(peek(), "/")) {
      const Token& op = next();
      require_operand(op);
      lhs = make_binary(op.text == "*" ? BinaryOp::mul : BinaryOp::div, op.pos, lhs, unary());
    }
    return lhs;
  }

  ExprPtr unary() {
    if (is_punct(peek(), "-")) {
      const Token& op = next();
      if (is_word(peek(), "not") || !starts_operand(peek()))
        fail(op.pos, "syntax", "expected an operand after '-' but found " + describe(peek()));
      auto e = std::make_shared<Expr>();
      e->kind = Expr::Kind::unary;
      e->unary_op = UnaryOp::negate;
      e->pos = op.pos;
      e->args = {unary()};
      return e;
    }
    return primary();
  }

  ExprPtr primary() {
    const Token& t = peek();
    auto e = std::make_shared<Expr>();
    e->pos = t.pos;
    if (t.kind == Tok::number) {
      e->kind = Expr::Kind::number;
      e->number = next().number;
      return e;
    }
    if (t.kind == Tok::string) {
      e->kind = Expr::Kind::label;
      e->text = next().text;
      return e;
    }
    if (is_punct(t, "(")) {
      next();
      auto inner = expression();
      expect_punct(")", "to close parenthesis");
      return inner;
    }
    if (t.kind == Tok::ident) {
      if (t.text == "true" || t.text == "false") {
        e->kind = Expr::Kind::boolean;
        e->boolean = next().text == "true";
        return e;
      }
      if (kReserved.count(t.text))
        fail(t.pos, "syntax", "expected an operand but found reserved word '" + t.text + "'");
      std::string name = next().text;
      if (is_punct(peek(), "(")) {
        auto fn = builtin_from_name(name);
        if (!fn) fail(t.pos, "scope", "unknown function '" + name + "'");
        next();
        e->kind = Expr::Kind::call;
        e->fn = *fn;
        e->text = name;
        if (!is_punct(peek(), ")")) {
          do {
            e->args.push_back(expression());
          } while (is_punct(peek(), ",") && (next(), true));
        }
        expect_punct(")", "to close the argument list of '" + name + "'");
        if (static_cast<int>(e->args.size()) != arity(*fn))
          fail(t.pos, "syntax",
               "function '" + name + "' takes " + std::to_string(arity(*fn)) + " argument(s), got " +
                   std::to_string(e->args.size()));
        return e;
      }
      auto sym = symbols_.find(name);
      if (sym == symbols_.end()) {
        if (outputs_.count(name))
          fail(t.pos, "scope", "output '" + name + "' cannot be referenced; declare it with 'let'");
        fail(t.pos, "scope", "undeclared identifier '" + name + "'");
      }
      e->kind = Expr::Kind::ident;
      e->text = name;
      e->is_let = sym->second.is_let;
      e->slot = sym->second.slot;
      return e;
    }
    fail(t.pos, "syntax", "expected an operand but found " + describe(t));
  }
};

// ---------------------------------------------------------------------------
// Type checking

struct TypeInfo {
  ValueType type = ValueType::number;
  const std::vector<std::string>* labels = nullptr;  // enums and label literals
};

class Checker {
 public:
  explicit Checker(const Program& p) : prog_(p) {}

  std::vector<Diagnostic> run() {
    for (const auto& l : prog_.lets) {
      auto t = check(*l.value);
      if (t && t->type == ValueType::label) {
        diag(l.value->pos, "let '" + l.name + "' cannot hold a bare label literal; compare it with an enum value");
        t.reset();
      }
      lets_.push_back(t);
    }
    for (const auto& o : prog_.outputs) {
      auto t = check(*o.value);
      if (t && t->type != ValueType::number && t->type != ValueType::boolean)
        diag(o.value->pos, "output '" + o.name + "' must be number or boolean, got " +
                               std::string(to_string(t->type)));
    }
    return std::move(diags_);
  }

  std::vector<ValueType> let_types() {
    run();
    std::vector<ValueType> out;
    for (const auto& t : lets_) out.push_back(t ? t->type : ValueType::number);
    return out;
  }

 private:
  const Program& prog_;
  std::vector<std::optional<TypeInfo>> lets_;
  std::vector<Diagnostic> diags_;
  std::vector<std::unique_ptr<std::vector<std::string>>> literal_sets_;

  void diag(SourcePos pos, std::string message) {
    diags_.push_back(Diagnostic{pos.line, pos.column, "type", std::move(message)});
  }

  static std::string side(std::size_t i) { return i == 0 ? "left" : "right"; }

  // nullopt means an error was already reported below this node.
  std::optional<TypeInfo> check(const Expr& e) {
    switch (e.kind) {
      case Expr::Kind::number: return TypeInfo{ValueType::number};
      case Expr::Kind::boolean: return TypeInfo{ValueType::boolean};
      case Expr::Kind::label: {
        literal_sets_.push_back(std::make_unique<std::vector<std::string>>(1, e.text));
        return TypeInfo{ValueType::label, literal_sets_.back().get()};
      }
      case Expr::Kind::ident: {
        if (e.is_let) return lets_.at(static_cast<std::size_t>(e.slot));
        const auto& p = prog_.params.at(static_cast<std::size_t>(e.slot));
        switch (p.kind) {
          case ParamKind::boolean: return TypeInfo{ValueType::boolean};
          case ParamKind::number: return TypeInfo{ValueType::number};
          case ParamKind::enumeration: return TypeInfo{ValueType::enumeration, &p.labels};
        }
        return std::nullopt;
      }
      case Expr::Kind::unary: {
        auto t = check(*e.args[0]);
        if (!t) return std::nullopt;
        ValueType want = e.unary_op == UnaryOp::negate ? ValueType::number : ValueType::boolean;
        if (t->type != want) {
          diag(e.pos, "operator '" + std::string(to_string(e.unary_op)) + "' expects a " +
                          std::string(to_string(want)) + " operand, got " + std::string(to_string(t->type)));
          return std::nullopt;
        }
        return TypeInfo{want};
      }
      case Expr::Kind::binary: return check_binary(e);
      case Expr::Kind::conditional: {
        auto c = check(*e.args[0]);
        auto a = check(*e.args[1]);
        auto b = check(*e.args[2]);
        bool ok = true;
        if (c && c->type != ValueType::boolean) {
          diag(e.args[0]->pos, "condition of '?' must be boolean, got " + std::string(to_string(c->type)));
          ok = false;
        }
        if (!a || !b || !ok) return std::nullopt;
        if (a->type == ValueType::label || b->type == ValueType::label) {
          diag(e.pos, "conditional arms cannot be bare label literals");
          return std::nullopt;
        }
        if (a->type != b->type) {
          diag(e.pos, "conditional arms must share a type, got " + std::string(to_string(a->type)) + " and " +
                          std::string(to_string(b->type)));
          return std::nullopt;
        }
        if (a->type == ValueType::enumeration && *a->labels != *b->labels) {
          diag(e.pos, "conditional arms are values of different enums");
          return std::nullopt;
        }
        return a;
      }
      case Expr::Kind::call: {
        bool ok = true;
        for (std::size_t i = 0; i < e.args.size(); ++i) {
          auto t = check(*e.args[i]);
          if (!t) {
            ok = false;
          } else if (t->type != ValueType::number) {
            diag(e.args[i]->pos, "argument " + std::to_string(i + 1) + " of '" + std::string(to_string(e.fn)) +
                                     "' must be number, got " + std::string(to_string(t->type)));
            ok = false;
          }
        }
        if (!ok) return std::nullopt;
        return TypeInfo{ValueType::number};
      }
    }
    return std::nullopt;
  }

  std::optional<TypeInfo> check_binary(const Expr& e) {
    auto l = check(*e.args[0]);
    auto r = check(*e.args[1]);
    if (!l || !r) return std::nullopt;
    std::string op(to_string(e.binary_op));
    auto expect_both = [&](ValueType want, ValueType result) -> std::optional<TypeInfo> {
      bool ok = true;
      const TypeInfo* ts[2] = {&*l, &*r};
      for (std::size_t i = 0; i < 2; ++i) {
        if (ts[i]->type != want) {
          diag(e.pos, "operator '" + op + "' expects " + std::string(to_string(want)) + " operands, but the " +
                          side(i) + " operand is " + std::string(to_string(ts[i]->type)));
          ok = false;
        }
      }
      if (!ok) return std::nullopt;
      return TypeInfo{result};
    };
    switch (e.binary_op) {
      case BinaryOp::add:
      case BinaryOp::sub:
      case BinaryOp::mul:
      case BinaryOp::div: return expect_both(ValueType::number, ValueType::number);
      case BinaryOp::lt:
      case BinaryOp::le:
      case BinaryOp::gt:
      case BinaryOp::ge: return expect_both(ValueType::number, ValueType::boolean);
      case BinaryOp::logical_and:
      case BinaryOp::logical_or: return expect_both(ValueType::boolean, ValueType::boolean);
      case BinaryOp::eq:
      case BinaryOp::ne: {
        if (l->type == ValueType::number && r->type == ValueType::number) return TypeInfo{ValueType::boolean};
        bool l_enum = l->type == ValueType::enumeration;
        bool r_enum = r->type == ValueType::enumeration;
        if (l_enum && r_enum) {
          if (*l->labels != *r->labels) {
            diag(e.pos, "operator '" + op + "' compares values of different enums");
            return std::nullopt;
          }
          return TypeInfo{ValueType::boolean};
        }
        if ((l_enum && r->type == ValueType::label) || (r_enum && l->type == ValueType::label)) {
          const auto& set = l_enum ? *l->labels : *r->labels;
          const auto& lit = l_enum ? r->labels->front() : l->labels->front();
          if (std::find(set.begin(), set.end(), lit) == set.end()) {
            diag(e.pos, "label \"" + lit + "\" is not a member of the compared enum");
            return std::nullopt;
          }
          return TypeInfo{ValueType::boolean};
        }
        diag(e.pos, "operator '" + op + "' expects two numbers or an enum and one of its labels, got " +
                        std::string(to_string(l->type)) + " and " + std::string(to_string(r->type)));
        return std::nullopt;
      }
    }
    return std::nullopt;
  }
};

}  // namespace

Program parse(std::string_view source) { return Parser(lex(source)).run(); }

std::vector<Diagnostic> typecheck(const Program& program) { return Checker(program).run(); }

std::vector<ValueType> let_types(const Program& program) { return Checker(program).let_types(); }

std::vector<Diagnostic> lint(std::string_view source) {
  try {
    return typecheck(parse(source));
  } catch (const LangError& e) {
    return {e.diagnostic()};
  }
}

}  // namespace riskagent::lang
