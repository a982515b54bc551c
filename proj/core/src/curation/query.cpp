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


#include "riskagent/curation/query.hpp"

#include <cctype>

#include "riskagent/util/strings.hpp"

namespace riskagent::curation {

namespace {

struct Lexer {
  std::string_view text;
  std::size_t pos = 0;

  std::string next() {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
    if (pos >= text.size()) return {};
    if (text[pos] == '(' || text[pos] == ')') return std::string(1, text[pos++]);
    std::size_t start = pos;
    while (pos < text.size() && std::isalnum(static_cast<unsigned char>(text[pos]))) ++pos;
    if (start == pos) throw QueryError("unexpected character '" + std::string(1, text[pos]) + "' in query");
    return std::string(text.substr(start, pos - start));
  }
};

class Parser {
 public:
  explicit Parser(std::string_view text) : lex_{text} { advance(); }

  BooleanQuery::Node parse() {
    auto n = parse_or();
    if (!tok_.empty()) throw QueryError("unexpected '" + tok_ + "' in query");
    return n;
  }

 private:
  Lexer lex_;
  std::string tok_;

  void advance() { tok_ = lex_.next(); }
  bool is_op(const char* op) const { return util::to_lower(tok_) == util::to_lower(op); }

  BooleanQuery::Node parse_or() {
    BooleanQuery::Node n{BooleanQuery::Node::Kind::any, {}, {parse_and()}};
    while (is_op("or")) {
      advance();
      n.kids.push_back(parse_and());
    }
    return n.kids.size() == 1 ? n.kids[0] : n;
  }

  BooleanQuery::Node parse_and() {
    BooleanQuery::Node n{BooleanQuery::Node::Kind::all, {}, {parse_atom()}};
    while (is_op("and")) {
      advance();
      n.kids.push_back(parse_atom());
    }
    return n.kids.size() == 1 ? n.kids[0] : n;
  }

  BooleanQuery::Node parse_atom() {
    if (tok_.empty()) throw QueryError("query ends where a term was expected");
    if (tok_ == "(") {
      advance();
      auto n = parse_or();
      if (tok_ != ")") throw QueryError("missing ')' in query");
      advance();
      return n;
    }
    if (tok_ == ")" || is_op("and") || is_op("or")) throw QueryError("expected a term, got '" + tok_ + "'");
    BooleanQuery::Node n{BooleanQuery::Node::Kind::term, util::to_lower(tok_), {}};
    advance();
    return n;
  }
};

bool eval(const BooleanQuery::Node& n, const std::vector<std::string>& words) {
  switch (n.kind) {
    case BooleanQuery::Node::Kind::term:
      for (const auto& w : words)
        if (util::word_matches(w, n.term)) return true;
      return false;
    case BooleanQuery::Node::Kind::all:
      for (const auto& k : n.kids)
        if (!eval(k, words)) return false;
      return true;
    case BooleanQuery::Node::Kind::any:
      for (const auto& k : n.kids)
        if (eval(k, words)) return true;
      return false;
  }
  return false;
}

std::string render(const BooleanQuery::Node& n, bool nested) {
  if (n.kind == BooleanQuery::Node::Kind::term) return n.term;
  std::vector<std::string> parts;
  for (const auto& k : n.kids) parts.push_back(render(k, true));
  std::string s = util::join(parts, n.kind == BooleanQuery::Node::Kind::all ? " AND " : " OR ");
  return nested ? "(" + s + ")" : s;
}

}  // namespace

BooleanQuery BooleanQuery::parse(std::string_view text) {
  BooleanQuery q;
  q.root_ = Parser(text).parse();
  return q;
}

BooleanQuery BooleanQuery::default_screen() {
  return parse("patient AND (risk OR mortality) AND (score OR point OR rule OR calculator)");
}

bool BooleanQuery::matches(std::string_view text) const { return eval(root_, util::words(text)); }

std::string BooleanQuery::to_string() const { return render(root_, false); }

}  // namespace riskagent::curation
