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

#include "riskagent/agent/calc_block.hpp"

#include <cctype>
#include <cstdlib>

#include "riskagent/util/strings.hpp"

namespace riskagent::agent {

BlockError::BlockError(int line, const std::string& message)
    : std::runtime_error("calc block line " + std::to_string(line) + ": " + message), line_(line) {}

std::optional<std::string> find_calc_block(std::string_view reply) {
  auto fence = reply.find("```calc");
  if (fence == std::string_view::npos) return std::nullopt;
  auto start = reply.find('\n', fence);
  if (start == std::string_view::npos) return std::string();
  auto end = reply.find("```", start + 1);
  if (end == std::string_view::npos) end = reply.size();
  return std::string(reply.substr(start + 1, end - start - 1));
}

namespace {

bool is_name(std::string_view s) {
  if (s.empty() || !(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) return false;
  for (char c : s)
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_')) return false;
  return true;
}

// Leading number of `s`; sets `rest` to what follows it.
std::optional<double> leading_number(std::string_view s, std::string_view& rest) {
  std::string buf(s);
  const char* begin = buf.c_str();
  char* end = nullptr;
  double v = std::strtod(begin, &end);
  if (end == begin) return std::nullopt;
  std::string_view tail = s.substr(static_cast<std::size_t>(end - begin));
  if (!tail.empty() && !std::isspace(static_cast<unsigned char>(tail[0])) && tail[0] != ',' && tail[0] != ']')
    return std::nullopt;
  rest = tail;
  return v;
}

std::optional<std::string> unit_of(std::string_view rest) {
  auto u = util::trim(rest);
  if (u.empty()) return std::nullopt;
  return u;
}

std::string unquote(std::string_view s) {
  auto t = util::trim(s);
  if (t.size() >= 2 && t.front() == '"' && t.back() == '"') return t.substr(1, t.size() - 2);
  return t;
}

lang::BindingEntry parse_value(std::string_view text, int line) {
  auto v = util::trim(text);
  if (v.empty()) throw BlockError(line, "missing value");
  auto lower = util::to_lower(v);
  if (lower == "unknown") return lang::BindingEntry::unknown();
  if (lower == "true") return lang::BindingEntry::exact_bool(true);
  if (lower == "false") return lang::BindingEntry::exact_bool(false);

  if (v.front() == '[') {
    auto close = v.find(']');
    if (close == std::string::npos) throw BlockError(line, "unterminated interval '" + v + "'");
    std::string inner = v.substr(1, close - 1);
    auto comma = inner.find(',');
    if (comma == std::string::npos) throw BlockError(line, "interval needs two bounds: '" + v + "'");
    std::string_view rest;
    auto lo = leading_number(util::trim(inner.substr(0, comma)), rest);
    if (!lo || !util::trim(rest).empty()) throw BlockError(line, "bad interval lower bound in '" + v + "'");
    auto hi = leading_number(util::trim(inner.substr(comma + 1)), rest);
    if (!hi || !util::trim(rest).empty()) throw BlockError(line, "bad interval upper bound in '" + v + "'");
    if (*lo > *hi) throw BlockError(line, "interval lower bound exceeds upper bound in '" + v + "'");
    return lang::BindingEntry::interval(*lo, *hi, unit_of(std::string_view(v).substr(close + 1)));
  }

  if (v.front() == '{') {
    if (v.back() != '}') throw BlockError(line, "unterminated label set '" + v + "'");
    std::vector<std::string> labels;
    std::string inner = v.substr(1, v.size() - 2);
    std::size_t pos = 0;
    while (pos <= inner.size()) {
      auto comma = inner.find(',', pos);
      if (comma == std::string::npos) comma = inner.size();
      auto label = unquote(std::string_view(inner).substr(pos, comma - pos));
      if (label.empty()) throw BlockError(line, "empty label in '" + v + "'");
      labels.push_back(label);
      pos = comma + 1;
    }
    return lang::BindingEntry::one_of(std::move(labels));
  }

  std::string_view rest;
  if (auto x = leading_number(v, rest)) return lang::BindingEntry::exact_number(*x, unit_of(rest));

  auto label = unquote(v);
  if (label.empty()) throw BlockError(line, "empty label");
  return lang::BindingEntry::exact_label(label);
}

}  // namespace

CalcInvocation parse_calc_block(std::string_view body) {
  CalcInvocation inv;
  int n = 0;
  for (const auto& raw : util::split_lines(body)) {
    ++n;
    auto line = util::trim(raw);
    if (line.empty() || line[0] == '#') continue;
    if (util::starts_with_ci(line, "calculator:")) {
      if (!inv.calculator_id.empty()) throw BlockError(n, "calculator named twice");
      inv.calculator_id = util::trim(std::string_view(line).substr(11));
      if (inv.calculator_id.empty()) throw BlockError(n, "missing calculator id");
      continue;
    }
    auto eq = line.find('=');
    if (eq == std::string::npos) throw BlockError(n, "expected 'name = value', got '" + line + "'");
    auto name = util::trim(std::string_view(line).substr(0, eq));
    if (!is_name(name)) throw BlockError(n, "invalid parameter name '" + name + "'");
    if (inv.binding.count(name)) throw BlockError(n, "parameter '" + name + "' bound twice");
    inv.binding[name] = parse_value(std::string_view(line).substr(eq + 1), n);
  }
  if (inv.calculator_id.empty()) throw BlockError(n == 0 ? 1 : n, "missing 'calculator: <id>' line");
  return inv;
}

std::string render_calc_block(const CalcInvocation& inv) {
  std::string out = "calculator: " + inv.calculator_id + "\n";
  for (const auto& [name, entry] : inv.binding) out += name + " = " + entry.render() + "\n";
  return out;
}

}  // namespace riskagent::agent
