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


#include "riskagent/llm/templates.hpp"

#include <algorithm>
#include <cctype>

#include "riskagent/util/jsonl.hpp"
#include "riskagent/util/resources.hpp"
#include "riskagent/util/strings.hpp"

namespace riskagent::llm {

const std::vector<std::string>& template_roles() {
  static const std::vector<std::string> roles{
      "screen",       "draft",          "verify",      "classify", "select", "compute", "summarize_check",
      "answer_extract", "risk_list", "cohort_score", "cot",     "rag",    "name",    "synth"};
  return roles;
}

namespace {

bool ident_char(char c, bool first) {
  return c == '_' || std::islower(static_cast<unsigned char>(c)) || (!first && std::isdigit(static_cast<unsigned char>(c)));
}

struct Piece {
  bool is_slot = false;
  std::string text;
};

// Splits a body into literal text and placeholder names. A brace that does
// not open a valid `{name}` slot is an error; doubled braces are literals.
std::vector<Piece> scan(std::string_view body, const std::string& role) {
  std::vector<Piece> out;
  std::string lit;
  for (std::size_t i = 0; i < body.size(); ++i) {
    char c = body[i];
    if (c == '{' && i + 1 < body.size() && body[i + 1] == '{') {
      lit += '{';
      ++i;
      continue;
    }
    if (c == '}' && i + 1 < body.size() && body[i + 1] == '}') {
      lit += '}';
      ++i;
      continue;
    }
    if (c == '}') throw TemplateError("template '" + role + "': unmatched '}' at offset " + std::to_string(i));
    if (c != '{') {
      lit += c;
      continue;
    }
    std::size_t j = i + 1;
    while (j < body.size() && ident_char(body[j], j == i + 1)) ++j;
    if (j == i + 1 || j >= body.size() || body[j] != '}')
      throw TemplateError("template '" + role + "': malformed placeholder at offset " + std::to_string(i));
    if (!lit.empty()) out.push_back({false, std::move(lit)});
    lit.clear();
    out.push_back({true, std::string(body.substr(i + 1, j - i - 1))});
    i = j;
  }
  if (!lit.empty()) out.push_back({false, std::move(lit)});
  return out;
}

void check_role(const std::string& role_id) {
  auto base = role_id.substr(0, role_id.find('.'));
  const auto& roles = template_roles();
  if (std::find(roles.begin(), roles.end(), base) == roles.end())
    throw TemplateError("unknown template role '" + role_id + "'");
}

}  // namespace

PromptTemplate PromptTemplate::parse(std::string role_id, std::string_view file_text) {
  check_role(role_id);
  PromptTemplate t;
  t.role_id = std::move(role_id);
  auto sep = file_text.find("\n---\n");
  if (sep == std::string_view::npos) throw TemplateError("template '" + t.role_id + "': missing '---' separator");
  for (const auto& line : util::split_lines(file_text.substr(0, sep))) {
    auto l = util::trim(line);
    if (l.empty()) continue;
    if (l[0] != '#') throw TemplateError("template '" + t.role_id + "': header lines must start with '#'");
    l = util::trim(std::string_view(l).substr(1));
    auto colon = l.find(':');
    if (colon == std::string::npos) continue;
    auto key = util::trim(std::string_view(l).substr(0, colon));
    auto value = util::trim(std::string_view(l).substr(colon + 1));
    if (key == "placeholders") {
      std::size_t start = 0;
      while (start <= value.size()) {
        auto comma = value.find(',', start);
        auto name = util::trim(std::string_view(value).substr(start, comma == std::string::npos ? std::string::npos : comma - start));
        if (!name.empty()) t.placeholders.insert(name);
        if (comma == std::string::npos) break;
        start = comma + 1;
      }
    } else if (key == "model") {
      t.model_tag = value;
    } else if (key == "system") {
      t.system = value;
    }
  }
  t.body = std::string(file_text.substr(sep + 5));
  for (const auto& p : scan(t.body, t.role_id))
    if (p.is_slot && !t.placeholders.count(p.text))
      throw TemplateError("template '" + t.role_id + "': undeclared placeholder '" + p.text + "'");
  return t;
}

std::string PromptTemplate::render(const Bindings& bindings) const {
  for (const auto& name : placeholders)
    if (bindings.find(name) == bindings.end())
      throw TemplateError("template '" + role_id + "': placeholder '" + name + "' is not bound");
  std::string out;
  for (const auto& p : scan(body, role_id)) out += p.is_slot ? bindings.find(p.text)->second : p.text;
  return out;
}

ChatRequest PromptTemplate::request(const Bindings& bindings) const {
  ChatRequest r;
  if (!system.empty()) r.messages.push_back({Role::system, system});
  r.messages.push_back({Role::user, render(bindings)});
  r.model_tag = model_tag;
  r.purpose = role_id;
  return r;
}

TemplateSet TemplateSet::builtin() {
  TemplateSet set;
  for (const auto& [name, text] : resources::embedded()) {
    if (name.size() < 6 || name.substr(name.size() - 5) != ".tmpl") continue;
    set.add(PromptTemplate::parse(name.substr(0, name.size() - 5), text));
  }
  return set;
}

TemplateSet TemplateSet::with_overrides(const std::filesystem::path& dir) {
  TemplateSet set = builtin();
  if (!std::filesystem::is_directory(dir)) throw TemplateError("template directory not found: " + dir.string());
  std::vector<std::filesystem::path> files;
  for (const auto& e : std::filesystem::directory_iterator(dir))
    if (e.path().extension() == ".tmpl") files.push_back(e.path());
  std::sort(files.begin(), files.end());
  for (const auto& f : files) set.add(PromptTemplate::parse(f.stem().string(), util::read_file(f)));
  return set;
}

const PromptTemplate& TemplateSet::get(std::string_view role_id) const {
  auto it = templates_.find(role_id);
  if (it == templates_.end()) throw TemplateError("no template for role '" + std::string(role_id) + "'");
  return it->second;
}

bool TemplateSet::has(std::string_view role_id) const { return templates_.find(role_id) != templates_.end(); }

std::vector<std::string> TemplateSet::roles() const {
  std::vector<std::string> out;
  for (const auto& [k, v] : templates_) out.push_back(k);
  return out;
}

void TemplateSet::add(PromptTemplate t) { templates_[t.role_id] = std::move(t); }

}  // namespace riskagent::llm
