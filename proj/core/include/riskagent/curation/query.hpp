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
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace riskagent::curation {

class QueryError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// AND/OR expression over case-insensitive whole-word terms. A term also
/// matches its plural with a trailing "s".
class BooleanQuery {
 public:
  /// Grammar: or := and ("OR" and)*; and := atom ("AND" atom)*;
  /// atom := word | "(" or ")". Operators are case-insensitive.
  static BooleanQuery parse(std::string_view text);
  /// patient AND (risk OR mortality) AND (score OR point OR rule OR calculator)
  static BooleanQuery default_screen();

  bool matches(std::string_view text) const;
  std::string to_string() const;

  struct Node {
    enum class Kind { term, all, any };
    Kind kind = Kind::term;
    std::string term;
    std::vector<Node> kids;
  };

 private:
  Node root_;
};

}  // namespace riskagent::curation
