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

#include <string>
#include <string_view>
#include <vector>

namespace riskagent::util {

/// Shortest decimal text that round-trips to the same double.
std::string format_double(double v);

std::string to_lower(std::string_view s);
std::string trim(std::string_view s);
bool starts_with_ci(std::string_view text, std::string_view prefix);
std::vector<std::string> split_lines(std::string_view text);
std::string join(const std::vector<std::string>& parts, std::string_view sep);

/// Lower-cased alphanumeric runs of `text`.
std::vector<std::string> words(std::string_view text);

/// Whole-word, case-insensitive match with a plural-s allowance: the term
/// "risk" matches "risk" and "risks" but not "risky".
bool word_matches(std::string_view word_lower, std::string_view term_lower);

/// `text` with each invalid UTF-8 sequence replaced by U+FFFD.
std::string sanitize_utf8(std::string_view text);

/// UTC timestamp, ISO-8601 with seconds.
std::string utc_timestamp();

}  // namespace riskagent::util
