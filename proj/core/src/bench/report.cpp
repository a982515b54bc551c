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

#include "riskagent/bench/report.hpp"

#include <cstdio>
#include <map>
#include <set>
#include <sstream>
#include <tuple>

namespace riskagent::bench {

std::string percent(std::size_t part, std::size_t whole) {
  if (whole == 0) return "n/a";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.1f%%", 100.0 * static_cast<double>(part) / static_cast<double>(whole));
  return buf;
}

void ConfusionMatrix::add(bool selection_right, bool answer_right) {
  if (selection_right) (answer_right ? sel_right_ans_right : sel_right_ans_wrong)++;
  else (answer_right ? sel_wrong_ans_right : sel_wrong_ans_wrong)++;
}

std::size_t ConfusionMatrix::total() const noexcept {
  return sel_right_ans_right + sel_right_ans_wrong + sel_wrong_ans_right + sel_wrong_ans_wrong;
}

std::string ConfusionMatrix::render() const {
  auto cell = [](std::size_t n, std::size_t row) {
    std::string s = std::to_string(n) + " (" + percent(n, row) + ")";
    s.resize(std::max<std::size_t>(s.size(), 18), ' ');
    return s;
  };
  std::ostringstream out;
  out << "                  answer right      answer wrong      total\n";
  out << "selection right   " << cell(sel_right_ans_right, selection_right())
      << cell(sel_right_ans_wrong, selection_right()) << selection_right() << "\n";
  out << "selection wrong   " << cell(sel_wrong_ans_right, selection_wrong())
      << cell(sel_wrong_ans_wrong, selection_wrong()) << selection_wrong() << "\n";
  std::string right = std::to_string(answer_right());
  right.resize(18, ' ');
  std::string wrong = std::to_string(answer_wrong());
  wrong.resize(18, ' ');
  out << "total             " << right << wrong << total() << "\n";
  return out.str();
}

nlohmann::json ConfusionMatrix::to_json() const {
  return {{"selection_right_answer_right", sel_right_ans_right},
          {"selection_right_answer_wrong", sel_right_ans_wrong},
          {"selection_wrong_answer_right", sel_wrong_ans_right},
          {"selection_wrong_answer_wrong", sel_wrong_ans_wrong},
          {"answer_right_given_selection_wrong", percent(sel_wrong_ans_right, selection_wrong())},
          {"answer_right_given_selection_right", percent(sel_right_ans_right, selection_right())}};
}

const MethodStats* BenchReport::find(Method m, Setting s) const {
  for (const auto& x : methods)
    if (x.method == m && x.setting == s) return &x;
  return nullptr;
}

nlohmann::json BenchReport::to_json() const {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& m : methods)
    rows.push_back({{"method", std::string(to_string(m.method))},
                    {"setting", std::string(to_string(m.setting))},
                    {"total", m.total},
                    {"correct", m.correct},
                    {"abstained", m.abstained},
                    {"failed", m.failed},
                    {"accuracy", m.accuracy()}});
  nlohmann::json j{{"items", items}, {"methods", rows}, {"abstentions", abstentions}};
  j["selection_accuracy"] = selection_accuracy ? nlohmann::json(*selection_accuracy) : nlohmann::json(nullptr);
  j["retrieval_accuracy"] = retrieval_accuracy ? nlohmann::json(*retrieval_accuracy) : nlohmann::json(nullptr);
  j["confusion"] = confusion ? confusion->to_json() : nlohmann::json(nullptr);
  return j;
}

std::string BenchReport::to_csv() const {
  std::ostringstream out;
  out << "method,setting,total,correct,abstained,failed,accuracy\n";
  for (const auto& m : methods) {
    char acc[32];
    std::snprintf(acc, sizeof acc, "%.4f", m.accuracy());
    out << to_string(m.method) << ',' << to_string(m.setting) << ',' << m.total << ',' << m.correct << ','
        << m.abstained << ',' << m.failed << ',' << acc << "\n";
  }
  return out.str();
}

std::string BenchReport::render() const {
  std::ostringstream out;
  out << "items: " << items << "\n";
  for (const auto& m : methods)
    out << to_string(m.method) << " / " << to_string(m.setting) << ": " << m.correct << "/" << m.total << " correct ("
        << percent(m.correct, m.total) << "), " << m.abstained << " abstained, " << m.failed << " failed\n";
  if (selection_accuracy) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.3f", *selection_accuracy);
    out << "selection top-1 accuracy: " << buf << "\n";
  }
  if (retrieval_accuracy) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.3f", *retrieval_accuracy);
    out << "retrieval top-1 accuracy: " << buf << "\n";
  }
  if (confusion) out << "\n" << confusion->render();
  return out.str();
}

BenchReport score(const std::vector<MethodRun>& runs, const std::vector<RiskQAItem>& items) {
  if (items.empty()) throw std::invalid_argument("cannot report on an empty dataset");
  std::map<std::string, const RiskQAItem*> by_id;
  for (const auto& it : items) by_id[it.id] = &it;

  BenchReport r;
  r.items = items.size();
  std::set<std::tuple<std::string, Method, Setting>> seen;
  std::map<std::pair<Method, Setting>, MethodStats> stats;
  ConfusionMatrix matrix;
  std::size_t sel_total = 0, sel_right = 0, ret_total = 0, ret_right = 0;

  for (const auto& run : runs) {
    auto it = by_id.find(run.item_id);
    if (it == by_id.end()) throw std::invalid_argument("run names unknown item " + run.item_id);
    if (!seen.emplace(run.item_id, run.method, run.setting).second)
      throw std::invalid_argument("more than one " + std::string(to_string(run.method)) + "/" +
                                  std::string(to_string(run.setting)) + " run for item " + run.item_id);
    const auto& item = *it->second;
    auto& s = stats[{run.method, run.setting}];
    s.method = run.method;
    s.setting = run.setting;
    ++s.total;
    bool correct = !run.failed && run.predicted && *run.predicted == item.answer_key;
    if (correct) ++s.correct;
    if (run.failed) ++s.failed;
    else if (!run.predicted) ++s.abstained;

    if (run.method == Method::agent && run.setting == Setting::riskqa) {
      bool sel_ok = run.selected_calculator && *run.selected_calculator == item.oracle_calculator_id;
      ++sel_total;
      sel_right += sel_ok;
      matrix.add(sel_ok, correct);
      if (run.retrieval_top1) {
        ++ret_total;
        ret_right += *run.retrieval_top1 == item.oracle_calculator_id;
      }
    }
  }
  for (auto& [key, s] : stats) {
    r.abstentions += s.abstained;
    r.methods.push_back(s);
  }
  if (sel_total > 0) {
    r.selection_accuracy = static_cast<double>(sel_right) / sel_total;
    r.confusion = matrix;
  }
  if (ret_total > 0) r.retrieval_accuracy = static_cast<double>(ret_right) / ret_total;
  return r;
}

}  // namespace riskagent::bench
