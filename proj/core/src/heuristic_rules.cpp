#include "hpsql/heuristic_rules.h"

#include <algorithm>

#include <nlohmann/json.hpp>

#include "hpsql/error.h"
#include "hpsql/refiner.h"

namespace hpsql {

HeuristicRules HeuristicRules::defaults() {
  HeuristicRules r;
  r.rules = {
      {"counting", {"how many", "count", "number of", "total number"}, -1},
      {"grouping", {"each", "per", "every", "for all"}, 1},
      {"superlative",
       {"most", "least", "highest", "lowest", "largest", "smallest", "maximum", "minimum", "oldest",
        "youngest", "top", "best", "fewest", "greatest", "longest", "shortest", "earliest", "latest"},
       1},
      {"comparative",
       {"more than", "less than", "greater than", "fewer than", "older than", "younger than", "larger than",
        "smaller than", "higher than", "lower than", "at least", "at most", "above", "below", "exceed"},
       1},
      {"ordering", {"order", "ordered", "sort", "sorted", "ascending", "descending", "alphabetical"}, 1},
      {"negation", {"not", "no", "never", "without", "except", "other than", "neither", "nor"}, 2},
      {"set_conjunction", {"or", "both", "either", "also"}, 1},
  };
  return r;
}

HeuristicRules HeuristicRules::from_json(const nlohmann::json& doc) {
  try {
    HeuristicRules r;
    r.base = doc.value("base", 0);
    r.multi_table_weight = doc.value("multi_table_weight", 1);
    r.easy_max = doc.at("thresholds").at("easy_max").get<int>();
    r.medium_max = doc.at("thresholds").at("medium_max").get<int>();
    r.hard_max = doc.at("thresholds").at("hard_max").get<int>();
    for (const auto& rule : doc.at("rules"))
      r.rules.push_back({rule.at("name").get<std::string>(), rule.at("phrases").get<std::vector<std::string>>(),
                         rule.at("weight").get<int>()});
    if (!(r.easy_max < r.medium_max && r.medium_max < r.hard_max))
      throw ValidationError("heuristic thresholds must be strictly increasing");
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("heuristic rule table: ") + e.what());
  }
}

nlohmann::json HeuristicRules::to_json() const {
  nlohmann::json doc = {{"base", base},
                        {"multi_table_weight", multi_table_weight},
                        {"thresholds", {{"easy_max", easy_max}, {"medium_max", medium_max}, {"hard_max", hard_max}}},
                        {"rules", nlohmann::json::array()}};
  for (const auto& rule : rules)
    doc["rules"].push_back({{"name", rule.name}, {"phrases", rule.phrases}, {"weight", rule.weight}});
  return doc;
}

namespace {

bool mentions(const std::vector<std::string>& question, std::string_view phrase) {
  auto needle = lexical_tokens(phrase);
  if (needle.empty() || needle.size() > question.size()) return false;
  return std::search(question.begin(), question.end(), needle.begin(), needle.end()) != question.end();
}

// Depluralised match so "singers" names table "singer".
bool mentions_table(const std::vector<std::string>& question, const std::string& table) {
  auto needle = lexical_tokens(table);
  if (needle.empty()) return false;
  for (std::size_t i = 0; i + needle.size() <= question.size(); ++i) {
    bool hit = true;
    for (std::size_t j = 0; j < needle.size() && hit; ++j) {
      const auto& q = question[i + j];
      const auto& n = needle[j];
      hit = q == n || q == n + "s" || q == n + "es" || n == q + "s";
    }
    if (hit) return true;
  }
  return false;
}

std::vector<std::string> schema_tables(std::string_view schema_text) {
  std::vector<std::string> tables;
  std::size_t pos = 0;
  bool first = true;
  while ((pos = schema_text.find("| ", pos)) != std::string_view::npos) {
    pos += 2;
    auto end = schema_text.find(" |", pos);
    auto segment = schema_text.substr(pos, end == std::string_view::npos ? std::string_view::npos : end - pos);
    if (first) {
      first = false;  // database id
      continue;
    }
    auto colon = segment.find(" :");
    if (colon == std::string_view::npos) continue;
    std::string name(segment.substr(0, colon));
    if (name != "fk") tables.push_back(std::move(name));
  }
  return tables;
}

}  // namespace

HeuristicTrace apply_rules(const HeuristicRules& rules, std::string_view question, std::string_view schema_text) {
  HeuristicTrace trace;
  trace.score = rules.base;
  const auto tokens = lexical_tokens(question);
  for (const auto& rule : rules.rules) {
    if (std::any_of(rule.phrases.begin(), rule.phrases.end(), [&](const auto& p) { return mentions(tokens, p); })) {
      trace.score += rule.weight;
      trace.fired.push_back(rule.name);
    }
  }
  for (const auto& table : schema_tables(schema_text))
    if (mentions_table(tokens, table)) ++trace.tables_mentioned;
  if (trace.tables_mentioned >= 2) {
    trace.score += rules.multi_table_weight;
    trace.fired.push_back("multi_table");
  }
  if (trace.score <= rules.easy_max) {
    trace.level = HardnessLevel::easy;
  } else if (trace.score <= rules.medium_max) {
    trace.level = HardnessLevel::medium;
  } else if (trace.score <= rules.hard_max) {
    trace.level = HardnessLevel::hard;
  } else {
    trace.level = HardnessLevel::extra_hard;
  }
  return trace;
}

}  // namespace hpsql
