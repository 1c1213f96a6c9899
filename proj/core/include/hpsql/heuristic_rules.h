#pragma once

#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "hpsql/hardness.h"

namespace hpsql {

/// A question feature: fires when any phrase occurs as a contiguous token
/// span of the question, adding `weight` once.
struct HeuristicRule {
  std::string name;
  std::vector<std::string> phrases;
  int weight = 0;

  friend bool operator==(const HeuristicRule&, const HeuristicRule&) = default;
};

/// Additive rule table. Score <= easy_max is Easy, <= medium_max Medium,
/// <= hard_max Hard, anything above ExtraHard. A question with no feature
/// scores `base`, which the defaults map to Medium.
struct HeuristicRules {
  int base = 0;
  std::vector<HeuristicRule> rules;
  int multi_table_weight = 1;  // two or more schema tables named in the question
  int easy_max = -1;
  int medium_max = 1;
  int hard_max = 3;

  static HeuristicRules defaults();
  static HeuristicRules from_json(const nlohmann::json& document);
  nlohmann::json to_json() const;

  friend bool operator==(const HeuristicRules&, const HeuristicRules&) = default;
};

struct HeuristicTrace {
  int score = 0;
  std::vector<std::string> fired;
  std::size_t tables_mentioned = 0;
  HardnessLevel level = HardnessLevel::medium;
};

/// Table names are read from serialized schema text ("| db | t : ...").
HeuristicTrace apply_rules(const HeuristicRules& rules, std::string_view question, std::string_view schema_text);

}  // namespace hpsql
