#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hpsql/hardness.h"
#include "hpsql/heuristic_rules.h"
#include "hpsql/http_client.h"

namespace hpsql {

/// "[/easy]", "[/medium]", "[/hard]", "[/extra-hard]".
std::string_view hardness_token(HardnessLevel level);
/// Level named by the leading token of a composed text.
std::optional<HardnessLevel> level_from_prompt(std::string_view full_text);

/// Wire label of the classifier protocol: "easy" ... "extra-hard".
std::string_view hardness_label(HardnessLevel level);
std::optional<HardnessLevel> parse_hardness_label(std::string_view label);

enum class PromptLayout { token_question_schema, token_schema_question };

std::string_view to_string(PromptLayout layout);
std::optional<PromptLayout> parse_prompt_layout(std::string_view name);

struct ComposedPrompt {
  std::string hardness_token;
  std::string question;
  std::string schema_text;
  std::string full_text;

  friend bool operator==(const ComposedPrompt&, const ComposedPrompt&) = default;
};

/// Space-joins the token, question and schema text; an empty part adds no
/// separator.
ComposedPrompt compose_input(HardnessLevel level, std::string_view question, std::string_view schema_text,
                             PromptLayout layout = PromptLayout::token_question_schema);

struct HardnessQuery {
  std::size_t example_index = 0;
  std::string question;
  std::string schema_text;
};

class HardnessPredictor {
 public:
  virtual ~HardnessPredictor() = default;
  virtual HardnessLevel predict(const HardnessQuery& query) const = 0;
};

/// Looks up the gold-derived level by example index.
class OraclePredictor final : public HardnessPredictor {
 public:
  explicit OraclePredictor(std::vector<HardnessLevel> gold_levels);
  /// Labels gold SQL up front; parse failures surface here.
  OraclePredictor(const std::vector<Example>& examples, const CatalogSet& catalogs);

  HardnessLevel predict(const HardnessQuery& query) const override;

 private:
  std::vector<HardnessLevel> levels_;
};

class HeuristicPredictor final : public HardnessPredictor {
 public:
  explicit HeuristicPredictor(HeuristicRules rules = HeuristicRules::defaults());
  HardnessLevel predict(const HardnessQuery& query) const override;

 private:
  HeuristicRules rules_;
};

/// POST /classify {"text": "<question> <schema>"} -> {"label": ...}.
class EndpointPredictor final : public HardnessPredictor {
 public:
  explicit EndpointPredictor(EndpointConfig config);
  HardnessLevel predict(const HardnessQuery& query) const override;

 private:
  JsonEndpoint endpoint_;
};

/// Runs `predictor` over all queries with at most `workers` in flight;
/// results keep input order.
std::vector<HardnessLevel> predict_all(const HardnessPredictor& predictor, const std::vector<HardnessQuery>& queries,
                                       unsigned workers = 1);

}  // namespace hpsql
