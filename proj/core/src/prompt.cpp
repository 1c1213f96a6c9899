#include "hpsql/prompt.h"

#include "hpsql/error.h"
#include "parallel.h"

namespace hpsql {

std::string_view hardness_token(HardnessLevel level) {
  switch (level) {
    case HardnessLevel::easy: return "[/easy]";
    case HardnessLevel::medium: return "[/medium]";
    case HardnessLevel::hard: return "[/hard]";
    case HardnessLevel::extra_hard: return "[/extra-hard]";
  }
  return "[/easy]";
}

std::optional<HardnessLevel> level_from_prompt(std::string_view full_text) {
  for (auto level : kHardnessLevels) {
    auto token = hardness_token(level);
    if (full_text.substr(0, token.size()) == token &&
        (full_text.size() == token.size() || full_text[token.size()] == ' '))
      return level;
  }
  return std::nullopt;
}

std::string_view hardness_label(HardnessLevel level) {
  auto token = hardness_token(level);
  return token.substr(2, token.size() - 3);
}

std::optional<HardnessLevel> parse_hardness_label(std::string_view label) {
  for (auto level : kHardnessLevels)
    if (hardness_label(level) == label) return level;
  return std::nullopt;
}

std::string_view to_string(PromptLayout layout) {
  return layout == PromptLayout::token_question_schema ? "token_question_schema" : "token_schema_question";
}

std::optional<PromptLayout> parse_prompt_layout(std::string_view name) {
  if (name == "token_question_schema") return PromptLayout::token_question_schema;
  if (name == "token_schema_question") return PromptLayout::token_schema_question;
  return std::nullopt;
}

ComposedPrompt compose_input(HardnessLevel level, std::string_view question, std::string_view schema_text,
                             PromptLayout layout) {
  ComposedPrompt prompt{std::string(hardness_token(level)), std::string(question), std::string(schema_text), {}};
  prompt.full_text = prompt.hardness_token;
  auto append = [&](const std::string& part) {
    if (!part.empty()) prompt.full_text += " " + part;
  };
  if (layout == PromptLayout::token_question_schema) {
    append(prompt.question);
    append(prompt.schema_text);
  } else {
    append(prompt.schema_text);
    append(prompt.question);
  }
  return prompt;
}

OraclePredictor::OraclePredictor(std::vector<HardnessLevel> gold_levels) : levels_(std::move(gold_levels)) {}

OraclePredictor::OraclePredictor(const std::vector<Example>& examples, const CatalogSet& catalogs) {
  auto corpus = label_corpus(examples, catalogs);
  levels_.reserve(corpus.labels.size());
  for (const auto& label : corpus.labels) levels_.push_back(label.level);
}

HardnessLevel OraclePredictor::predict(const HardnessQuery& query) const {
  if (query.example_index >= levels_.size())
    throw ValidationError("oracle predictor has no gold label for example " + std::to_string(query.example_index));
  return levels_[query.example_index];
}

HeuristicPredictor::HeuristicPredictor(HeuristicRules rules) : rules_(std::move(rules)) {}

HardnessLevel HeuristicPredictor::predict(const HardnessQuery& query) const {
  return apply_rules(rules_, query.question, query.schema_text).level;
}

EndpointPredictor::EndpointPredictor(EndpointConfig config) : endpoint_(std::move(config)) {}

HardnessLevel EndpointPredictor::predict(const HardnessQuery& query) const {
  std::string text = query.question;
  if (!query.schema_text.empty()) text += " " + query.schema_text;
  nlohmann::json reply;
  try {
    reply = endpoint_.post("/classify", {{"text", text}});
  } catch (const ServiceUnavailable& e) {
    throw PredictorUnavailable(e.what());
  }
  if (!reply.is_object() || !reply.contains("label") || !reply["label"].is_string())
    throw ProtocolError("/classify reply lacks a string \"label\"");
  auto level = parse_hardness_label(reply["label"].get<std::string>());
  if (!level) throw ProtocolError("/classify returned unknown label " + reply["label"].dump());
  return *level;
}

std::vector<HardnessLevel> predict_all(const HardnessPredictor& predictor, const std::vector<HardnessQuery>& queries,
                                       unsigned workers) {
  std::vector<HardnessLevel> out(queries.size());
  detail::parallel_for(queries.size(), workers, [&](std::size_t i) {
    try {
      out[i] = predictor.predict(queries[i]);
    } catch (const InfrastructureError& e) {
      throw StageError("label", static_cast<std::ptrdiff_t>(queries[i].example_index), e, true);
    } catch (const Error& e) {
      throw StageError("label", static_cast<std::ptrdiff_t>(queries[i].example_index), e, false);
    }
  });
  return out;
}

}  // namespace hpsql
