#include <gtest/gtest.h>

#include <nlohmann/json.hpp>

#include "hpsql/error.h"
#include "hpsql/heuristic_rules.h"
#include "hpsql/prompt.h"
#include "hpsql/refiner.h"
#include "spider_data.h"

namespace hpsql {
namespace {

using testing::spider_catalogs;
using testing::spider_dev;

TEST(Prompt, Tokens) {
  EXPECT_EQ(hardness_token(HardnessLevel::easy), "[/easy]");
  EXPECT_EQ(hardness_token(HardnessLevel::medium), "[/medium]");
  EXPECT_EQ(hardness_token(HardnessLevel::hard), "[/hard]");
  EXPECT_EQ(hardness_token(HardnessLevel::extra_hard), "[/extra-hard]");
}

TEST(Prompt, ComposeGolden) {
  auto p = compose_input(HardnessLevel::easy, "How many singers do we have?", "| concert_singer | singer : ...");
  EXPECT_EQ(p.full_text, "[/easy] How many singers do we have? | concert_singer | singer : ...");
  EXPECT_EQ(p.hardness_token, "[/easy]");
  EXPECT_EQ(p.question, "How many singers do we have?");
  EXPECT_EQ(p.schema_text, "| concert_singer | singer : ...");
}

TEST(Prompt, EmptySchemaAddsNoTrailingSpace) {
  EXPECT_EQ(compose_input(HardnessLevel::hard, "Why?", "").full_text, "[/hard] Why?");
}

TEST(Prompt, SchemaFirstLayout) {
  EXPECT_EQ(compose_input(HardnessLevel::medium, "q?", "| db | t :", PromptLayout::token_schema_question).full_text,
            "[/medium] | db | t : q?");
}

TEST(Prompt, ComposeIsPure) {
  EXPECT_EQ(compose_input(HardnessLevel::hard, "a", "b"), compose_input(HardnessLevel::hard, "a", "b"));
}

TEST(Prompt, TokenRoundTrip) {
  for (auto level : kHardnessLevels) {
    EXPECT_EQ(level_from_prompt(compose_input(level, "q", "s").full_text), level);
    EXPECT_EQ(level_from_prompt(hardness_token(level)), level);
    EXPECT_EQ(parse_hardness_label(hardness_label(level)), level);
  }
  EXPECT_EQ(hardness_label(HardnessLevel::extra_hard), "extra-hard");
  EXPECT_FALSE(level_from_prompt("[/easyish] q"));
  EXPECT_FALSE(parse_hardness_label("impossible"));
}

TEST(Heuristic, CountingQuestionIsEasy) {
  EXPECT_EQ(apply_rules(HeuristicRules::defaults(), "How many singers do we have?", "").level, HardnessLevel::easy);
}

TEST(Heuristic, FeaturelessQuestionIsMedium) {
  EXPECT_EQ(apply_rules(HeuristicRules::defaults(), "", "").level, HardnessLevel::medium);
  EXPECT_EQ(apply_rules(HeuristicRules::defaults(), "List the names.", "").level, HardnessLevel::medium);
}

TEST(Heuristic, TwoTablesAndOrAtLeastMedium) {
  auto trace = apply_rules(HeuristicRules::defaults(), "Show stadiums or concerts in 2014",
                           "| concert_singer | stadium : name | concert : year");
  EXPECT_EQ(trace.tables_mentioned, 2u);
  EXPECT_EQ(trace.fired, (std::vector<std::string>{"set_conjunction", "multi_table"}));
  EXPECT_EQ(trace.score, 2);
  EXPECT_EQ(trace.level, HardnessLevel::hard);
}

TEST(Heuristic, ShippedTableEqualsDefaults) {
  auto shipped = HeuristicRules::from_json(nlohmann::json::parse(read_file(std::string(HPSQL_DATA_DIR) + "/heuristic_rules.json")));
  EXPECT_EQ(shipped, HeuristicRules::defaults());
  EXPECT_EQ(HeuristicRules::from_json(HeuristicRules::defaults().to_json()), HeuristicRules::defaults());
}

TEST(Heuristic, ThresholdsMustIncrease) {
  auto doc = HeuristicRules::defaults().to_json();
  doc["thresholds"]["medium_max"] = -5;
  EXPECT_THROW(HeuristicRules::from_json(doc), ValidationError);
  EXPECT_THROW(HeuristicRules::from_json(nlohmann::json::object()), ValidationError);
}

TEST(OraclePredictor, AgreesWithHardnessRulesOverDev) {
  OraclePredictor oracle(spider_dev(), spider_catalogs());
  const auto& dev = spider_dev();
  for (std::size_t i = 0; i < dev.size(); ++i)
    EXPECT_EQ(oracle.predict({i, dev[i].question, ""}), hardness_of(dev[i].gold_sql, spider_catalogs().at(dev[i].db_id)));
}

TEST(OraclePredictor, MinimalGoldIsEasy) {
  OraclePredictor oracle({{"concert_singer", "q", "SELECT name FROM singer"}}, spider_catalogs());
  EXPECT_EQ(oracle.predict({0, "q", ""}), HardnessLevel::easy);
}

TEST(OraclePredictor, UnparseableGoldFails) {
  EXPECT_THROW(OraclePredictor({{"concert_singer", "q", "SELECT nope FROM singer"}}, spider_catalogs()), Error);
  OraclePredictor empty(std::vector<HardnessLevel>{});
  EXPECT_THROW(empty.predict({0, "q", ""}), ValidationError);
}

TEST(PredictAll, WrapsErrorsWithIndex) {
  OraclePredictor oracle(std::vector<HardnessLevel>{HardnessLevel::easy});
  std::vector<HardnessQuery> queries = {{0, "a", ""}, {7, "b", ""}};
  try {
    predict_all(oracle, queries, 2);
    FAIL() << "expected StageError";
  } catch (const StageError& e) {
    EXPECT_EQ(e.example_index(), 7);
  }
}

}  // namespace
}  // namespace hpsql
