#include <gtest/gtest.h>

#include <filesystem>

#include "hpsql/error.h"
#include "hpsql/generation.h"
#include "hpsql/jsonl.h"

namespace hpsql {
namespace {

GenerationRequest request(std::size_t i) { return {i, compose_input(HardnessLevel::easy, "q", "s")}; }

TEST(Replay, ReturnsRecordedSql) {
  ReplayGenerator replay({{0, "SELECT count(*) FROM singer", {}, {}}});
  EXPECT_EQ(replay.generate(request(0)), "SELECT count(*) FROM singer");
  EXPECT_TRUE(replay.has(0));
  EXPECT_FALSE(replay.has(1));
}

TEST(Replay, MissingIndex) {
  ReplayGenerator replay({{0, "SELECT 1", {}, {}}});
  try {
    replay.generate(request(3));
    FAIL() << "expected MissingPrediction";
  } catch (const MissingPrediction& e) {
    EXPECT_EQ(e.index(), 3u);
  }
}

TEST(Replay, DuplicateIndexRejectedAtLoad) {
  EXPECT_THROW(ReplayGenerator({{0, "SELECT 1", {}, {}}, {0, "SELECT 2", {}, {}}}), ValidationError);
}

TEST(Replay, FromFile) {
  auto path = (std::filesystem::temp_directory_path() / "hpsql_replay_test.jsonl").string();
  write_jsonl(path, {{{"index", 1}, {"sql", "SELECT b"}}, {{"index", 0}, {"sql", "SELECT a"}}});
  auto replay = ReplayGenerator::from_file(path);
  EXPECT_EQ(replay.generate(request(0)), "SELECT a");
  EXPECT_EQ(replay.generate(request(1)), "SELECT b");
  std::filesystem::remove(path);
}

TEST(Prediction, JsonRoundTrip) {
  PredictionRecord full{4, "SELECT 1", 12.5, std::string("boom")};
  EXPECT_EQ(prediction_from_json(to_json(full)), full);
  PredictionRecord bare{2, "SELECT 2", {}, {}};
  EXPECT_EQ(to_json(bare), (nlohmann::json{{"index", 2}, {"sql", "SELECT 2"}}));
  EXPECT_THROW(prediction_from_json({{"sql", "x"}}), ValidationError);
}

TEST(GoldEcho, ReturnsGold) {
  std::vector<Example> examples = {{"db", "q0", "SELECT a FROM t"}, {"db", "q1", "SELECT b FROM t"}};
  GoldEchoGenerator echo(examples);
  EXPECT_EQ(echo.generate(request(1)), "SELECT b FROM t");
  auto result = generate_all(echo, {});
  EXPECT_TRUE(result.records.empty());
}

class FlakyGenerator final : public SqlGenerator {
 public:
  std::string generate(const GenerationRequest& r) const override {
    if (r.example_index % 2) throw GeneratorUnavailable("down");
    return "SELECT " + std::to_string(r.example_index);
  }
};

TEST(GenerateAll, FirstFailureAborts) {
  try {
    generate_all(FlakyGenerator(), {request(0), request(1), request(2)});
    FAIL() << "expected StageError";
  } catch (const StageError& e) {
    EXPECT_EQ(e.stage(), "generate");
    EXPECT_EQ(e.example_index(), 1);
    EXPECT_TRUE(e.infrastructure());
  }
}

TEST(GenerateAll, PlaceholdersKeepGoing) {
  auto result = generate_all(FlakyGenerator(), {request(0), request(1), request(2)}, {2, true});
  ASSERT_EQ(result.records.size(), 3u);
  EXPECT_EQ(result.failures, 1u);
  EXPECT_EQ(result.records[0].predicted_sql, "SELECT 0");
  EXPECT_EQ(result.records[1].predicted_sql, kPlaceholderSql);
  EXPECT_TRUE(result.records[1].error.has_value());
  EXPECT_EQ(result.records[2].predicted_sql, "SELECT 2");
}

TEST(GenerateAll, DeterministicForReplay) {
  std::vector<PredictionRecord> records;
  std::vector<GenerationRequest> requests;
  for (std::size_t i = 0; i < 50; ++i) {
    records.push_back({i, "SELECT " + std::to_string(i), {}, {}});
    requests.push_back(request(i));
  }
  ReplayGenerator replay(records);
  auto a = generate_all(replay, requests, {1, false});
  auto b = generate_all(replay, requests, {8, false});
  EXPECT_EQ(a.records, b.records);
  EXPECT_EQ(a.records, records);
}

}  // namespace
}  // namespace hpsql
