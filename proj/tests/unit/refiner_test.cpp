#include <gtest/gtest.h>

#include <random>

#include "hpsql/error.h"
#include "hpsql/refiner.h"
#include "oracle_scorer.h"
#include "random_catalog.h"
#include "spider_data.h"

namespace hpsql {
namespace {

using testing::concert_singer;

TEST(LexicalScore, ExactPhraseScoresOne) {
  EXPECT_DOUBLE_EQ(lexical_score("What is the singer id of the oldest singer?", "singer_id", "singer id"), 1.0);
}

TEST(LexicalScore, SubstringOfPluralScoresLcsTerm) {
  // No token equals "department"; the LCS term gives 0.8 * 10/10.
  EXPECT_DOUBLE_EQ(
      lexical_score("How many heads of the departments are older than 56?", "department", "department"), 0.8);
}

TEST(LexicalScore, DisjointCharactersScoreZero) {
  EXPECT_DOUBLE_EQ(lexical_score("xyz", "abc", "abc"), 0.0);
}

TEST(LexicalScore, TokenOverlapF1) {
  // Question tokens {show, song, name}; name tokens {song, release, year}: F1 = 2*(1/3)*(1/3)/(2/3).
  const double f1 = 1.0 / 3.0;
  EXPECT_NEAR(lexical_score("show song name", "song_release_year", "song release year"), std::max(f1, 0.8 * 4 / 15),
              1e-12);
}

TEST(LexicalScore, Tokenizer) {
  EXPECT_EQ(lexical_tokens("Song_Name, of T1!"), (std::vector<std::string>{"song", "name", "of", "t1"}));
}

TEST(Refine, SmallCatalogKeepsEverything) {
  SchemaCatalog catalog("small",
                        {{"a", "a", {{ColumnId{1}, "x", "x", ValueType::text},
                                     {ColumnId{2}, "y", "y", ValueType::text},
                                     {ColumnId{3}, "z", "z", ValueType::text}}},
                         {"b", "b", {{ColumnId{4}, "x", "x", ValueType::text},
                                     {ColumnId{5}, "y", "y", ValueType::text},
                                     {ColumnId{6}, "z", "z", ValueType::text}}}},
                        {}, {});
  auto r = refine("anything", catalog, LexicalScorer());
  ASSERT_EQ(r.tables.size(), 2u);
  EXPECT_EQ(r.tables[0].columns.size(), 3u);
  EXPECT_EQ(r.tables[1].columns.size(), 3u);
}

TEST(Refine, SixTablesYieldFour) {
  std::vector<TableDef> tables;
  for (int t = 0; t < 6; ++t) tables.push_back({"t" + std::to_string(t), "t" + std::to_string(t), {}});
  auto r = refine("q", SchemaCatalog("six", tables, {}, {}), LexicalScorer());
  EXPECT_EQ(r.tables.size(), 4u);
  for (std::size_t i = 0; i < 4; ++i) EXPECT_EQ(r.tables[i].table_index, i);  // all tie: catalog order
}

TEST(Refine, OracleScorerRanksGoldTablesFirst) {
  const auto& catalog = concert_singer();
  auto q = sql::parse_sql(
      "SELECT T2.name FROM singer_in_concert AS T1 JOIN singer AS T2 ON T1.singer_id = T2.singer_id", catalog);
  auto gold = testing::gold_items(q, catalog);
  auto r = refine("q", catalog, testing::GoldItemScorer(catalog, gold));
  ASSERT_EQ(r.tables.size(), 4u);
  EXPECT_EQ(r.tables[0].name, "singer");
  EXPECT_EQ(r.tables[1].name, "singer_in_concert");
  EXPECT_EQ(r.tables[0].columns[0].column.name, "Singer_ID");
  EXPECT_EQ(r.tables[0].columns[1].column.name, "Name");
}

TEST(Refine, RetainsKeysWithBothEndpointsSelected) {
  const auto& catalog = concert_singer();
  auto q = sql::parse_sql(
      "SELECT T2.name FROM singer_in_concert AS T1 JOIN singer AS T2 ON T1.singer_id = T2.singer_id", catalog);
  auto r = refine("q", catalog, testing::GoldItemScorer(catalog, testing::gold_items(q, catalog)));
  ASSERT_FALSE(r.foreign_keys.empty());
  bool found = false;
  for (const auto& fk : r.foreign_keys)
    found = found || (fk.from == "singer in concert.singer id" && fk.to == "singer.singer id");
  EXPECT_TRUE(found);
}

TEST(Refine, RejectsZeroLimits) {
  EXPECT_THROW(refine("q", concert_singer(), LexicalScorer(), {0, 5}), ValidationError);
}

TEST(Refine, CardinalityOverRandomCatalogs) {
  std::mt19937_64 rng(3);
  for (int n = 0; n < 200; ++n) {
    auto catalog = testing::random_catalog(rng, "r");
    auto r = refine(testing::random_question(rng), catalog, LexicalScorer());
    EXPECT_EQ(r.tables.size(), std::min<std::size_t>(4, catalog.tables().size()));
    for (const auto& t : r.tables)
      EXPECT_EQ(t.columns.size(), std::min<std::size_t>(5, catalog.tables()[t.table_index].columns.size()));
  }
}

RefinedSchema one_table(std::vector<std::string> columns) {
  RefinedSchema r;
  r.db_id = "concert_singer";
  RankedTable t{1, "singer", "singer", 1.0, {}};
  for (auto& c : columns) t.columns.push_back({ColumnDef{ColumnId{1}, c, c, ValueType::text}, 1.0});
  r.tables.push_back(t);
  return r;
}

TEST(Serialize, Golden) {
  EXPECT_EQ(serialize_schema(one_table({"name", "age"})), "| concert_singer | singer : name , age");
}

TEST(Serialize, EmptyColumns) {
  auto r = one_table({});
  r.db_id = "db";
  r.tables[0].display_name = "t";
  EXPECT_EQ(serialize_schema(r), "| db | t :");
}

TEST(Serialize, TablesInRankedOrder) {
  auto r = one_table({"name"});
  r.tables.push_back({0, "stadium", "stadium", 0.5, {{ColumnDef{ColumnId{2}, "location", "location", {}}, 0.5}}});
  EXPECT_EQ(serialize_schema(r), "| concert_singer | singer : name | stadium : location");
}

TEST(Serialize, ForeignKeySegmentsOnlyOnRequest) {
  auto r = one_table({"singer id"});
  r.foreign_keys.push_back({{ColumnId{21}, ColumnId{8}}, "singer in concert.singer id", "singer.singer id"});
  EXPECT_EQ(serialize_schema(r), "| concert_singer | singer : singer id");
  EXPECT_EQ(serialize_schema(r, true),
            "| concert_singer | singer : singer id | fk : singer in concert.singer id = singer.singer id");
}

TEST(Serialize, FullSchemaOfConcertSinger) {
  auto text = serialize_schema(full_schema(concert_singer()));
  EXPECT_EQ(text.rfind("| concert_singer | stadium : stadium id , location , name", 0), 0u) << text;
  EXPECT_NE(text.find("| singer in concert : concert id , singer id"), std::string::npos);
}

}  // namespace
}  // namespace hpsql
