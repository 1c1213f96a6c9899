#pragma once

#include <cstddef>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "hpsql/http_client.h"
#include "hpsql/schema.h"

namespace hpsql {

/// A table or column presented to a relevance scorer.
struct SchemaItem {
  enum class Kind { table, column };
  Kind kind = Kind::table;
  std::string table;           // original name
  std::string table_display;
  std::string column;          // empty for tables
  std::string column_display;
};

/// Scores schema items against a question. Implementations must be
/// deterministic and return one score in [0, 1] per item.
class RelevanceScorer {
 public:
  virtual ~RelevanceScorer() = default;
  virtual std::vector<double> score(const std::string& question, const std::vector<SchemaItem>& items) const = 0;
};

/// Lowercase alphanumeric runs; underscores and punctuation separate tokens.
std::vector<std::string> lexical_tokens(std::string_view text);

/// max(contiguous-phrase hit, token F1, 0.8 * LCS(question, name) / |name|),
/// each over the underscore-split name and the display name.
double lexical_score(std::string_view question, std::string_view item_name, std::string_view item_display);

class LexicalScorer final : public RelevanceScorer {
 public:
  std::vector<double> score(const std::string& question, const std::vector<SchemaItem>& items) const override;
};

/// POST /score {"question", "items": [{"kind", "table", "column"}]} -> {"scores"}.
class EndpointScorer final : public RelevanceScorer {
 public:
  explicit EndpointScorer(EndpointConfig config);
  std::vector<double> score(const std::string& question, const std::vector<SchemaItem>& items) const override;

 private:
  JsonEndpoint endpoint_;
};

struct RankedColumn {
  ColumnDef column;
  double score = 0.0;
};

struct RankedTable {
  std::size_t table_index = 0;
  std::string name;
  std::string display_name;
  double score = 0.0;
  std::vector<RankedColumn> columns;
};

struct RetainedForeignKey {
  ForeignKey key;
  std::string from;  // "table.column", display names
  std::string to;
};

struct RefinedSchema {
  std::string db_id;
  std::vector<RankedTable> tables;
  std::vector<RetainedForeignKey> foreign_keys;
};

struct RefineOptions {
  std::size_t k_tables = 4;
  std::size_t k_cols = 5;
};

/// Keeps the k_tables best tables and the k_cols best columns of each; ties
/// keep catalog order. Foreign keys survive when both endpoints are kept.
RefinedSchema refine(const std::string& question, const SchemaCatalog& catalog, const RelevanceScorer& scorer,
                     const RefineOptions& options = {});

/// Every table and column in catalog order, unscored.
RefinedSchema full_schema(const SchemaCatalog& catalog);

/// "| db | t1 : c1 , c2 | t2 : c3", display names, ranked order; with
/// include_fk, "| fk : t1.c1 = t2.c2" segments follow.
std::string serialize_schema(const RefinedSchema& refined, bool include_fk = false);

}  // namespace hpsql
