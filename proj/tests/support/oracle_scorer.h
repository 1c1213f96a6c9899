#pragma once

#include <cstddef>
#include <set>
#include <string>
#include <vector>

#include "hpsql/refiner.h"
#include "hpsql/sql_ast.h"

namespace hpsql::testing {

/// Catalog tables and columns a query touches, sub-queries and set arms
/// included. "*" and derived-table columns are not items.
struct GoldItems {
  std::set<std::size_t> tables;
  std::set<ColumnId> columns;
};

GoldItems gold_items(const sql::SqlComponents& q, const SchemaCatalog& catalog);

/// Scores 1.0 for gold items and 0.0 for everything else.
class GoldItemScorer final : public RelevanceScorer {
 public:
  GoldItemScorer(const SchemaCatalog& catalog, GoldItems items);
  std::vector<double> score(const std::string& question, const std::vector<SchemaItem>& items) const override;

 private:
  const SchemaCatalog& catalog_;
  GoldItems gold_;
};

}  // namespace hpsql::testing
