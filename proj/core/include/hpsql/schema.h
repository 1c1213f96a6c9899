#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <nlohmann/json_fwd.hpp>

namespace hpsql {

enum class ValueType { text, number, time, boolean, others };

std::string_view to_string(ValueType type);

/// Index into a catalog's flat column list. Index 0 is the "*" marker, which
/// belongs to no table; every other id belongs to exactly one table.
struct ColumnId {
  int value = 0;

  bool is_star() const noexcept { return value == 0; }
  friend auto operator<=>(const ColumnId&, const ColumnId&) = default;
};

inline constexpr ColumnId kStarColumn{0};

struct ColumnDef {
  ColumnId id;
  std::string name;          // original identifier, as written in gold SQL
  std::string display_name;  // natural-language name
  ValueType value_type = ValueType::others;

  friend bool operator==(const ColumnDef&, const ColumnDef&) = default;
};

struct TableDef {
  std::string name;
  std::string display_name;
  std::vector<ColumnDef> columns;  // excludes "*"

  friend bool operator==(const TableDef&, const TableDef&) = default;
};

struct ForeignKey {
  ColumnId from;
  ColumnId to;

  friend bool operator==(const ForeignKey&, const ForeignKey&) = default;
};

/// One database of the benchmark: tables, columns, keys.
///
/// Immutable after construction; safe to share between threads. Lookups take
/// identifiers case-insensitively.
class SchemaCatalog {
 public:
  SchemaCatalog() = default;

  /// Validates the invariants (unique table names, unique column names per
  /// table, key references in range) and builds lookup indexes. Throws
  /// ValidationError naming `db_id`.
  SchemaCatalog(std::string db_id, std::vector<TableDef> tables,
                std::vector<ForeignKey> foreign_keys, std::vector<ColumnId> primary_keys);

  const std::string& db_id() const noexcept { return db_id_; }
  const std::vector<TableDef>& tables() const noexcept { return tables_; }
  const std::vector<ForeignKey>& foreign_keys() const noexcept { return foreign_keys_; }
  const std::vector<ColumnId>& primary_keys() const noexcept { return primary_keys_; }

  /// Number of entries in the flat column list, "*" included.
  std::size_t column_count() const noexcept { return owner_.size(); }

  /// Owning table index of a column; nullopt for "*". Throws std::out_of_range.
  std::optional<std::size_t> table_of(ColumnId id) const;
  const ColumnDef& column(ColumnId id) const;

  std::optional<std::size_t> find_table(std::string_view name) const;
  std::optional<ColumnId> find_column(std::size_t table, std::string_view name) const;

  /// "table.column" in lowercase original names; "*" for the marker.
  std::string qualified_name(ColumnId id) const;

  friend bool operator==(const SchemaCatalog& a, const SchemaCatalog& b) {
    return a.db_id_ == b.db_id_ && a.tables_ == b.tables_ && a.foreign_keys_ == b.foreign_keys_ &&
           a.primary_keys_ == b.primary_keys_;
  }

 private:
  struct Slot {
    std::ptrdiff_t table = -1;
    std::size_t local = 0;
  };

  std::string db_id_;
  std::vector<TableDef> tables_;
  std::vector<ForeignKey> foreign_keys_;
  std::vector<ColumnId> primary_keys_;
  std::vector<Slot> owner_;
  std::unordered_map<std::string, std::size_t> table_index_;
  std::vector<std::unordered_map<std::string, ColumnId>> column_index_;
};

/// One benchmark example: question, gold SQL, database.
struct Example {
  std::string db_id;
  std::string question;
  std::string gold_sql;

  friend bool operator==(const Example&, const Example&) = default;
};

/// Catalogs keyed by db_id, keeping document order for iteration.
class CatalogSet {
 public:
  CatalogSet() = default;
  explicit CatalogSet(std::vector<SchemaCatalog> catalogs);

  const SchemaCatalog* find(std::string_view db_id) const;
  const SchemaCatalog& at(std::string_view db_id) const;
  const std::vector<SchemaCatalog>& all() const noexcept { return catalogs_; }
  std::size_t size() const noexcept { return catalogs_.size(); }
  bool empty() const noexcept { return catalogs_.empty(); }

 private:
  std::vector<SchemaCatalog> catalogs_;
  std::unordered_map<std::string, std::size_t> index_;
};

/// Non-fatal diagnostics from ingestion (e.g. unknown column types).
using Warnings = std::vector<std::string>;

/// Parses a `tables.json` document. Column index positions are preserved so
/// the document's foreign-key index pairs stay valid as ColumnIds.
std::vector<SchemaCatalog> parse_schema_catalogs(std::string_view raw_tables_document,
                                                 Warnings* warnings = nullptr);

/// Parses an example document (`train_spider.json`, `dev.json`). The
/// pre-parsed `sql` trees are ignored.
std::vector<Example> parse_examples(std::string_view raw_examples_document,
                                    const CatalogSet& catalogs);

/// Inverse of parse_schema_catalogs for one record.
nlohmann::json to_tables_json(const SchemaCatalog& catalog);

/// Lowercases ASCII letters.
std::string to_lower(std::string_view text);

std::string read_file(const std::string& path);

}  // namespace hpsql
