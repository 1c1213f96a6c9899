#include "hpsql/schema.h"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "hpsql/error.h"

namespace hpsql {

using nlohmann::json;

std::string_view to_string(ValueType type) {
  switch (type) {
    case ValueType::text: return "text";
    case ValueType::number: return "number";
    case ValueType::time: return "time";
    case ValueType::boolean: return "boolean";
    case ValueType::others: return "others";
  }
  return "others";
}

std::string to_lower(std::string_view text) {
  std::string out(text);
  for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InfrastructureError("cannot open " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

SchemaCatalog::SchemaCatalog(std::string db_id, std::vector<TableDef> tables,
                             std::vector<ForeignKey> foreign_keys,
                             std::vector<ColumnId> primary_keys)
    : db_id_(std::move(db_id)),
      tables_(std::move(tables)),
      foreign_keys_(std::move(foreign_keys)),
      primary_keys_(std::move(primary_keys)) {
  int max_id = 0;
  for (const auto& table : tables_)
    for (const auto& column : table.columns) max_id = std::max(max_id, column.id.value);
  owner_.assign(static_cast<std::size_t>(max_id) + 1, Slot{});
  std::vector<bool> seen(owner_.size(), false);
  seen[0] = true;

  column_index_.resize(tables_.size());
  for (std::size_t t = 0; t < tables_.size(); ++t) {
    const auto key = to_lower(tables_[t].name);
    if (!table_index_.emplace(key, t).second)
      throw ValidationError(db_id_ + ": duplicate table name '" + tables_[t].name + "'");
    for (std::size_t c = 0; c < tables_[t].columns.size(); ++c) {
      const auto& column = tables_[t].columns[c];
      if (column.id.value <= 0)
        throw ValidationError(db_id_ + ": column '" + column.name + "' uses reserved index " +
                              std::to_string(column.id.value));
      auto slot = static_cast<std::size_t>(column.id.value);
      if (seen[slot])
        throw ValidationError(db_id_ + ": column index " + std::to_string(slot) +
                              " assigned twice");
      seen[slot] = true;
      owner_[slot] = Slot{static_cast<std::ptrdiff_t>(t), c};
      if (!column_index_[t].emplace(to_lower(column.name), column.id).second)
        throw ValidationError(db_id_ + ": duplicate column '" + column.name + "' in table '" +
                              tables_[t].name + "'");
    }
  }
  if (!std::all_of(seen.begin(), seen.end(), [](bool b) { return b; }))
    throw ValidationError(db_id_ + ": column indexes are not contiguous");

  auto check = [&](ColumnId id, const char* what) {
    if (id.value <= 0 || static_cast<std::size_t>(id.value) >= owner_.size())
      throw ValidationError(db_id_ + ": " + what + " references column index " +
                            std::to_string(id.value) + " but the catalog has " +
                            std::to_string(owner_.size()) + " columns");
  };
  for (const auto& fk : foreign_keys_) {
    check(fk.from, "foreign key");
    check(fk.to, "foreign key");
  }
  for (const auto& pk : primary_keys_) check(pk, "primary key");
}

std::optional<std::size_t> SchemaCatalog::table_of(ColumnId id) const {
  const auto& slot = owner_.at(static_cast<std::size_t>(id.value));
  if (slot.table < 0) return std::nullopt;
  return static_cast<std::size_t>(slot.table);
}

const ColumnDef& SchemaCatalog::column(ColumnId id) const {
  static const ColumnDef star{kStarColumn, "*", "*", ValueType::text};
  const auto& slot = owner_.at(static_cast<std::size_t>(id.value));
  if (slot.table < 0) return star;
  return tables_[static_cast<std::size_t>(slot.table)].columns[slot.local];
}

std::optional<std::size_t> SchemaCatalog::find_table(std::string_view name) const {
  auto it = table_index_.find(to_lower(name));
  if (it == table_index_.end()) return std::nullopt;
  return it->second;
}

std::optional<ColumnId> SchemaCatalog::find_column(std::size_t table, std::string_view name) const {
  const auto& index = column_index_.at(table);
  auto it = index.find(to_lower(name));
  if (it == index.end()) return std::nullopt;
  return it->second;
}

std::string SchemaCatalog::qualified_name(ColumnId id) const {
  auto table = table_of(id);
  if (!table) return "*";
  return to_lower(tables_[*table].name) + "." + to_lower(column(id).name);
}

CatalogSet::CatalogSet(std::vector<SchemaCatalog> catalogs) : catalogs_(std::move(catalogs)) {
  for (std::size_t i = 0; i < catalogs_.size(); ++i)
    if (!index_.emplace(catalogs_[i].db_id(), i).second)
      throw ValidationError("duplicate db_id '" + catalogs_[i].db_id() + "'");
}

const SchemaCatalog* CatalogSet::find(std::string_view db_id) const {
  auto it = index_.find(std::string(db_id));
  return it == index_.end() ? nullptr : &catalogs_[it->second];
}

const SchemaCatalog& CatalogSet::at(std::string_view db_id) const {
  const auto* catalog = find(db_id);
  if (!catalog) throw ValidationError("unknown db_id '" + std::string(db_id) + "'");
  return *catalog;
}

namespace {

json parse_document(std::string_view text, const char* what) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw DocumentParseError(what, e.byte, e.what());
  }
}

ValueType parse_value_type(const std::string& tag, const std::string& db_id, Warnings* warnings) {
  if (tag == "text") return ValueType::text;
  if (tag == "number") return ValueType::number;
  if (tag == "time") return ValueType::time;
  if (tag == "boolean") return ValueType::boolean;
  if (tag != "others" && warnings)
    warnings->push_back(db_id + ": unknown column type '" + tag + "' mapped to others");
  return ValueType::others;
}

// primary_keys is a flat index list in Spider 1.0; later revisions nest
// composite keys as lists.
void collect_keys(const json& node, std::vector<ColumnId>& out) {
  if (node.is_array()) {
    for (const auto& child : node) collect_keys(child, out);
  } else {
    out.push_back(ColumnId{node.get<int>()});
  }
}

SchemaCatalog parse_catalog(const json& record, Warnings* warnings) {
  const auto db_id = record.at("db_id").get<std::string>();
  const auto& table_names = record.at("table_names_original");
  const auto& table_display = record.at("table_names");
  const auto& column_names = record.at("column_names_original");
  const auto& column_display = record.at("column_names");
  const auto& column_types = record.at("column_types");
  if (table_names.size() != table_display.size() || column_names.size() != column_display.size() ||
      column_names.size() != column_types.size())
    throw ValidationError(db_id + ": name/type arrays have mismatched lengths");
  if (column_names.empty() || column_names[0].at(0).get<int>() != -1)
    throw ValidationError(db_id + ": column index 0 must be the \"*\" marker");

  std::vector<TableDef> tables(table_names.size());
  for (std::size_t t = 0; t < tables.size(); ++t) {
    tables[t].name = table_names[t].get<std::string>();
    tables[t].display_name = table_display[t].get<std::string>();
  }
  for (std::size_t c = 1; c < column_names.size(); ++c) {
    const int table = column_names[c].at(0).get<int>();
    if (table < 0 || static_cast<std::size_t>(table) >= tables.size())
      throw ValidationError(db_id + ": column " + std::to_string(c) + " has no owning table");
    tables[static_cast<std::size_t>(table)].columns.push_back(ColumnDef{
        ColumnId{static_cast<int>(c)}, column_names[c].at(1).get<std::string>(),
        column_display[c].at(1).get<std::string>(),
        parse_value_type(column_types[c].get<std::string>(), db_id, warnings)});
  }

  std::vector<ForeignKey> fks;
  for (const auto& pair : record.at("foreign_keys"))
    fks.push_back(ForeignKey{ColumnId{pair.at(0).get<int>()}, ColumnId{pair.at(1).get<int>()}});
  std::vector<ColumnId> pks;
  collect_keys(record.at("primary_keys"), pks);
  return SchemaCatalog(db_id, std::move(tables), std::move(fks), std::move(pks));
}

}  // namespace

std::vector<SchemaCatalog> parse_schema_catalogs(std::string_view raw_tables_document,
                                                 Warnings* warnings) {
  const auto doc = parse_document(raw_tables_document, "tables document");
  if (!doc.is_array()) throw DocumentParseError("tables document", 0, "expected a JSON array");
  std::vector<SchemaCatalog> out;
  out.reserve(doc.size());
  for (std::size_t i = 0; i < doc.size(); ++i) {
    try {
      out.push_back(parse_catalog(doc[i], warnings));
    } catch (const json::exception& e) {
      throw DocumentParseError("tables document", i, e.what());
    }
  }
  return out;
}

std::vector<Example> parse_examples(std::string_view raw_examples_document,
                                    const CatalogSet& catalogs) {
  const auto doc = parse_document(raw_examples_document, "examples document");
  if (!doc.is_array()) throw DocumentParseError("examples document", 0, "expected a JSON array");
  std::vector<Example> out;
  out.reserve(doc.size());
  std::vector<std::size_t> unknown;
  for (std::size_t i = 0; i < doc.size(); ++i) {
    try {
      Example example{doc[i].at("db_id").get<std::string>(), doc[i].at("question").get<std::string>(),
                      doc[i].at("query").get<std::string>()};
      if (example.gold_sql.empty())
        throw DocumentParseError("examples document", i, "empty gold SQL");
      if (!catalogs.find(example.db_id)) unknown.push_back(i);
      out.push_back(std::move(example));
    } catch (const json::exception& e) {
      throw DocumentParseError("examples document", i, e.what());
    }
  }
  if (!unknown.empty()) {
    std::string list;
    for (std::size_t k = 0; k < unknown.size() && k < 20; ++k) {
      if (!list.empty()) list += ", ";
      list += std::to_string(unknown[k]) + " (" + out[unknown[k]].db_id + ")";
    }
    if (unknown.size() > 20) list += ", ...";
    throw ValidationError("examples with unknown db_id at indices: " + list);
  }
  return out;
}

json to_tables_json(const SchemaCatalog& catalog) {
  json record;
  record["db_id"] = catalog.db_id();
  json table_names = json::array(), table_display = json::array();
  for (const auto& table : catalog.tables()) {
    table_names.push_back(table.name);
    table_display.push_back(table.display_name);
  }
  json column_names = json::array(), column_display = json::array(), types = json::array();
  column_names.push_back(json::array({-1, "*"}));
  column_display.push_back(json::array({-1, "*"}));
  types.push_back("text");
  for (std::size_t c = 1; c < catalog.column_count(); ++c) {
    const ColumnId id{static_cast<int>(c)};
    const auto table = static_cast<int>(*catalog.table_of(id));
    const auto& column = catalog.column(id);
    column_names.push_back(json::array({table, column.name}));
    column_display.push_back(json::array({table, column.display_name}));
    types.push_back(std::string(to_string(column.value_type)));
  }
  json fks = json::array();
  for (const auto& fk : catalog.foreign_keys()) fks.push_back(json::array({fk.from.value, fk.to.value}));
  json pks = json::array();
  for (const auto& pk : catalog.primary_keys()) pks.push_back(pk.value);

  record["table_names_original"] = std::move(table_names);
  record["table_names"] = std::move(table_display);
  record["column_names_original"] = std::move(column_names);
  record["column_names"] = std::move(column_display);
  record["column_types"] = std::move(types);
  record["foreign_keys"] = std::move(fks);
  record["primary_keys"] = std::move(pks);
  return record;
}

}  // namespace hpsql
