#include "oracle_scorer.h"

namespace hpsql::testing {

using namespace sql;

namespace {

class Collector {
 public:
  explicit Collector(GoldItems& out) : out_(out) {}

  void query(const SqlComponents& q) {
    for (const auto& unit : q.from) {
      if (const auto* table = std::get_if<std::size_t>(&unit.source))
        out_.tables.insert(*table);
      else
        query(std::get<Subquery>(unit.source).get());
    }
    for (const auto& item : q.select) value(item.value);
    if (q.join_conditions) condition(*q.join_conditions);
    if (q.where) condition(*q.where);
    for (const auto& unit : q.group_by) column(unit);
    if (q.having) condition(*q.having);
    for (const auto& item : q.order_by) value(item.value);
    if (q.set_op) query(q.set_op->rhs.get());
  }

 private:
  void column(const ColumnUnit& unit) {
    if (!unit.column.is_star() && !unit.column.is_derived()) out_.columns.insert(unit.column.id);
  }
  void value(const ValueUnit& unit) {
    column(unit.left);
    if (unit.right) column(*unit.right);
  }
  void operand(const Operand& o) {
    if (const auto* unit = std::get_if<ColumnUnit>(&o)) column(*unit);
    if (const auto* sub = std::get_if<Subquery>(&o)) query(sub->get());
  }
  void condition(const Condition& c) {
    if (c.kind == Condition::Kind::predicate) {
      value(c.predicate.lhs);
      operand(c.predicate.value);
      if (c.predicate.value2) operand(*c.predicate.value2);
      return;
    }
    for (const auto& child : c.children) condition(child);
  }

  GoldItems& out_;
};

}  // namespace

GoldItems gold_items(const SqlComponents& q, const SchemaCatalog&) {
  GoldItems items;
  Collector(items).query(q);
  return items;
}

GoldItemScorer::GoldItemScorer(const SchemaCatalog& catalog, GoldItems items)
    : catalog_(catalog), gold_(std::move(items)) {}

std::vector<double> GoldItemScorer::score(const std::string&, const std::vector<SchemaItem>& items) const {
  std::vector<double> scores;
  scores.reserve(items.size());
  for (const auto& item : items) {
    const auto table = catalog_.find_table(item.table);
    bool hit = false;
    if (table && item.kind == SchemaItem::Kind::table) {
      hit = gold_.tables.count(*table) != 0;
    } else if (table) {
      const auto column = catalog_.find_column(*table, item.column);
      hit = column && gold_.columns.count(*column) != 0;
    }
    scores.push_back(hit ? 1.0 : 0.0);
  }
  return scores;
}

}  // namespace hpsql::testing
