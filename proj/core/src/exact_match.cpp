#include <algorithm>
#include <map>
#include <numeric>
#include <set>

#include "hpsql/evaluation.h"

namespace hpsql {

using namespace sql;

namespace {

// Foreign-key clusters, each mapped to its smallest column index.
std::map<int, int> foreign_key_map(const SchemaCatalog& catalog) {
  std::vector<int> parent(catalog.column_count());
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (const auto& fk : catalog.foreign_keys()) {
    int a = find(fk.from.value), b = find(fk.to.value);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
  std::map<int, int> out;
  for (const auto& fk : catalog.foreign_keys())
    for (int id : {fk.from.value, fk.to.value}) out[id] = find(id);
  return out;
}

class KeyBuilder {
 public:
  KeyBuilder(const SchemaCatalog& catalog, const EmOptions& options)
      : catalog_(catalog), options_(options), fk_(foreign_key_map(catalog)) {}

  std::string query(const SqlComponents& q) const {
    std::set<std::size_t> scope;
    for (const auto& unit : q.from)
      if (unit.is_table()) scope.insert(std::get<std::size_t>(unit.source));

    std::string out = "select";
    if (options_.respect_distinct && q.distinct) out += " distinct";
    std::vector<std::string> items;
    for (const auto& item : q.select) items.push_back(std::string(to_string(item.agg)) + ":" + value(item.value, scope));
    out += sorted_join(items, ",");

    std::vector<std::string> tables;
    for (const auto& unit : q.from) {
      if (unit.is_table()) {
        tables.push_back("t" + std::to_string(std::get<std::size_t>(unit.source)));
      } else {
        tables.push_back("(" + query(std::get<Subquery>(unit.source).get()) + ")");
      }
    }
    out += " from" + sorted_join(tables, ",");
    if (q.join_conditions) out += " on" + condition(*q.join_conditions, scope);
    if (q.where) out += " where" + condition(*q.where, scope);
    if (!q.group_by.empty()) {
      std::set<std::string> cols;
      for (const auto& unit : q.group_by) cols.insert(column_unit(unit, scope));
      out += " group" + sorted_join({cols.begin(), cols.end()}, ",");
    }
    if (q.having) out += " having" + condition(*q.having, scope);
    if (!q.order_by.empty()) {
      out += " order";
      for (const auto& item : q.order_by)
        out += " " + value(item.value, scope) + (item.direction == SortDirection::desc ? " desc" : " asc") + ",";
    }
    if (q.limit) out += " limit";
    if (q.set_op) out += " " + std::string(to_string(q.set_op->kind)) + " (" + query(q.set_op->rhs.get()) + ")";
    return out;
  }

 private:
  static std::string sorted_join(std::vector<std::string> parts, const char* sep) {
    std::sort(parts.begin(), parts.end());
    std::string out = "[";
    for (std::size_t i = 0; i < parts.size(); ++i) {
      if (i) out += sep;
      out += parts[i];
    }
    return out + "]";
  }

  std::string column(const ColumnRef& ref, const std::set<std::size_t>& scope) const {
    if (ref.is_derived()) return "d:" + ref.derived;
    if (ref.is_star()) return "*";
    int id = ref.id.value;
    auto table = catalog_.table_of(ref.id);
    if (table && scope.count(*table)) {
      auto it = fk_.find(id);
      if (it != fk_.end()) id = it->second;
    }
    return "c" + std::to_string(id);
  }

  std::string column_unit(const ColumnUnit& unit, const std::set<std::size_t>& scope) const {
    std::string inner = (options_.respect_distinct && unit.distinct ? "distinct " : "") + column(unit.column, scope);
    if (unit.agg == Aggregator::none) return inner;
    return std::string(to_string(unit.agg)) + "(" + inner + ")";
  }

  std::string value(const ValueUnit& v, const std::set<std::size_t>& scope) const {
    std::string out = column_unit(v.left, scope);
    if (v.op != ArithOp::none && v.right) out += std::string(to_string(v.op)) + column_unit(*v.right, scope);
    return out;
  }

  std::string operand(const Operand& o, const std::set<std::size_t>& scope) const {
    if (std::holds_alternative<Literal>(o) || std::holds_alternative<LiteralList>(o)) return "?";
    if (const auto* unit = std::get_if<ColumnUnit>(&o)) return column_unit(*unit, scope);
    return "(" + query(std::get<Subquery>(o).get()) + ")";
  }

  std::string predicate(const Predicate& p, const std::set<std::size_t>& scope) const {
    std::string lhs = p.op == CompareOp::exists ? "" : value(p.lhs, scope);
    std::string rhs = operand(p.value, scope);
    if ((p.op == CompareOp::eq || p.op == CompareOp::ne) && std::holds_alternative<ColumnUnit>(p.value) &&
        p.lhs.op == ArithOp::none && rhs < lhs)
      std::swap(lhs, rhs);
    std::string out = (p.negated ? "not " : "") + std::string(to_string(p.op)) + "(" + lhs + "," + rhs;
    if (p.value2) out += "," + operand(*p.value2, scope);
    return out + ")";
  }

  using Dnf = std::set<std::multiset<std::string>>;

  Dnf dnf(const Condition& c, const std::set<std::size_t>& scope) const {
    if (c.kind == Condition::Kind::predicate) return {{predicate(c.predicate, scope)}};
    Dnf out;
    if (c.kind == Condition::Kind::any_of) {
      for (const auto& child : c.children) {
        auto part = dnf(child, scope);
        out.insert(part.begin(), part.end());
      }
      return out;
    }
    out = {{}};
    for (const auto& child : c.children) {
      Dnf next;
      for (const auto& left : out)
        for (const auto& right : dnf(child, scope)) {
          auto merged = left;
          merged.insert(right.begin(), right.end());
          next.insert(std::move(merged));
        }
      out = std::move(next);
    }
    return out;
  }

  std::string condition(const Condition& c, const std::set<std::size_t>& scope) const {
    std::vector<std::string> disjuncts;
    for (const auto& conj : dnf(c, scope)) disjuncts.push_back(sorted_join({conj.begin(), conj.end()}, "&"));
    return sorted_join(disjuncts, "|");
  }

  const SchemaCatalog& catalog_;
  EmOptions options_;
  std::map<int, int> fk_;
};

}  // namespace

std::string em_key(const SqlComponents& q, const SchemaCatalog& catalog, const EmOptions& options) {
  return KeyBuilder(catalog, options).query(mask_values(q));
}

bool exact_set_match(const SqlComponents& gold, const SqlComponents& pred, const SchemaCatalog& catalog,
                     const EmOptions& options) {
  KeyBuilder builder(catalog, options);
  return builder.query(mask_values(gold)) == builder.query(mask_values(pred));
}

}  // namespace hpsql
