#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "hpsql/schema.h"

namespace hpsql::sql {

enum class Aggregator { none, max, min, count, sum, avg };
enum class ArithOp { none, minus, plus, times, divide };
enum class CompareOp { between, eq, gt, lt, ge, le, ne, in, like, is, exists };
enum class SetOpKind { intersect, union_, except };
enum class SortDirection { asc, desc };

std::string_view to_string(Aggregator agg);
std::string_view to_string(ArithOp op);
std::string_view to_string(CompareOp op);
std::string_view to_string(SetOpKind kind);

struct SqlComponents;

/// Immutable, shared handle to a nested query. Compares by value.
class Subquery {
 public:
  Subquery();
  explicit Subquery(SqlComponents query);

  const SqlComponents& get() const noexcept { return *ptr_; }
  const SqlComponents* operator->() const noexcept { return ptr_.get(); }

  friend bool operator==(const Subquery& a, const Subquery& b);

 private:
  std::shared_ptr<const SqlComponents> ptr_;
};

/// A resolved column: a catalog column, the "*" marker, or an output column
/// of a sub-query in FROM (then `derived` holds "alias.name").
struct ColumnRef {
  ColumnId id = kStarColumn;
  std::string derived;

  bool is_star() const noexcept { return derived.empty() && id.is_star(); }
  bool is_derived() const noexcept { return !derived.empty(); }
  friend bool operator==(const ColumnRef&, const ColumnRef&) = default;
};

struct ColumnUnit {
  Aggregator agg = Aggregator::none;
  ColumnRef column;
  bool distinct = false;

  friend bool operator==(const ColumnUnit&, const ColumnUnit&) = default;
};

/// `left [op right]`.
struct ValueUnit {
  ArithOp op = ArithOp::none;
  ColumnUnit left;
  std::optional<ColumnUnit> right;

  friend bool operator==(const ValueUnit&, const ValueUnit&) = default;
};

struct SelectItem {
  Aggregator agg = Aggregator::none;
  ValueUnit value;

  friend bool operator==(const SelectItem&, const SelectItem&) = default;
};

struct Literal {
  enum class Kind { number, string, null, masked };
  Kind kind = Kind::masked;
  std::string text;  // verbatim lexeme, quotes included for strings

  friend bool operator==(const Literal&, const Literal&) = default;
};

struct LiteralList {
  std::vector<Literal> items;

  friend bool operator==(const LiteralList&, const LiteralList&) = default;
};

using Operand = std::variant<Literal, ColumnUnit, Subquery, LiteralList>;

struct Predicate {
  bool negated = false;
  CompareOp op = CompareOp::eq;
  ValueUnit lhs;
  Operand value;
  std::optional<Operand> value2;  // upper bound of BETWEEN

  friend bool operator==(const Predicate&, const Predicate&) = default;
};

/// Boolean combination of predicates, kept in source shape. OR counts are
/// taken from this tree; set comparison normalises it separately.
struct Condition {
  enum class Kind { predicate, all_of, any_of };
  Kind kind = Kind::predicate;
  Predicate predicate;
  std::vector<Condition> children;

  static Condition leaf(Predicate p);
  static Condition combine(Kind kind, Condition lhs, Condition rhs);

  friend bool operator==(const Condition&, const Condition&) = default;
};

struct TableUnit {
  std::variant<std::size_t, Subquery> source;  // catalog table index or sub-query
  std::string alias;                           // lowercase; empty when none

  bool is_table() const noexcept { return source.index() == 0; }
  friend bool operator==(const TableUnit&, const TableUnit&) = default;
};

struct OrderItem {
  ValueUnit value;
  SortDirection direction = SortDirection::asc;

  friend bool operator==(const OrderItem&, const OrderItem&) = default;
};

struct SetOperation {
  SetOpKind kind = SetOpKind::union_;
  Subquery rhs;

  friend bool operator==(const SetOperation&, const SetOperation&) = default;
};

/// Canonical parse of one SELECT statement of the benchmark dialect.
struct SqlComponents {
  bool distinct = false;
  std::vector<SelectItem> select;
  std::vector<TableUnit> from;
  std::optional<Condition> join_conditions;  // all ON clauses, conjoined
  std::optional<Condition> where;
  std::vector<ColumnUnit> group_by;
  std::optional<Condition> having;
  std::vector<OrderItem> order_by;
  std::optional<std::int64_t> limit;
  std::optional<SetOperation> set_op;

  friend bool operator==(const SqlComponents&, const SqlComponents&) = default;
};

/// Leaf predicates of a condition, left to right.
std::vector<const Predicate*> predicates_of(const Condition& condition);
/// Number of OR (resp. all) binary connectors the source text contained.
std::size_t count_or_connectors(const Condition& condition);
std::size_t count_connectors(const Condition& condition);

/// Replaces every literal (predicate values, BETWEEN bounds, IN lists) by a
/// type-erased placeholder, recursing into sub-queries. Column operands and
/// LIMIT counts are kept.
SqlComponents mask_values(const SqlComponents& components);

/// Parses one statement against `catalog`. Throws UnsupportedSyntax for
/// constructs outside the dialect and ResolutionError for unknown names.
SqlComponents parse_sql(std::string_view sql_text, const SchemaCatalog& catalog);

}  // namespace hpsql::sql
