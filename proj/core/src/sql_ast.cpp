#include "hpsql/sql_ast.h"

namespace hpsql::sql {

std::string_view to_string(Aggregator agg) {
  switch (agg) {
    case Aggregator::none: return "none";
    case Aggregator::max: return "max";
    case Aggregator::min: return "min";
    case Aggregator::count: return "count";
    case Aggregator::sum: return "sum";
    case Aggregator::avg: return "avg";
  }
  return "none";
}

std::string_view to_string(ArithOp op) {
  switch (op) {
    case ArithOp::none: return "";
    case ArithOp::minus: return "-";
    case ArithOp::plus: return "+";
    case ArithOp::times: return "*";
    case ArithOp::divide: return "/";
  }
  return "";
}

std::string_view to_string(CompareOp op) {
  switch (op) {
    case CompareOp::between: return "between";
    case CompareOp::eq: return "=";
    case CompareOp::gt: return ">";
    case CompareOp::lt: return "<";
    case CompareOp::ge: return ">=";
    case CompareOp::le: return "<=";
    case CompareOp::ne: return "!=";
    case CompareOp::in: return "in";
    case CompareOp::like: return "like";
    case CompareOp::is: return "is";
    case CompareOp::exists: return "exists";
  }
  return "=";
}

std::string_view to_string(SetOpKind kind) {
  switch (kind) {
    case SetOpKind::intersect: return "intersect";
    case SetOpKind::union_: return "union";
    case SetOpKind::except: return "except";
  }
  return "union";
}

Subquery::Subquery() : ptr_(std::make_shared<const SqlComponents>()) {}

Subquery::Subquery(SqlComponents query)
    : ptr_(std::make_shared<const SqlComponents>(std::move(query))) {}

bool operator==(const Subquery& a, const Subquery& b) {
  return a.ptr_ == b.ptr_ || *a.ptr_ == *b.ptr_;
}

Condition Condition::leaf(Predicate p) {
  Condition c;
  c.kind = Kind::predicate;
  c.predicate = std::move(p);
  return c;
}

Condition Condition::combine(Kind kind, Condition lhs, Condition rhs) {
  Condition c;
  c.kind = kind;
  // Flatten chains of the same connector: a AND b AND c is one node.
  auto absorb = [&](Condition&& part) {
    if (part.kind == kind) {
      for (auto& child : part.children) c.children.push_back(std::move(child));
    } else {
      c.children.push_back(std::move(part));
    }
  };
  absorb(std::move(lhs));
  absorb(std::move(rhs));
  return c;
}

namespace {

void collect(const Condition& c, std::vector<const Predicate*>& out) {
  if (c.kind == Condition::Kind::predicate) {
    out.push_back(&c.predicate);
    return;
  }
  for (const auto& child : c.children) collect(child, out);
}

std::size_t count_kind(const Condition& c, bool only_or) {
  if (c.kind == Condition::Kind::predicate) return 0;
  std::size_t n = 0;
  if (!only_or || c.kind == Condition::Kind::any_of) n += c.children.size() - 1;
  for (const auto& child : c.children) n += count_kind(child, only_or);
  return n;
}

Operand mask_operand(const Operand& operand) {
  return std::visit(
      [](const auto& v) -> Operand {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, Literal>) {
          return Literal{};
        } else if constexpr (std::is_same_v<T, LiteralList>) {
          return Literal{};
        } else if constexpr (std::is_same_v<T, Subquery>) {
          return Subquery(mask_values(v.get()));
        } else {
          return v;
        }
      },
      operand);
}

Condition mask_condition(const Condition& c) {
  Condition out = c;
  if (c.kind == Condition::Kind::predicate) {
    out.predicate.value = mask_operand(c.predicate.value);
    if (c.predicate.value2) out.predicate.value2 = mask_operand(*c.predicate.value2);
    return out;
  }
  for (auto& child : out.children) child = mask_condition(child);
  return out;
}

}  // namespace

std::vector<const Predicate*> predicates_of(const Condition& condition) {
  std::vector<const Predicate*> out;
  collect(condition, out);
  return out;
}

std::size_t count_or_connectors(const Condition& condition) { return count_kind(condition, true); }

std::size_t count_connectors(const Condition& condition) { return count_kind(condition, false); }

SqlComponents mask_values(const SqlComponents& components) {
  SqlComponents out = components;
  for (auto& unit : out.from)
    if (auto* sub = std::get_if<Subquery>(&unit.source)) *sub = Subquery(mask_values(sub->get()));
  if (out.join_conditions) out.join_conditions = mask_condition(*out.join_conditions);
  if (out.where) out.where = mask_condition(*out.where);
  if (out.having) out.having = mask_condition(*out.having);
  if (out.set_op) out.set_op->rhs = Subquery(mask_values(out.set_op->rhs.get()));
  return out;
}

}  // namespace hpsql::sql
