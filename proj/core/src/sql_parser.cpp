#include <algorithm>
#include <array>
#include <charconv>
#include <optional>
#include <unordered_set>

#include "hpsql/error.h"
#include "hpsql/sql_ast.h"
#include "hpsql/sql_lexer.h"

namespace hpsql::sql {

namespace {

const std::unordered_set<std::string>& reserved_words() {
  static const std::unordered_set<std::string> words = {
      "select", "from",  "where", "group",  "by",   "having",   "order",  "limit", "union",
      "intersect", "except", "join", "inner", "left", "right", "outer", "cross", "natural",
      "on",     "as",    "and",   "or",     "not",  "in",       "like",   "between", "is",
      "null",   "exists", "distinct", "asc", "desc", "all",     "offset", "using"};
  return words;
}

std::optional<Aggregator> aggregator_named(const std::string& word) {
  if (word == "max") return Aggregator::max;
  if (word == "min") return Aggregator::min;
  if (word == "count") return Aggregator::count;
  if (word == "sum") return Aggregator::sum;
  if (word == "avg") return Aggregator::avg;
  return std::nullopt;
}

std::optional<ArithOp> arith_named(const Token& tok) {
  if (tok.kind != TokenKind::symbol) return std::nullopt;
  if (tok.text == "-") return ArithOp::minus;
  if (tok.text == "+") return ArithOp::plus;
  if (tok.text == "*") return ArithOp::times;
  if (tok.text == "/") return ArithOp::divide;
  return std::nullopt;
}

std::size_t edit_distance(std::string_view a, std::string_view b) {
  std::vector<std::size_t> row(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) row[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    std::size_t diag = row[0];
    row[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      std::size_t up = row[j];
      row[j] = std::min({row[j] + 1, row[j - 1] + 1, diag + (a[i - 1] == b[j - 1] ? 0 : 1)});
      diag = up;
    }
  }
  return row[b.size()];
}

struct ScopeTable {
  std::string alias;  // lowercase alias, or the table name when unaliased
  std::string name;   // lowercase table name ("" for sub-queries)
  std::optional<std::size_t> table;
  std::vector<std::string> outputs;  // sub-query output column names
};

struct Scope {
  std::vector<ScopeTable> tables;
  const Scope* parent = nullptr;
  std::vector<std::pair<std::string, SelectItem>> select_aliases;
};

struct ParsedQuery {
  SqlComponents query;
  std::vector<std::string> outputs;
};

class Parser {
 public:
  Parser(std::string_view text, const SchemaCatalog& catalog)
      : tokens_(tokenize(text)), catalog_(catalog) {}

  SqlComponents parse_statement() {
    auto parsed = parse_query(nullptr);
    while (accept(";")) {
    }
    if (peek().kind != TokenKind::end) unsupported(peek(), "trailing input");
    return std::move(parsed.query);
  }

 private:
  const Token& peek(std::size_t ahead = 0) const {
    return tokens_[std::min(pos_ + ahead, tokens_.size() - 1)];
  }
  const Token& next() {
    const Token& tok = peek();
    if (pos_ < tokens_.size() - 1) ++pos_;
    return tok;
  }
  bool accept(std::string_view word) {
    if (peek().is(word)) {
      next();
      return true;
    }
    return false;
  }
  void expect(std::string_view word) {
    if (!accept(word)) unsupported(peek(), "expected '" + std::string(word) + "'");
  }
  [[noreturn]] void unsupported(const Token& tok, const std::string& detail) const {
    throw UnsupportedSyntax(tok.kind == TokenKind::end ? "<end>" : tok.raw, tok.offset, detail);
  }
  bool is_name(const Token& tok) const {
    return tok.kind == TokenKind::quoted_identifier ||
           (tok.kind == TokenKind::identifier && !reserved_words().count(tok.text));
  }
  bool starts_subquery(std::size_t ahead = 0) const {
    return peek(ahead).is("(") && (peek(ahead + 1).is("select") || peek(ahead + 1).is("("));
  }
  bool at_set_op() const {
    return peek().is("union") || peek().is("intersect") || peek().is("except");
  }

  // query := core [set_op query]
  ParsedQuery parse_query(const Scope* parent) {
    ParsedQuery parsed = parse_core(parent);
    if (at_set_op()) {
      if (parsed.query.set_op) unsupported(peek(), "set operation after a parenthesised compound query");
      const Token& op = next();
      SetOpKind kind = op.text == "union"       ? SetOpKind::union_
                       : op.text == "intersect" ? SetOpKind::intersect
                                                : SetOpKind::except;
      if (peek().is("all")) unsupported(peek(), "ALL modifier on set operations");
      auto rhs = parse_query(parent);
      parsed.query.set_op = SetOperation{kind, Subquery(std::move(rhs.query))};
    }
    return parsed;
  }

  ParsedQuery parse_core(const Scope* parent) {
    if (peek().is("(")) {
      next();
      auto inner = parse_query(parent);
      expect(")");
      return inner;
    }
    if (!peek().is("select")) unsupported(peek(), "expected SELECT");
    next();

    ParsedQuery parsed;
    SqlComponents& q = parsed.query;
    q.distinct = accept("distinct");
    if (peek().is("all")) next();

    const std::size_t select_begin = pos_;
    const std::size_t from_pos = find_from(select_begin);
    Scope scope;
    scope.parent = parent;

    pos_ = from_pos + 1;
    parse_from(q, scope);
    const std::size_t after_from = pos_;

    pos_ = select_begin;
    parsed.outputs = parse_select_list(q, scope);
    if (pos_ != from_pos) unsupported(peek(), "unexpected token in select list");
    pos_ = after_from;

    if (accept("where")) q.where = parse_condition(scope, false);
    if (peek().is("group")) {
      next();
      expect("by");
      do {
        q.group_by.push_back(parse_column_unit(scope));
      } while (accept(","));
    }
    if (accept("having")) q.having = parse_condition(scope, true);
    if (peek().is("order")) {
      next();
      expect("by");
      do {
        OrderItem item;
        item.value = parse_value_unit(scope, true);
        if (accept("desc")) {
          item.direction = SortDirection::desc;
        } else {
          accept("asc");
        }
        q.order_by.push_back(std::move(item));
      } while (accept(","));
    }
    if (accept("limit")) {
      const Token& tok = next();
      std::int64_t value = 0;
      auto [ptr, ec] = std::from_chars(tok.text.data(), tok.text.data() + tok.text.size(), value);
      if (tok.kind != TokenKind::number || ec != std::errc() || ptr != tok.text.data() + tok.text.size() ||
          value < 0)
        unsupported(tok, "LIMIT expects a non-negative integer");
      q.limit = value;
      if (peek().is("offset") || peek().is(",")) unsupported(peek(), "LIMIT offset");
    }
    return parsed;
  }

  std::size_t find_from(std::size_t start) const {
    int depth = 0;
    for (std::size_t i = start; i < tokens_.size(); ++i) {
      const Token& tok = tokens_[i];
      if (tok.kind == TokenKind::end) break;
      if (tok.is("(")) ++depth;
      if (tok.is(")")) {
        if (depth == 0) break;
        --depth;
      }
      if (depth == 0 && tok.kind == TokenKind::identifier) {
        if (tok.text == "from") return i;
        if (tok.text == "union" || tok.text == "intersect" || tok.text == "except" ||
            tok.text == "where")
          break;
      }
    }
    unsupported(tokens_[start], "SELECT without FROM");
  }

  void parse_from(SqlComponents& q, Scope& scope) {
    q.from.push_back(parse_table_unit(scope));
    while (true) {
      if (accept(",")) {
      } else if (accept("join")) {
      } else if (peek().is("inner") && peek(1).is("join")) {
        pos_ += 2;
      } else if (peek().is("cross") && peek(1).is("join")) {
        pos_ += 2;
      } else if (peek().is("left") || peek().is("right") || peek().is("natural")) {
        unsupported(peek(), "outer/natural joins");
      } else if (peek().is("on")) {
        // ON directly after the first unit: tolerated, conjoined like any other.
      } else {
        break;
      }
      if (!peek().is("on")) q.from.push_back(parse_table_unit(scope));
      while (accept("on")) {
        Condition cond = parse_condition(scope, false);
        q.join_conditions = q.join_conditions
                                ? Condition::combine(Condition::Kind::all_of,
                                                     std::move(*q.join_conditions), std::move(cond))
                                : std::move(cond);
      }
      if (peek().is("using")) unsupported(peek(), "JOIN ... USING");
    }
  }

  TableUnit parse_table_unit(Scope& scope) {
    TableUnit unit;
    ScopeTable entry;
    if (peek().is("(")) {
      next();
      auto sub = parse_query(scope.parent);
      expect(")");
      entry.outputs = std::move(sub.outputs);
      unit.source = Subquery(std::move(sub.query));
    } else {
      const Token& tok = next();
      if (!is_name(tok)) unsupported(tok, "expected a table name");
      auto table = catalog_.find_table(tok.text);
      if (!table) {
        std::vector<std::string> candidates;
        for (const auto& t : catalog_.tables())
          if (edit_distance(to_lower(t.name), tok.text) <= 3) candidates.push_back(to_lower(t.name));
        throw ResolutionError(tok.text, std::move(candidates));
      }
      unit.source = *table;
      entry.table = *table;
      entry.name = to_lower(catalog_.tables()[*table].name);
      entry.alias = entry.name;
    }
    if (accept("as")) {
      const Token& alias = next();
      if (!is_name(alias)) unsupported(alias, "expected an alias");
      unit.alias = alias.text;
    } else if (is_name(peek())) {
      unit.alias = next().text;
    }
    if (!unit.alias.empty()) entry.alias = unit.alias;
    scope.tables.push_back(std::move(entry));
    return unit;
  }

  std::vector<std::string> parse_select_list(SqlComponents& q, Scope& scope) {
    std::vector<std::string> outputs;
    do {
      SelectItem item;
      item.value = parse_value_unit(scope, false);
      if (item.value.op == ArithOp::none && item.value.left.agg != Aggregator::none) {
        item.agg = item.value.left.agg;
        item.value.left.agg = Aggregator::none;
      }
      std::string output = output_name(item);
      if (accept("as")) {
        const Token& alias = next();
        if (!is_name(alias) && alias.kind != TokenKind::string) unsupported(alias, "expected a column alias");
        output = alias.kind == TokenKind::string ? to_lower(alias.text.substr(1, alias.text.size() - 2)) : alias.text;
        scope.select_aliases.emplace_back(output, item);
      } else if (is_name(peek())) {
        output = next().text;
        scope.select_aliases.emplace_back(output, item);
      }
      outputs.push_back(std::move(output));
      q.select.push_back(std::move(item));
    } while (accept(","));
    return outputs;
  }

  std::string output_name(const SelectItem& item) const {
    const ColumnRef& ref = item.value.left.column;
    std::string base;
    if (ref.is_derived()) {
      base = ref.derived.substr(ref.derived.find('.') + 1);
    } else if (ref.is_star()) {
      base = "*";
    } else {
      base = to_lower(catalog_.column(ref.id).name);
    }
    if (item.agg != Aggregator::none) return std::string(to_string(item.agg)) + "(" + base + ")";
    return base;
  }

  Condition parse_condition(const Scope& scope, bool allow_alias) {
    Condition c = parse_conjunction(scope, allow_alias);
    while (accept("or"))
      c = Condition::combine(Condition::Kind::any_of, std::move(c), parse_conjunction(scope, allow_alias));
    return c;
  }

  Condition parse_conjunction(const Scope& scope, bool allow_alias) {
    Condition c = parse_condition_primary(scope, allow_alias);
    while (accept("and"))
      c = Condition::combine(Condition::Kind::all_of, std::move(c), parse_condition_primary(scope, allow_alias));
    return c;
  }

  Condition parse_condition_primary(const Scope& scope, bool allow_alias) {
    if (peek().is("(") && !starts_subquery()) {
      const std::size_t saved = pos_;
      try {
        next();
        Condition group = parse_condition(scope, allow_alias);
        expect(")");
        return group;
      } catch (const SqlError&) {
        pos_ = saved;  // "(a + b) > 1": a parenthesised value, not a group
      }
    }
    return Condition::leaf(parse_predicate(scope, allow_alias));
  }

  Predicate parse_predicate(const Scope& scope, bool allow_alias) {
    Predicate p;
    if ((peek().is("not") && peek(1).is("exists")) || peek().is("exists")) {
      p.negated = accept("not");
      next();
      if (!starts_subquery()) unsupported(peek(), "EXISTS expects a sub-query");
      p.op = CompareOp::exists;
      p.value = parse_operand(scope);
      return p;
    }
    p.lhs = parse_value_unit(scope, allow_alias);
    p.negated = accept("not");
    const Token& op = next();
    if (op.is("=")) {
      p.op = CompareOp::eq;
    } else if (op.is("!=")) {
      p.op = CompareOp::ne;
    } else if (op.is("<")) {
      p.op = CompareOp::lt;
    } else if (op.is("<=")) {
      p.op = CompareOp::le;
    } else if (op.is(">")) {
      p.op = CompareOp::gt;
    } else if (op.is(">=")) {
      p.op = CompareOp::ge;
    } else if (op.is("between")) {
      p.op = CompareOp::between;
    } else if (op.is("in")) {
      p.op = CompareOp::in;
    } else if (op.is("like")) {
      p.op = CompareOp::like;
    } else if (op.is("is")) {
      p.op = CompareOp::is;
      if (accept("not")) p.negated = !p.negated;
    } else {
      unsupported(op, "expected a comparison operator");
    }
    if (p.negated && (p.op != CompareOp::between && p.op != CompareOp::in && p.op != CompareOp::like &&
                      p.op != CompareOp::is))
      unsupported(op, "NOT before a comparison operator");
    p.value = parse_operand(scope);
    if (p.op == CompareOp::between) {
      expect("and");
      p.value2 = parse_operand(scope);
    }
    return p;
  }

  std::optional<Literal> try_literal() {
    const Token& tok = peek();
    if (tok.kind == TokenKind::string) {
      next();
      return Literal{Literal::Kind::string, tok.text};
    }
    if (tok.kind == TokenKind::number) {
      next();
      return Literal{Literal::Kind::number, tok.text};
    }
    if ((tok.is("-") || tok.is("+")) && peek(1).kind == TokenKind::number) {
      std::string text = tok.text == "-" ? "-" + peek(1).text : peek(1).text;
      pos_ += 2;
      return Literal{Literal::Kind::number, text};
    }
    if (tok.is("null")) {
      next();
      return Literal{Literal::Kind::null, "null"};
    }
    if (tok.kind == TokenKind::identifier && (tok.text == "true" || tok.text == "false")) {
      next();
      return Literal{Literal::Kind::number, tok.text == "true" ? "1" : "0"};
    }
    return std::nullopt;
  }

  Operand parse_operand(const Scope& scope) {
    if (starts_subquery()) {
      next();
      auto sub = parse_query(&scope);
      expect(")");
      return Subquery(std::move(sub.query));
    }
    if (peek().is("(")) {
      const std::size_t saved = pos_;
      next();
      LiteralList list;
      while (auto lit = try_literal()) {
        list.items.push_back(std::move(*lit));
        if (!accept(",")) break;
      }
      if (!list.items.empty() && accept(")")) {
        if (list.items.size() == 1) return list.items.front();
        return list;
      }
      pos_ = saved;
    }
    if (auto lit = try_literal()) return *lit;
    return parse_column_unit(scope);
  }

  ValueUnit parse_value_unit(const Scope& scope, bool allow_alias) {
    ValueUnit unit;
    if (peek().is("(") && !starts_subquery()) {
      const std::size_t saved = pos_;
      next();
      try {
        unit = parse_value_unit(scope, allow_alias);
        expect(")");
        return unit;
      } catch (const SqlError&) {
        pos_ = saved;
      }
    }
    if (allow_alias) {
      if (auto aliased = alias_value(scope)) return *aliased;
    }
    unit.left = parse_column_unit(scope);
    if (auto op = arith_named(peek())) {
      next();
      unit.op = *op;
      unit.right = parse_column_unit(scope);
    }
    return unit;
  }

  // ORDER BY / HAVING may name a select-list alias.
  std::optional<ValueUnit> alias_value(const Scope& scope) {
    const Token& tok = peek();
    if (!is_name(tok) || peek(1).is(".") || peek(1).is("(")) return std::nullopt;
    for (const auto& [alias, item] : scope.select_aliases) {
      if (alias != tok.text) continue;
      if (lookup_bare(scope, tok.text)) return std::nullopt;
      next();
      ValueUnit value = item.value;
      if (item.agg != Aggregator::none) {
        if (value.op != ArithOp::none) unsupported(tok, "aggregated arithmetic alias");
        value.left.agg = item.agg;
      }
      return value;
    }
    return std::nullopt;
  }

  ColumnUnit parse_column_unit(const Scope& scope) {
    ColumnUnit unit;
    const Token& tok = peek();
    if (tok.kind == TokenKind::identifier && peek(1).is("(")) {
      auto agg = aggregator_named(tok.text);
      if (!agg) unsupported(tok, "unsupported function");
      pos_ += 2;
      unit.agg = *agg;
      unit.distinct = accept("distinct");
      unit.column = parse_column_ref(scope);
      expect(")");
      return unit;
    }
    if (tok.is("(") && !starts_subquery()) {
      next();
      unit = parse_column_unit(scope);
      expect(")");
      return unit;
    }
    unit.distinct = accept("distinct");
    unit.column = parse_column_ref(scope);
    return unit;
  }

  ColumnRef parse_column_ref(const Scope& scope) {
    const Token& tok = next();
    if (tok.is("*")) return ColumnRef{};
    if (!is_name(tok)) unsupported(tok, "expected a column");
    if (accept(".")) {
      const Token& col = next();
      if (col.is("*")) return ColumnRef{};
      if (!is_name(col) && col.kind != TokenKind::identifier) unsupported(col, "expected a column name");
      return resolve_qualified(scope, tok.text, col.text);
    }
    if (auto ref = lookup_bare(scope, tok.text)) return *ref;
    throw ResolutionError(tok.text, candidates(scope, tok.text));
  }

  std::optional<ColumnRef> lookup_in(const ScopeTable& entry, const std::string& name) const {
    if (entry.table) {
      if (auto id = catalog_.find_column(*entry.table, name)) return ColumnRef{*id, {}};
      return std::nullopt;
    }
    if (std::find(entry.outputs.begin(), entry.outputs.end(), name) != entry.outputs.end())
      return ColumnRef{kStarColumn, (entry.alias.empty() ? std::string("_") : entry.alias) + "." + name};
    return std::nullopt;
  }

  std::optional<ColumnRef> lookup_bare(const Scope& scope, const std::string& name) const {
    for (const Scope* s = &scope; s; s = s->parent)
      for (const auto& entry : s->tables)
        if (auto ref = lookup_in(entry, name)) return ref;
    return std::nullopt;
  }

  ColumnRef resolve_qualified(const Scope& scope, const std::string& qualifier, const std::string& name) const {
    for (const Scope* s = &scope; s; s = s->parent) {
      for (const auto& entry : s->tables) {
        if (entry.alias != qualifier) continue;
        if (auto ref = lookup_in(entry, name)) return *ref;
        throw ResolutionError(qualifier + "." + name, candidates(scope, name));
      }
      for (const auto& entry : s->tables) {
        if (entry.name != qualifier) continue;
        if (auto ref = lookup_in(entry, name)) return *ref;
      }
    }
    // Table named directly without appearing in FROM.
    if (auto table = catalog_.find_table(qualifier))
      if (auto id = catalog_.find_column(*table, name)) return ColumnRef{*id, {}};
    throw ResolutionError(qualifier + "." + name, candidates(scope, name));
  }

  std::vector<std::string> candidates(const Scope& scope, const std::string& name) const {
    std::vector<std::pair<std::size_t, std::string>> scored;
    for (const Scope* s = &scope; s; s = s->parent) {
      for (const auto& entry : s->tables) {
        std::vector<std::string> names = entry.outputs;
        if (entry.table)
          for (const auto& column : catalog_.tables()[*entry.table].columns) names.push_back(to_lower(column.name));
        for (const auto& candidate : names) {
          auto d = edit_distance(candidate, name);
          if (d <= 3 || candidate.find(name) != std::string::npos || name.find(candidate) != std::string::npos)
            scored.emplace_back(d, entry.alias + "." + candidate);
        }
      }
    }
    std::stable_sort(scored.begin(), scored.end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });
    std::vector<std::string> out;
    for (std::size_t i = 0; i < scored.size() && i < 5; ++i) out.push_back(scored[i].second);
    return out;
  }

  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
  const SchemaCatalog& catalog_;
};

}  // namespace

SqlComponents parse_sql(std::string_view sql_text, const SchemaCatalog& catalog) {
  return Parser(sql_text, catalog).parse_statement();
}

}  // namespace hpsql::sql
