#include "hpsql/hardness.h"

#include "hpsql/error.h"
#include "parallel.h"

namespace hpsql {

using sql::Aggregator;
using sql::CompareOp;
using sql::Condition;
using sql::Subquery;

std::string_view to_string(HardnessLevel level) {
  switch (level) {
    case HardnessLevel::easy: return "easy";
    case HardnessLevel::medium: return "medium";
    case HardnessLevel::hard: return "hard";
    case HardnessLevel::extra_hard: return "extra";
  }
  return "easy";
}

std::optional<HardnessLevel> parse_hardness(std::string_view name) {
  if (name == "easy") return HardnessLevel::easy;
  if (name == "medium") return HardnessLevel::medium;
  if (name == "hard") return HardnessLevel::hard;
  if (name == "extra" || name == "extra-hard" || name == "extra_hard") return HardnessLevel::extra_hard;
  return std::nullopt;
}

namespace {

int agg_count(const sql::ColumnUnit& unit) { return unit.agg != Aggregator::none ? 1 : 0; }

int nested_values(const sql::Predicate& p) {
  int n = std::holds_alternative<Subquery>(p.value) ? 1 : 0;
  if (p.value2 && std::holds_alternative<Subquery>(*p.value2)) ++n;
  return n;
}

// Condition as the reference parser sees it: a flat predicate/connector
// sequence in which a column-valued right-hand side swallows the following
// OR-joined predicates (its value scan only stops at AND or a clause keyword).
struct ReferenceView {
  std::vector<const sql::Predicate*> predicates;
  int ors = 0;
  int connectors = 0;
};

void flatten(const Condition& c, std::vector<const sql::Predicate*>& preds, std::vector<bool>& is_or) {
  if (c.kind == Condition::Kind::predicate) {
    preds.push_back(&c.predicate);
    return;
  }
  for (std::size_t i = 0; i < c.children.size(); ++i) {
    if (i > 0) is_or.push_back(c.kind == Condition::Kind::any_of);
    flatten(c.children[i], preds, is_or);
  }
}

bool column_valued(const sql::Predicate& p) {
  const auto& last = p.op == CompareOp::between && p.value2 ? *p.value2 : p.value;
  return std::holds_alternative<sql::ColumnUnit>(last);
}

ReferenceView reference_view(const Condition& c) {
  std::vector<const sql::Predicate*> preds;
  std::vector<bool> is_or;
  flatten(c, preds, is_or);
  ReferenceView view;
  view.predicates.push_back(preds.front());
  bool swallowing = column_valued(*preds.front());
  for (std::size_t i = 1; i < preds.size(); ++i) {
    if (swallowing && is_or[i - 1]) continue;
    ++view.connectors;
    if (is_or[i - 1]) ++view.ors;
    view.predicates.push_back(preds[i]);
    swallowing = column_valued(*preds[i]);
  }
  return view;
}

}  // namespace

ComponentCounts count_components(const sql::SqlComponents& q) {
  ComponentCounts counts;
  const Condition* clauses[] = {q.join_conditions ? &*q.join_conditions : nullptr,
                                q.where ? &*q.where : nullptr, q.having ? &*q.having : nullptr};

  counts.c1 += q.where ? 1 : 0;
  counts.c1 += q.group_by.empty() ? 0 : 1;
  counts.c1 += q.order_by.empty() ? 0 : 1;
  counts.c1 += q.limit ? 1 : 0;
  if (!q.from.empty()) counts.c1 += static_cast<int>(q.from.size()) - 1;
  std::optional<ReferenceView> views[3];
  for (int k = 0; k < 3; ++k) {
    if (!clauses[k]) continue;
    views[k] = reference_view(*clauses[k]);
    counts.c1 += views[k]->ors;
    for (const auto* p : views[k]->predicates) {
      if (p->op == CompareOp::like) ++counts.c1;
      counts.c2 += nested_values(*p);
    }
  }
  if (q.set_op) ++counts.c2;

  // The reference tests the first field of each unit for "aggregation", which
  // for condition units is the negation flag and for HAVING also the connectors.
  int aggs = 0;
  for (const auto& item : q.select)
    if (item.agg != Aggregator::none || item.value.left.agg != Aggregator::none) ++aggs;
  std::size_t where_predicates = 0;
  if (views[1]) {
    where_predicates = views[1]->predicates.size();
    for (const auto* p : views[1]->predicates) aggs += p->negated ? 1 : 0;
  }
  for (const auto& unit : q.group_by) aggs += agg_count(unit);
  for (const auto& item : q.order_by) {
    aggs += agg_count(item.value.left);
    if (item.value.right) aggs += agg_count(*item.value.right);
  }
  if (views[2]) {
    for (const auto* p : views[2]->predicates) aggs += p->negated ? 1 : 0;
    aggs += views[2]->connectors;
  }
  counts.others += aggs > 1 ? 1 : 0;
  counts.others += q.select.size() > 1 ? 1 : 0;
  counts.others += where_predicates > 1 ? 1 : 0;
  counts.others += q.group_by.size() > 1 ? 1 : 0;
  return counts;
}

HardnessLevel classify_hardness(const ComponentCounts& c) {
  if (c.c1 <= 1 && c.others == 0 && c.c2 == 0) return HardnessLevel::easy;
  if ((c.others <= 2 && c.c1 <= 1 && c.c2 == 0) || (c.c1 <= 2 && c.others < 2 && c.c2 == 0))
    return HardnessLevel::medium;
  if ((c.others > 2 && c.c1 <= 2 && c.c2 == 0) || (c.c1 > 2 && c.c1 <= 3 && c.others <= 2 && c.c2 == 0) ||
      (c.c1 <= 1 && c.others == 0 && c.c2 <= 1))
    return HardnessLevel::hard;
  return HardnessLevel::extra_hard;
}

double HardnessDistribution::percent(HardnessLevel level) const {
  if (total == 0) return 0.0;
  return 100.0 * static_cast<double>(counts[static_cast<std::size_t>(level)]) / static_cast<double>(total);
}

LabeledCorpus label_corpus(const std::vector<Example>& examples, const CatalogSet& catalogs,
                           unsigned workers) {
  LabeledCorpus corpus;
  corpus.labels.resize(examples.size());
  detail::parallel_for(examples.size(), workers, [&](std::size_t i) {
    try {
      auto q = sql::parse_sql(examples[i].gold_sql, catalogs.at(examples[i].db_id));
      auto counts = count_components(q);
      corpus.labels[i] = LabeledExample{i, classify_hardness(counts), counts};
    } catch (const Error& e) {
      throw StageError("label", static_cast<std::ptrdiff_t>(i), e, false);
    }
  });
  for (const auto& label : corpus.labels) ++corpus.distribution.counts[static_cast<std::size_t>(label.level)];
  corpus.distribution.total = corpus.labels.size();
  return corpus;
}

HardnessLevel hardness_of(std::string_view gold_sql, const SchemaCatalog& catalog) {
  return classify_hardness(count_components(sql::parse_sql(gold_sql, catalog)));
}

}  // namespace hpsql
