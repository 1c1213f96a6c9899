#include "hpsql/refiner.h"

#include <algorithm>
#include <cctype>
#include <numeric>
#include <set>

#include "hpsql/error.h"

namespace hpsql {

std::vector<std::string> lexical_tokens(std::string_view text) {
  std::vector<std::string> out;
  std::string current;
  for (char c : text) {
    if (std::isalnum(static_cast<unsigned char>(c))) {
      current += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    } else if (!current.empty()) {
      out.push_back(std::move(current));
      current.clear();
    }
  }
  if (!current.empty()) out.push_back(std::move(current));
  return out;
}

namespace {

bool contains_span(const std::vector<std::string>& haystack, const std::vector<std::string>& needle) {
  if (needle.empty() || needle.size() > haystack.size()) return false;
  return std::search(haystack.begin(), haystack.end(), needle.begin(), needle.end()) != haystack.end();
}

double token_f1(const std::set<std::string>& question, const std::vector<std::string>& name) {
  std::set<std::string> name_set(name.begin(), name.end());
  if (question.empty() || name_set.empty()) return 0.0;
  std::size_t overlap = 0;
  for (const auto& t : name_set) overlap += question.count(t);
  if (overlap == 0) return 0.0;
  double precision = static_cast<double>(overlap) / static_cast<double>(question.size());
  double recall = static_cast<double>(overlap) / static_cast<double>(name_set.size());
  return 2 * precision * recall / (precision + recall);
}

std::size_t longest_common_substring(const std::string& a, const std::string& b) {
  std::vector<std::size_t> prev(b.size() + 1, 0), cur(b.size() + 1, 0);
  std::size_t best = 0;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    for (std::size_t j = 1; j <= b.size(); ++j) {
      cur[j] = a[i - 1] == b[j - 1] ? prev[j - 1] + 1 : 0;
      best = std::max(best, cur[j]);
    }
    std::swap(prev, cur);
  }
  return best;
}

std::string concat(const std::vector<std::string>& tokens) {
  return std::accumulate(tokens.begin(), tokens.end(), std::string());
}

}  // namespace

double lexical_score(std::string_view question, std::string_view item_name, std::string_view item_display) {
  const auto q = lexical_tokens(question);
  const std::set<std::string> q_set(q.begin(), q.end());
  const std::string q_concat = concat(q);
  double best = 0.0;
  for (const auto& name : {lexical_tokens(item_name), lexical_tokens(item_display)}) {
    if (name.empty()) continue;
    if (contains_span(q, name)) return 1.0;
    best = std::max(best, token_f1(q_set, name));
    const std::string n_concat = concat(name);
    double ratio = static_cast<double>(longest_common_substring(q_concat, n_concat)) /
                   static_cast<double>(n_concat.size());
    best = std::max(best, 0.8 * ratio);
  }
  return best;
}

std::vector<double> LexicalScorer::score(const std::string& question, const std::vector<SchemaItem>& items) const {
  std::vector<double> out;
  out.reserve(items.size());
  for (const auto& item : items) {
    if (item.kind == SchemaItem::Kind::table) {
      out.push_back(lexical_score(question, item.table, item.table_display));
    } else {
      out.push_back(lexical_score(question, item.column, item.column_display));
    }
  }
  return out;
}

EndpointScorer::EndpointScorer(EndpointConfig config) : endpoint_(std::move(config)) {}

std::vector<double> EndpointScorer::score(const std::string& question, const std::vector<SchemaItem>& items) const {
  nlohmann::json request = {{"question", question}, {"items", nlohmann::json::array()}};
  for (const auto& item : items) {
    nlohmann::json entry = {{"kind", item.kind == SchemaItem::Kind::table ? "table" : "column"},
                            {"table", item.table}};
    if (item.kind == SchemaItem::Kind::column) entry["column"] = item.column;
    request["items"].push_back(std::move(entry));
  }
  nlohmann::json reply;
  try {
    reply = endpoint_.post("/score", request);
  } catch (const ServiceUnavailable& e) {
    throw ScorerUnavailable(e.what());
  }
  if (!reply.is_object() || !reply.contains("scores") || !reply["scores"].is_array())
    throw ProtocolError("/score reply lacks a \"scores\" array");
  const auto& scores = reply["scores"];
  if (scores.size() != items.size())
    throw ProtocolError("/score returned " + std::to_string(scores.size()) + " scores for " +
                        std::to_string(items.size()) + " items");
  std::vector<double> out;
  out.reserve(scores.size());
  for (const auto& s : scores) {
    if (!s.is_number()) throw ProtocolError("/score reply holds a non-numeric score");
    double value = s.get<double>();
    if (!(value >= 0.0 && value <= 1.0)) throw ProtocolError("/score value " + s.dump() + " outside [0, 1]");
    out.push_back(value);
  }
  return out;
}

namespace {

// Stable descending order of `scores`, truncated to k.
std::vector<std::size_t> top_k(const std::vector<double>& scores, std::size_t k) {
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });
  if (order.size() > k) order.resize(k);
  return order;
}

std::string display_of(const SchemaCatalog& catalog, ColumnId id) {
  auto table = catalog.table_of(id);
  if (!table) return "*";
  return catalog.tables()[*table].display_name + "." + catalog.column(id).display_name;
}

void retain_keys(const SchemaCatalog& catalog, RefinedSchema& refined) {
  std::set<int> kept;
  for (const auto& t : refined.tables)
    for (const auto& c : t.columns) kept.insert(c.column.id.value);
  for (const auto& fk : catalog.foreign_keys())
    if (kept.count(fk.from.value) && kept.count(fk.to.value))
      refined.foreign_keys.push_back({fk, display_of(catalog, fk.from), display_of(catalog, fk.to)});
}

}  // namespace

RefinedSchema refine(const std::string& question, const SchemaCatalog& catalog, const RelevanceScorer& scorer,
                     const RefineOptions& options) {
  if (options.k_tables < 1 || options.k_cols < 1) throw ValidationError("k_tables and k_cols must be >= 1");
  const auto& tables = catalog.tables();
  std::vector<SchemaItem> items;
  for (const auto& t : tables) {
    items.push_back({SchemaItem::Kind::table, t.name, t.display_name, {}, {}});
    for (const auto& c : t.columns)
      items.push_back({SchemaItem::Kind::column, t.name, t.display_name, c.name, c.display_name});
  }
  const auto scores = items.empty() ? std::vector<double>{} : scorer.score(question, items);
  if (scores.size() != items.size()) throw ProtocolError("scorer returned a wrong number of scores");

  std::vector<double> table_scores;
  std::vector<std::vector<double>> column_scores(tables.size());
  std::size_t pos = 0;
  for (std::size_t t = 0; t < tables.size(); ++t) {
    table_scores.push_back(scores[pos++]);
    for (std::size_t c = 0; c < tables[t].columns.size(); ++c) column_scores[t].push_back(scores[pos++]);
  }

  RefinedSchema refined;
  refined.db_id = catalog.db_id();
  for (std::size_t t : top_k(table_scores, options.k_tables)) {
    RankedTable ranked{t, tables[t].name, tables[t].display_name, table_scores[t], {}};
    for (std::size_t c : top_k(column_scores[t], options.k_cols))
      ranked.columns.push_back({tables[t].columns[c], column_scores[t][c]});
    refined.tables.push_back(std::move(ranked));
  }
  retain_keys(catalog, refined);
  return refined;
}

RefinedSchema full_schema(const SchemaCatalog& catalog) {
  RefinedSchema refined;
  refined.db_id = catalog.db_id();
  for (std::size_t t = 0; t < catalog.tables().size(); ++t) {
    const auto& table = catalog.tables()[t];
    RankedTable ranked{t, table.name, table.display_name, 1.0, {}};
    for (const auto& c : table.columns) ranked.columns.push_back({c, 1.0});
    refined.tables.push_back(std::move(ranked));
  }
  retain_keys(catalog, refined);
  return refined;
}

std::string serialize_schema(const RefinedSchema& refined, bool include_fk) {
  std::string out = "| " + refined.db_id;
  for (const auto& table : refined.tables) {
    out += " | " + table.display_name + " :";
    for (std::size_t i = 0; i < table.columns.size(); ++i) {
      out += i == 0 ? " " : " , ";
      out += table.columns[i].column.display_name;
    }
  }
  if (include_fk)
    for (const auto& fk : refined.foreign_keys) out += " | fk : " + fk.from + " = " + fk.to;
  return out;
}

}  // namespace hpsql
