#include "hpsql/evaluation.h"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <set>

#include <nlohmann/json.hpp>

#include "hpsql/error.h"
#include "hpsql/sql_lexer.h"
#include "parallel.h"

namespace hpsql {

std::string_view to_string(ExecOutcome outcome) {
  switch (outcome) {
    case ExecOutcome::match: return "match";
    case ExecOutcome::mismatch: return "mismatch";
    case ExecOutcome::pred_error: return "pred_error";
    case ExecOutcome::gold_error: return "gold_error";
  }
  return "mismatch";
}

std::optional<ExecOutcome> parse_exec_outcome(std::string_view name) {
  for (auto o : {ExecOutcome::match, ExecOutcome::mismatch, ExecOutcome::pred_error, ExecOutcome::gold_error})
    if (to_string(o) == name) return o;
  return std::nullopt;
}

std::string_view to_string(EvalType type) {
  switch (type) {
    case EvalType::match: return "match";
    case EvalType::exec: return "exec";
    case EvalType::all: return "all";
  }
  return "all";
}

std::optional<EvalType> parse_eval_type(std::string_view name) {
  for (auto t : {EvalType::match, EvalType::exec, EvalType::all})
    if (to_string(t) == name) return t;
  return std::nullopt;
}

ExecOutcome execution_match(const std::string& gold_sql, const std::string& pred_sql, const Database& db,
                            std::chrono::milliseconds timeout) {
  ResultTable gold;
  try {
    gold = db.query(gold_sql, timeout);
  } catch (const QueryError&) {
    return ExecOutcome::gold_error;
  }
  ResultTable pred;
  try {
    pred = db.query(pred_sql, timeout);
  } catch (const QueryError&) {
    return ExecOutcome::pred_error;
  }
  return results_equal(gold, pred, sql::has_top_level_order_by(gold_sql)) ? ExecOutcome::match
                                                                           : ExecOutcome::mismatch;
}

nlohmann::json to_json(const MatchOutcome& o) {
  nlohmann::json j = {{"index", o.index}, {"hardness", to_string(o.hardness)}, {"em", o.em}};
  if (o.ex) j["ex"] = to_string(*o.ex);
  if (!o.pred_error.empty()) j["pred_error"] = o.pred_error;
  return j;
}

MatchOutcome outcome_from_json(const nlohmann::json& j) {
  try {
    MatchOutcome o;
    o.index = j.at("index").get<std::size_t>();
    auto level = parse_hardness(j.at("hardness").get<std::string>());
    if (!level) throw ValidationError("unknown hardness " + j.at("hardness").dump());
    o.hardness = *level;
    o.em = j.at("em").get<bool>();
    if (j.contains("ex")) {
      auto ex = parse_exec_outcome(j["ex"].get<std::string>());
      if (!ex) throw ValidationError("unknown execution outcome " + j["ex"].dump());
      o.ex = *ex;
    }
    if (j.contains("pred_error")) o.pred_error = j["pred_error"].get<std::string>();
    return o;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("outcome record: ") + e.what());
  }
}

namespace {

double percent(std::size_t hits, std::size_t count) {
  if (count == 0) return 0.0;
  return std::round(1000.0 * static_cast<double>(hits) / static_cast<double>(count)) / 10.0;
}

}  // namespace

double LevelStats::em_percent() const { return percent(em, count); }
double LevelStats::ex_percent() const { return percent(ex, count); }

EvalReport summarize(const std::vector<MatchOutcome>& outcomes, EvalType etype, std::string fingerprint) {
  EvalReport report;
  report.etype = etype;
  report.fingerprint = std::move(fingerprint);
  report.total = outcomes.size();
  for (const auto& o : outcomes) {
    if (o.ex == ExecOutcome::gold_error) {
      ++report.excluded;
      continue;
    }
    auto& level = report.levels[static_cast<std::size_t>(o.hardness)];
    ++level.count;
    level.em += o.em ? 1 : 0;
    level.ex += o.ex == ExecOutcome::match ? 1 : 0;
  }
  for (const auto& level : report.levels) {
    report.overall.count += level.count;
    report.overall.em += level.em;
    report.overall.ex += level.ex;
  }
  return report;
}

nlohmann::json EvalReport::to_json() const {
  auto stats = [&](const LevelStats& s) {
    nlohmann::json j = {{"count", s.count}};
    if (etype != EvalType::exec) {
      j["em_matches"] = s.em;
      j["em"] = s.em_percent();
    }
    if (etype != EvalType::match) {
      j["ex_matches"] = s.ex;
      j["ex"] = s.ex_percent();
    }
    return j;
  };
  nlohmann::json j = {{"etype", to_string(etype)},
                      {"total", total},
                      {"excluded", excluded},
                      {"fingerprint", fingerprint},
                      {"overall", stats(overall)}};
  for (auto level : kHardnessLevels) j["levels"][std::string(to_string(level))] = stats(levels[static_cast<std::size_t>(level)]);
  return j;
}

std::string EvalReport::to_table() const {
  const bool show_em = etype != EvalType::exec;
  const bool show_ex = etype != EvalType::match;
  char line[128];
  std::string out;
  std::snprintf(line, sizeof line, "%-8s %7s", "level", "count");
  out += line;
  if (show_em) out += "      EM";
  if (show_ex) out += "      EX";
  out += "\n";
  auto row = [&](std::string_view name, const LevelStats& s) {
    std::snprintf(line, sizeof line, "%-8.*s %7zu", static_cast<int>(name.size()), name.data(), s.count);
    out += line;
    if (show_em) {
      std::snprintf(line, sizeof line, " %7.1f", s.em_percent());
      out += line;
    }
    if (show_ex) {
      std::snprintf(line, sizeof line, " %7.1f", s.ex_percent());
      out += line;
    }
    out += "\n";
  };
  for (auto level : kHardnessLevels) row(to_string(level), levels[static_cast<std::size_t>(level)]);
  row("all", overall);
  out += "total " + std::to_string(total) + ", excluded " + std::to_string(excluded) + "\n";
  if (!fingerprint.empty()) out += "config " + fingerprint + "\n";
  return out;
}

CorpusEvaluation evaluate_corpus(const std::vector<Example>& examples, const std::vector<std::string>& predictions,
                                 const CatalogSet& catalogs, const EvalOptions& options) {
  if (predictions.size() != examples.size())
    throw ValidationError("got " + std::to_string(predictions.size()) + " predictions for " +
                          std::to_string(examples.size()) + " examples");
  const bool exec = options.etype != EvalType::match;
  if (exec) {
    std::set<std::string> missing;
    for (const auto& ex : examples) {
      std::error_code ec;
      if (!std::filesystem::is_directory(std::filesystem::path(options.db_root) / ex.db_id, ec))
        missing.insert(ex.db_id);
    }
    if (!missing.empty()) {
      std::string list;
      for (const auto& id : missing) list += (list.empty() ? "" : ", ") + id;
      throw InfrastructureError("missing database directories under '" + options.db_root + "': " + list);
    }
  }

  CorpusEvaluation result;
  result.outcomes.resize(examples.size());
  detail::parallel_for(examples.size(), options.workers, [&](std::size_t i) {
    const auto& ex = examples[i];
    const auto& catalog = catalogs.at(ex.db_id);
    auto& outcome = result.outcomes[i];
    outcome.index = i;
    sql::SqlComponents gold;
    try {
      gold = sql::parse_sql(ex.gold_sql, catalog);
    } catch (const Error& e) {
      throw StageError("evaluation", static_cast<std::ptrdiff_t>(i), e, false);
    }
    outcome.hardness = classify_hardness(count_components(gold));
    if (options.etype != EvalType::exec) {
      try {
        outcome.em = exact_set_match(gold, sql::parse_sql(predictions[i], catalog), catalog, options.em);
      } catch (const SqlError& e) {
        outcome.em = false;
        outcome.pred_error = e.what();
      }
    }
    if (exec) {
      try {
        Database db(database_path(options.db_root, ex.db_id));
        outcome.ex = execution_match(ex.gold_sql, predictions[i], db, options.timeout);
      } catch (const InfrastructureError& e) {
        throw StageError("evaluation", static_cast<std::ptrdiff_t>(i), e, true);
      }
    }
  });
  result.report = summarize(result.outcomes, options.etype);
  return result;
}

}  // namespace hpsql
