#pragma once

#include <array>
#include <chrono>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "hpsql/hardness.h"
#include "hpsql/sql_ast.h"
#include "hpsql/sqlite_db.h"

namespace hpsql {

struct EmOptions {
  bool respect_distinct = false;  // the reference evaluator ignores DISTINCT
};

/// Canonical text of a query for set comparison: values masked, columns
/// linked by foreign keys collapsed to one representative, unordered
/// components sorted, conditions in disjunctive normal form.
std::string em_key(const sql::SqlComponents& q, const SchemaCatalog& catalog, const EmOptions& options = {});

bool exact_set_match(const sql::SqlComponents& gold, const sql::SqlComponents& pred, const SchemaCatalog& catalog,
                     const EmOptions& options = {});

enum class ExecOutcome { match, mismatch, pred_error, gold_error };

std::string_view to_string(ExecOutcome outcome);
std::optional<ExecOutcome> parse_exec_outcome(std::string_view name);

/// Ordered comparison when the gold SQL has a top-level ORDER BY.
ExecOutcome execution_match(const std::string& gold_sql, const std::string& pred_sql, const Database& db,
                            std::chrono::milliseconds timeout = std::chrono::seconds(30));

enum class EvalType { match, exec, all };

std::string_view to_string(EvalType type);
std::optional<EvalType> parse_eval_type(std::string_view name);

struct MatchOutcome {
  std::size_t index = 0;
  HardnessLevel hardness = HardnessLevel::easy;
  bool em = false;
  std::optional<ExecOutcome> ex;  // absent when execution is not evaluated
  std::string pred_error;         // parse or execution failure of the prediction

  friend bool operator==(const MatchOutcome&, const MatchOutcome&) = default;
};

nlohmann::json to_json(const MatchOutcome& outcome);
MatchOutcome outcome_from_json(const nlohmann::json& record);

struct LevelStats {
  std::size_t count = 0;
  std::size_t em = 0;
  std::size_t ex = 0;

  double em_percent() const;
  double ex_percent() const;
  friend bool operator==(const LevelStats&, const LevelStats&) = default;
};

struct EvalReport {
  EvalType etype = EvalType::all;
  std::array<LevelStats, 4> levels{};
  LevelStats overall;
  std::size_t total = 0;     // examples seen
  std::size_t excluded = 0;  // gold SQL failed on its own database
  std::string fingerprint;

  nlohmann::json to_json() const;
  /// Levels as rows, EM/EX as columns; ends with '\n'.
  std::string to_table() const;
};

/// Deterministic fold of per-example outcomes in input order.
EvalReport summarize(const std::vector<MatchOutcome>& outcomes, EvalType etype, std::string fingerprint = {});

struct EvalOptions {
  EvalType etype = EvalType::all;
  std::string db_root;
  unsigned workers = 0;
  std::chrono::milliseconds timeout{30000};
  EmOptions em;
};

struct CorpusEvaluation {
  std::vector<MatchOutcome> outcomes;
  EvalReport report;
};

/// `predictions[i]` answers `examples[i]`. With execution enabled every
/// example's database must exist under db_root (InfrastructureError listing
/// the missing db_ids otherwise).
CorpusEvaluation evaluate_corpus(const std::vector<Example>& examples, const std::vector<std::string>& predictions,
                                 const CatalogSet& catalogs, const EvalOptions& options);

}  // namespace hpsql
