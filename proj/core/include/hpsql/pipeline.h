#pragma once

#include <array>
#include <chrono>
#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "hpsql/evaluation.h"
#include "hpsql/generation.h"
#include "hpsql/hardness.h"
#include "hpsql/prompt.h"
#include "hpsql/refiner.h"

namespace hpsql {

enum class ScorerKind { lexical, endpoint };
enum class PredictorKind { oracle, heuristic, endpoint };
enum class GeneratorKind { gold_echo, replay, endpoint };
enum class SchemaView { refined, full };

/// Everything a run depends on. Loaded from one JSON document; CLI flags
/// override individual fields.
struct PipelineConfig {
  std::string tables_path = "data/spider/tables.json";
  std::string examples_path = "data/spider/dev.json";
  std::string db_root = "data/spider/database";
  std::string output_dir = "hpsql-out";

  ScorerKind scorer = ScorerKind::lexical;
  std::string scorer_address;
  PredictorKind predictor = PredictorKind::oracle;
  std::string predictor_address;
  std::string heuristic_rules_path;  // empty: built-in table
  GeneratorKind generator = GeneratorKind::gold_echo;
  std::string generator_address;
  std::string replay_path;

  std::size_t k_tables = 4;
  std::size_t k_cols = 5;
  bool include_fk = false;
  PromptLayout layout = PromptLayout::token_question_schema;
  SchemaView predictor_schema = SchemaView::refined;

  unsigned concurrency = 4;
  std::chrono::milliseconds endpoint_timeout{30000};
  int endpoint_attempts = 3;
  std::chrono::milliseconds endpoint_backoff{200};
  std::chrono::milliseconds query_timeout{30000};
  bool placeholder_on_failure = false;
  EvalType etype = EvalType::all;
  bool respect_distinct = false;

  static PipelineConfig from_json(const nlohmann::json& document);
  static PipelineConfig load(const std::string& path);
  nlohmann::json to_json() const;
  /// Throws ValidationError on out-of-range values or a missing address/path
  /// for the chosen implementations.
  void validate() const;
  /// "fnv1a64:<16 hex>" over the canonical JSON, minus output_dir and
  /// concurrency (they cannot change results).
  std::string fingerprint() const;

  EndpointConfig endpoint(const std::string& address) const;
};

/// Artifact file names inside output_dir.
namespace artifact {
inline constexpr const char* examples = "examples.jsonl";
inline constexpr const char* labels = "labels.jsonl";
inline constexpr const char* refined = "refined.jsonl";
inline constexpr const char* prompts = "prompts.jsonl";
inline constexpr const char* predictions = "predictions.jsonl";
inline constexpr const char* outcomes = "outcomes.jsonl";
inline constexpr const char* report_json = "report.json";
inline constexpr const char* report_text = "report.txt";
inline constexpr const char* ablation_json = "ablation.json";
inline constexpr const char* ablation_text = "ablation.txt";
}  // namespace artifact

/// Predictor accuracy against oracle labels, per gold level and overall.
struct AccuracyRow {
  std::array<std::size_t, 4> correct{};
  std::array<std::size_t, 4> count{};

  double percent(std::optional<HardnessLevel> level) const;  // nullopt: overall
};

struct AblationReport {
  AccuracyRow refined;
  AccuracyRow full;
  std::string fingerprint;

  nlohmann::json to_json() const;
  std::string to_table() const;
};

struct StageSummary {
  EvalReport report;
  std::size_t generation_failures = 0;
  bool partial() const { return generation_failures > 0; }
};

/// Stage runner over one output directory. Each stage reads the artifacts
/// of the stages before it and raises MissingArtifact naming the producing
/// subcommand when they are absent. Errors are rethrown as StageError.
class Pipeline {
 public:
  /// `log` receives per-stage wall-clock lines; may be null.
  explicit Pipeline(PipelineConfig config, std::ostream* log = nullptr);

  const PipelineConfig& config() const noexcept { return config_; }

  std::size_t ingest();
  HardnessDistribution label();
  void refine();
  void compose();
  std::size_t generate();
  StageSummary evaluate(const std::optional<std::string>& predictions_path = std::nullopt);
  AblationReport ablate();
  StageSummary report();
  StageSummary run();

  std::string path_of(const char* name) const;

 private:
  const CatalogSet& catalogs();
  std::vector<Example> load_examples() const;
  std::vector<nlohmann::json> require(const char* name, const char* producer) const;
  template <typename Fn>
  auto stage(const char* name, Fn&& fn);

  PipelineConfig config_;
  std::ostream* log_;
  std::optional<CatalogSet> catalogs_;
};

/// Loads catalogs and examples from the dataset paths of `config`.
CatalogSet load_catalogs(const std::string& tables_path, Warnings* warnings = nullptr);

}  // namespace hpsql
