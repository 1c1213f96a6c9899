#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "hpsql/error.h"
#include "hpsql/pipeline.h"

namespace {

enum Exit { kOk = 0, kValidation = 1, kInfrastructure = 2, kPartial = 3 };

struct Overrides {
  std::optional<std::string> tables, dataset, db_root, out;
  std::optional<std::string> scorer, scorer_address;
  std::optional<std::string> predictor, predictor_address, rules, predictor_schema;
  std::optional<std::string> generator, generator_address, replay;
  std::optional<std::size_t> k_tables, k_cols;
  std::optional<std::string> layout, etype;
  std::optional<unsigned> concurrency;
  std::optional<long> timeout_ms, query_timeout_ms;
  std::optional<int> attempts;
  bool include_fk = false, placeholder = false, respect_distinct = false;
};

void add_overrides(CLI::App& app, Overrides& o) {
  app.add_option("--tables", o.tables, "tables.json of the dataset");
  app.add_option("--dataset", o.dataset, "example document (dev.json, train_spider.json)");
  app.add_option("--db-root", o.db_root, "directory holding <db_id>/<db_id>.sqlite");
  app.add_option("--out", o.out, "artifact directory");
  app.add_option("--scorer", o.scorer, "lexical | endpoint");
  app.add_option("--scorer-address", o.scorer_address, "http://host:port of the /score service");
  app.add_option("--predictor", o.predictor, "oracle | heuristic | endpoint");
  app.add_option("--predictor-address", o.predictor_address, "http://host:port of the /classify service");
  app.add_option("--rules", o.rules, "heuristic rule table (JSON)");
  app.add_option("--predictor-schema", o.predictor_schema, "refined | full schema text for the predictor");
  app.add_option("--generator", o.generator, "gold_echo | replay | endpoint");
  app.add_option("--generator-address", o.generator_address, "http://host:port of the /generate service");
  app.add_option("--replay", o.replay, "prediction file for the replay generator");
  app.add_option("--k-tables", o.k_tables, "tables kept by the refiner");
  app.add_option("--k-cols", o.k_cols, "columns kept per table");
  app.add_option("--layout", o.layout, "token_question_schema | token_schema_question");
  app.add_option("--etype", o.etype, "match | exec | all");
  app.add_option("--concurrency", o.concurrency, "bound on parallel work and in-flight requests");
  app.add_option("--timeout-ms", o.timeout_ms, "endpoint request timeout");
  app.add_option("--attempts", o.attempts, "endpoint tries per request");
  app.add_option("--query-timeout-ms", o.query_timeout_ms, "per-query SQLite budget");
  app.add_flag("--include-fk", o.include_fk, "append foreign-key segments to schema text");
  app.add_flag("--placeholder-on-failure", o.placeholder, "emit SELECT 1 for failed generations and continue");
  app.add_flag("--respect-distinct", o.respect_distinct, "EM distinguishes DISTINCT");
}

template <typename Enum>
Enum pick(const std::string& text, std::initializer_list<std::pair<Enum, const char*>> names, const char* flag) {
  for (const auto& [e, name] : names)
    if (text == name) return e;
  throw hpsql::ValidationError(std::string(flag) + ": unknown value '" + text + "'");
}

void apply(const Overrides& o, hpsql::PipelineConfig& c) {
  using namespace hpsql;
  if (o.tables) c.tables_path = *o.tables;
  if (o.dataset) c.examples_path = *o.dataset;
  if (o.db_root) c.db_root = *o.db_root;
  if (o.out) c.output_dir = *o.out;
  if (o.scorer)
    c.scorer = pick<ScorerKind>(*o.scorer, {{ScorerKind::lexical, "lexical"}, {ScorerKind::endpoint, "endpoint"}},
                                "--scorer");
  if (o.scorer_address) c.scorer_address = *o.scorer_address;
  if (o.predictor)
    c.predictor = pick<PredictorKind>(*o.predictor,
                                      {{PredictorKind::oracle, "oracle"},
                                       {PredictorKind::heuristic, "heuristic"},
                                       {PredictorKind::endpoint, "endpoint"}},
                                      "--predictor");
  if (o.predictor_address) c.predictor_address = *o.predictor_address;
  if (o.rules) c.heuristic_rules_path = *o.rules;
  if (o.predictor_schema)
    c.predictor_schema = pick<SchemaView>(*o.predictor_schema,
                                          {{SchemaView::refined, "refined"}, {SchemaView::full, "full"}},
                                          "--predictor-schema");
  if (o.generator)
    c.generator = pick<GeneratorKind>(*o.generator,
                                      {{GeneratorKind::gold_echo, "gold_echo"},
                                       {GeneratorKind::replay, "replay"},
                                       {GeneratorKind::endpoint, "endpoint"}},
                                      "--generator");
  if (o.generator_address) c.generator_address = *o.generator_address;
  if (o.replay) c.replay_path = *o.replay;
  if (o.k_tables) c.k_tables = *o.k_tables;
  if (o.k_cols) c.k_cols = *o.k_cols;
  if (o.layout) {
    auto layout = parse_prompt_layout(*o.layout);
    if (!layout) throw ValidationError("--layout: unknown value '" + *o.layout + "'");
    c.layout = *layout;
  }
  if (o.etype) {
    auto etype = parse_eval_type(*o.etype);
    if (!etype) throw ValidationError("--etype: unknown value '" + *o.etype + "'");
    c.etype = *etype;
  }
  if (o.concurrency) c.concurrency = *o.concurrency;
  if (o.timeout_ms) c.endpoint_timeout = std::chrono::milliseconds(*o.timeout_ms);
  if (o.attempts) c.endpoint_attempts = *o.attempts;
  if (o.query_timeout_ms) c.query_timeout = std::chrono::milliseconds(*o.query_timeout_ms);
  if (o.include_fk) c.include_fk = true;
  if (o.placeholder) c.placeholder_on_failure = true;
  if (o.respect_distinct) c.respect_distinct = true;
}

void print_distribution(const hpsql::HardnessDistribution& d) {
  for (auto level : hpsql::kHardnessLevels)
    std::printf("%-8s %6zu %7.2f%%\n", std::string(hpsql::to_string(level)).c_str(),
                d.counts[static_cast<std::size_t>(level)], d.percent(level));
  std::printf("total    %6zu\n", d.total);
}

int finish(const hpsql::StageSummary& summary) {
  std::cout << summary.report.to_table();
  if (summary.partial()) {
    std::cerr << "hpsql: " << summary.generation_failures << " generation(s) failed; placeholders were scored\n";
    return kPartial;
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hardness-prompted text-to-SQL pipeline and evaluation toolkit"};
  app.require_subcommand(1);
  std::string config_path;
  Overrides overrides;
  app.add_option("-c,--config", config_path, "pipeline config (JSON)");
  add_overrides(app, overrides);

  auto* ingest = app.add_subcommand("ingest", "validate the dataset and write examples.jsonl");
  auto* label = app.add_subcommand("label", "label gold SQL hardness and print the distribution");
  auto* refine = app.add_subcommand("refine", "rank schema items and write refined.jsonl");
  auto* compose = app.add_subcommand("compose", "predict hardness and write prompts.jsonl");
  auto* generate = app.add_subcommand("generate", "produce predictions.jsonl from prompts");
  auto* evaluate = app.add_subcommand("evaluate", "score predictions (EM/EX) and write the report");
  std::optional<std::string> predictions;
  evaluate->add_option("--predictions", predictions, "prediction file to score instead of predictions.jsonl");
  auto* ablate = app.add_subcommand("ablate", "predictor accuracy with refined vs full schema input");
  auto* report = app.add_subcommand("report", "re-render the report from outcomes.jsonl");
  auto* run = app.add_subcommand("run", "ingest, label, refine, compose, generate, evaluate");
  auto* show = app.add_subcommand("config", "print the effective config and its fingerprint");
  for (auto* sub : {ingest, label, refine, compose, generate, evaluate, ablate, report, run, show})
    sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kValidation;
  }

  try {
    hpsql::PipelineConfig config = config_path.empty() ? hpsql::PipelineConfig{} : hpsql::PipelineConfig::load(config_path);
    apply(overrides, config);
    if (show->parsed()) {
      std::cout << config.to_json().dump(2) << "\nfingerprint " << config.fingerprint() << "\n";
      return kOk;
    }
    hpsql::Pipeline pipeline(config, &std::cerr);
    if (ingest->parsed()) {
      std::printf("%zu examples\n", pipeline.ingest());
    } else if (label->parsed()) {
      if (overrides.dataset) pipeline.ingest();
      print_distribution(pipeline.label());
    } else if (refine->parsed()) {
      pipeline.refine();
    } else if (compose->parsed()) {
      pipeline.compose();
    } else if (generate->parsed()) {
      auto failures = pipeline.generate();
      if (failures) {
        std::cerr << "hpsql: " << failures << " generation(s) failed; placeholders written\n";
        return kPartial;
      }
    } else if (evaluate->parsed()) {
      return finish(pipeline.evaluate(predictions));
    } else if (ablate->parsed()) {
      std::cout << pipeline.ablate().to_table();
    } else if (report->parsed()) {
      return finish(pipeline.report());
    } else if (run->parsed()) {
      return finish(pipeline.run());
    }
    return kOk;
  } catch (const hpsql::StageError& e) {
    std::cerr << "hpsql: " << e.what() << "\n";
    return e.infrastructure() ? kInfrastructure : kValidation;
  } catch (const hpsql::InfrastructureError& e) {
    std::cerr << "hpsql: " << e.what() << "\n";
    return kInfrastructure;
  } catch (const hpsql::Error& e) {
    std::cerr << "hpsql: " << e.what() << "\n";
    return kValidation;
  }
}
