#include "hpsql/pipeline.h"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <memory>
#include <ostream>

#include "hpsql/error.h"
#include "hpsql/jsonl.h"
#include "parallel.h"

namespace hpsql {

using nlohmann::json;

namespace {

template <typename Enum, std::size_t N>
std::string enum_name(Enum value, const std::array<std::pair<Enum, const char*>, N>& names) {
  for (const auto& [e, name] : names)
    if (e == value) return name;
  return names.front().second;
}

template <typename Enum, std::size_t N>
Enum enum_value(const std::string& text, const std::array<std::pair<Enum, const char*>, N>& names,
                const char* field) {
  for (const auto& [e, name] : names)
    if (text == name) return e;
  std::string allowed;
  for (const auto& entry : names) allowed += (allowed.empty() ? "" : ", ") + std::string(entry.second);
  throw ValidationError(std::string("config: ") + field + " must be one of " + allowed + ", got '" + text + "'");
}

constexpr std::array<std::pair<ScorerKind, const char*>, 2> kScorers{
    {{ScorerKind::lexical, "lexical"}, {ScorerKind::endpoint, "endpoint"}}};
constexpr std::array<std::pair<PredictorKind, const char*>, 3> kPredictors{
    {{PredictorKind::oracle, "oracle"}, {PredictorKind::heuristic, "heuristic"}, {PredictorKind::endpoint, "endpoint"}}};
constexpr std::array<std::pair<GeneratorKind, const char*>, 3> kGenerators{
    {{GeneratorKind::gold_echo, "gold_echo"}, {GeneratorKind::replay, "replay"}, {GeneratorKind::endpoint, "endpoint"}}};
constexpr std::array<std::pair<SchemaView, const char*>, 2> kViews{
    {{SchemaView::refined, "refined"}, {SchemaView::full, "full"}}};

std::string fnv1a64(const std::string& text) {
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    hash ^= c;
    hash *= 0x100000001b3ULL;
  }
  char buf[32];
  std::snprintf(buf, sizeof buf, "fnv1a64:%016llx", static_cast<unsigned long long>(hash));
  return buf;
}

}  // namespace

PipelineConfig PipelineConfig::from_json(const json& doc) {
  if (!doc.is_object()) throw ValidationError("config: top level must be an object");
  PipelineConfig c;
  try {
    auto section = [&](const char* name) { return doc.contains(name) ? doc.at(name) : json::object(); };
    auto dataset = section("dataset");
    c.tables_path = dataset.value("tables", c.tables_path);
    c.examples_path = dataset.value("examples", c.examples_path);
    c.db_root = dataset.value("db_root", c.db_root);
    c.output_dir = doc.value("output_dir", c.output_dir);

    auto scorer = section("scorer");
    c.scorer = enum_value(scorer.value("kind", std::string("lexical")), kScorers, "scorer.kind");
    c.scorer_address = scorer.value("address", std::string());
    auto predictor = section("predictor");
    c.predictor = enum_value(predictor.value("kind", std::string("oracle")), kPredictors, "predictor.kind");
    c.predictor_address = predictor.value("address", std::string());
    c.heuristic_rules_path = predictor.value("rules", std::string());
    c.predictor_schema = enum_value(predictor.value("schema", std::string("refined")), kViews, "predictor.schema");
    auto generator = section("generator");
    c.generator = enum_value(generator.value("kind", std::string("gold_echo")), kGenerators, "generator.kind");
    c.generator_address = generator.value("address", std::string());
    c.replay_path = generator.value("path", std::string());
    c.placeholder_on_failure = generator.value("placeholder_on_failure", false);

    auto refine = section("refine");
    c.k_tables = refine.value("k_tables", c.k_tables);
    c.k_cols = refine.value("k_cols", c.k_cols);
    c.include_fk = refine.value("include_fk", c.include_fk);
    auto prompt = section("prompt");
    auto layout = parse_prompt_layout(prompt.value("layout", std::string(to_string(c.layout))));
    if (!layout) throw ValidationError("config: prompt.layout is unknown");
    c.layout = *layout;

    auto endpoint = section("endpoint");
    c.endpoint_timeout = std::chrono::milliseconds(endpoint.value("timeout_ms", c.endpoint_timeout.count()));
    c.endpoint_attempts = endpoint.value("attempts", c.endpoint_attempts);
    c.endpoint_backoff = std::chrono::milliseconds(endpoint.value("backoff_ms", c.endpoint_backoff.count()));

    auto evaluation = section("evaluation");
    auto etype = parse_eval_type(evaluation.value("etype", std::string(to_string(c.etype))));
    if (!etype) throw ValidationError("config: evaluation.etype must be match, exec or all");
    c.etype = *etype;
    c.query_timeout = std::chrono::milliseconds(evaluation.value("query_timeout_ms", c.query_timeout.count()));
    c.respect_distinct = evaluation.value("respect_distinct", c.respect_distinct);

    c.concurrency = doc.value("concurrency", c.concurrency);
  } catch (const json::exception& e) {
    throw ValidationError(std::string("config: ") + e.what());
  }
  return c;
}

PipelineConfig PipelineConfig::load(const std::string& path) {
  std::string text = read_file(path);
  try {
    return from_json(json::parse(text));
  } catch (const json::parse_error& e) {
    throw DocumentParseError(path, e.byte, e.what());
  }
}

json PipelineConfig::to_json() const {
  return {
      {"dataset", {{"tables", tables_path}, {"examples", examples_path}, {"db_root", db_root}}},
      {"output_dir", output_dir},
      {"scorer", {{"kind", enum_name(scorer, kScorers)}, {"address", scorer_address}}},
      {"predictor",
       {{"kind", enum_name(predictor, kPredictors)},
        {"address", predictor_address},
        {"rules", heuristic_rules_path},
        {"schema", enum_name(predictor_schema, kViews)}}},
      {"generator",
       {{"kind", enum_name(generator, kGenerators)},
        {"address", generator_address},
        {"path", replay_path},
        {"placeholder_on_failure", placeholder_on_failure}}},
      {"refine", {{"k_tables", k_tables}, {"k_cols", k_cols}, {"include_fk", include_fk}}},
      {"prompt", {{"layout", to_string(layout)}}},
      {"endpoint",
       {{"timeout_ms", endpoint_timeout.count()},
        {"attempts", endpoint_attempts},
        {"backoff_ms", endpoint_backoff.count()}}},
      {"evaluation",
       {{"etype", to_string(etype)}, {"query_timeout_ms", query_timeout.count()}, {"respect_distinct", respect_distinct}}},
      {"concurrency", concurrency},
  };
}

void PipelineConfig::validate() const {
  if (k_tables < 1 || k_cols < 1) throw ValidationError("config: k_tables and k_cols must be >= 1");
  if (concurrency < 1) throw ValidationError("config: concurrency must be >= 1");
  if (endpoint_attempts < 1) throw ValidationError("config: endpoint.attempts must be >= 1");
  if (tables_path.empty()) throw ValidationError("config: dataset.tables is required");
  if (scorer == ScorerKind::endpoint && scorer_address.empty())
    throw ValidationError("config: scorer.address is required for the endpoint scorer");
  if (predictor == PredictorKind::endpoint && predictor_address.empty())
    throw ValidationError("config: predictor.address is required for the endpoint predictor");
  if (generator == GeneratorKind::endpoint && generator_address.empty())
    throw ValidationError("config: generator.address is required for the endpoint generator");
  if (generator == GeneratorKind::replay && replay_path.empty())
    throw ValidationError("config: generator.path is required for the replay generator");
}

std::string PipelineConfig::fingerprint() const {
  json canonical = to_json();
  canonical.erase("output_dir");
  canonical.erase("concurrency");
  return fnv1a64(canonical.dump());
}

EndpointConfig PipelineConfig::endpoint(const std::string& address) const {
  EndpointConfig e;
  e.address = address;
  e.timeout = endpoint_timeout;
  e.attempts = endpoint_attempts;
  e.backoff = endpoint_backoff;
  e.max_in_flight = concurrency;
  e.auth_token = endpoint_token_from_env();
  return e;
}

double AccuracyRow::percent(std::optional<HardnessLevel> level) const {
  std::size_t hits = 0, total = 0;
  for (auto l : kHardnessLevels) {
    if (level && *level != l) continue;
    hits += correct[static_cast<std::size_t>(l)];
    total += count[static_cast<std::size_t>(l)];
  }
  if (total == 0) return 0.0;
  return std::round(10000.0 * static_cast<double>(hits) / static_cast<double>(total)) / 100.0;
}

json AblationReport::to_json() const {
  auto row = [](const AccuracyRow& r) {
    json j;
    for (auto l : kHardnessLevels)
      j[std::string(to_string(l))] = {{"count", r.count[static_cast<std::size_t>(l)]},
                                      {"correct", r.correct[static_cast<std::size_t>(l)]},
                                      {"accuracy", r.percent(l)}};
    j["all"] = {{"accuracy", r.percent(std::nullopt)}};
    return j;
  };
  return {{"refined_schema", row(refined)}, {"full_schema", row(full)}, {"fingerprint", fingerprint}};
}

std::string AblationReport::to_table() const {
  char line[160];
  std::string out;
  std::snprintf(line, sizeof line, "%-16s %8s %8s %8s %8s %8s\n", "schema input", "easy", "medium", "hard", "extra",
                "all");
  out += line;
  for (const auto& [name, row] : {std::pair<const char*, const AccuracyRow*>{"refined", &refined}, {"full", &full}}) {
    std::snprintf(line, sizeof line, "%-16s %8.2f %8.2f %8.2f %8.2f %8.2f\n", name, row->percent(HardnessLevel::easy),
                  row->percent(HardnessLevel::medium), row->percent(HardnessLevel::hard),
                  row->percent(HardnessLevel::extra_hard), row->percent(std::nullopt));
    out += line;
  }
  if (!fingerprint.empty()) out += "config " + fingerprint + "\n";
  return out;
}

CatalogSet load_catalogs(const std::string& tables_path, Warnings* warnings) {
  return CatalogSet(parse_schema_catalogs(read_file(tables_path), warnings));
}

Pipeline::Pipeline(PipelineConfig config, std::ostream* log) : config_(std::move(config)), log_(log) {
  config_.validate();
}

std::string Pipeline::path_of(const char* name) const {
  return (std::filesystem::path(config_.output_dir) / name).string();
}

const CatalogSet& Pipeline::catalogs() {
  if (!catalogs_) {
    Warnings warnings;
    catalogs_ = load_catalogs(config_.tables_path, &warnings);
    if (log_)
      for (const auto& w : warnings) *log_ << "warning: " << w << "\n";
  }
  return *catalogs_;
}

std::vector<json> Pipeline::require(const char* name, const char* producer) const {
  auto path = path_of(name);
  std::error_code ec;
  if (!std::filesystem::is_regular_file(path, ec)) throw MissingArtifact(path, producer);
  return read_jsonl(path);
}

std::vector<Example> Pipeline::load_examples() const {
  std::vector<Example> out;
  for (const auto& j : require(artifact::examples, "ingest")) {
    try {
      if (j.at("index").get<std::size_t>() != out.size())
        throw ValidationError(path_of(artifact::examples) + ": indices are not contiguous");
      out.push_back({j.at("db_id").get<std::string>(), j.at("question").get<std::string>(),
                     j.at("gold_sql").get<std::string>()});
    } catch (const json::exception& e) {
      throw DocumentParseError(path_of(artifact::examples), out.size(), e.what());
    }
  }
  return out;
}

template <typename Fn>
auto Pipeline::stage(const char* name, Fn&& fn) {
  auto start = std::chrono::steady_clock::now();
  auto finish = [&] {
    if (log_) {
      auto ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
      char buf[96];
      std::snprintf(buf, sizeof buf, "[%s] %.1f ms\n", name, ms);
      *log_ << buf << std::flush;
    }
  };
  try {
    if constexpr (std::is_void_v<decltype(fn())>) {
      fn();
      finish();
    } else {
      auto result = fn();
      finish();
      return result;
    }
  } catch (const StageError&) {
    throw;
  } catch (const InfrastructureError& e) {
    throw StageError(name, -1, e, true);
  } catch (const Error& e) {
    throw StageError(name, -1, e, false);
  } catch (const std::filesystem::filesystem_error& e) {
    throw StageError(name, -1, InfrastructureError(e.what()), true);
  }
}

std::size_t Pipeline::ingest() {
  return stage("ingest", [&] {
    if (config_.examples_path.empty()) throw ValidationError("config: dataset.examples is required for ingest");
    auto examples = parse_examples(read_file(config_.examples_path), catalogs());
    std::vector<json> records;
    for (std::size_t i = 0; i < examples.size(); ++i)
      records.push_back({{"index", i},
                         {"db_id", examples[i].db_id},
                         {"question", examples[i].question},
                         {"gold_sql", examples[i].gold_sql}});
    write_jsonl(path_of(artifact::examples), records);
    return examples.size();
  });
}

HardnessDistribution Pipeline::label() {
  return stage("label", [&] {
    auto examples = load_examples();
    auto corpus = label_corpus(examples, catalogs(), config_.concurrency);
    std::vector<json> records;
    for (const auto& l : corpus.labels)
      records.push_back({{"index", l.index},
                         {"db_id", examples[l.index].db_id},
                         {"level", to_string(l.level)},
                         {"c1", l.counts.c1},
                         {"c2", l.counts.c2},
                         {"others", l.counts.others}});
    write_jsonl(path_of(artifact::labels), records);
    return corpus.distribution;
  });
}

void Pipeline::refine() {
  stage("refine", [&] {
    auto examples = load_examples();
    const auto& cats = catalogs();
    std::unique_ptr<RelevanceScorer> scorer;
    if (config_.scorer == ScorerKind::endpoint) {
      scorer = std::make_unique<EndpointScorer>(config_.endpoint(config_.scorer_address));
    } else {
      scorer = std::make_unique<LexicalScorer>();
    }
    RefineOptions options{config_.k_tables, config_.k_cols};
    std::vector<json> records(examples.size());
    detail::parallel_for(examples.size(), config_.concurrency, [&](std::size_t i) {
      try {
        auto refined = hpsql::refine(examples[i].question, cats.at(examples[i].db_id), *scorer, options);
        json tables = json::array();
        for (const auto& t : refined.tables) {
          json columns = json::array();
          for (const auto& c : t.columns) columns.push_back({{"name", c.column.name}, {"score", c.score}});
          tables.push_back({{"name", t.name}, {"score", t.score}, {"columns", std::move(columns)}});
        }
        json keys = json::array();
        for (const auto& fk : refined.foreign_keys) keys.push_back({fk.from, fk.to});
        records[i] = {{"index", i},
                      {"db_id", refined.db_id},
                      {"tables", std::move(tables)},
                      {"foreign_keys", std::move(keys)},
                      {"schema_text", serialize_schema(refined, config_.include_fk)}};
      } catch (const InfrastructureError& e) {
        throw StageError("refine", static_cast<std::ptrdiff_t>(i), e, true);
      } catch (const Error& e) {
        throw StageError("refine", static_cast<std::ptrdiff_t>(i), e, false);
      }
    });
    write_jsonl(path_of(artifact::refined), records);
  });
}

namespace {

std::vector<std::string> schema_texts(const std::vector<json>& refined, std::size_t expected, const std::string& path) {
  if (refined.size() != expected)
    throw ValidationError(path + " holds " + std::to_string(refined.size()) + " records for " +
                          std::to_string(expected) + " examples");
  std::vector<std::string> out;
  for (std::size_t i = 0; i < refined.size(); ++i) {
    if (refined[i].value("index", expected) != i) throw DocumentParseError(path, i, "index out of order");
    out.push_back(refined[i].value("schema_text", std::string()));
  }
  return out;
}

std::vector<std::string> full_texts(const std::vector<Example>& examples, const CatalogSet& catalogs,
                                    bool include_fk) {
  std::vector<std::string> out;
  for (const auto& ex : examples) out.push_back(serialize_schema(full_schema(catalogs.at(ex.db_id)), include_fk));
  return out;
}

std::unique_ptr<HardnessPredictor> make_predictor(const PipelineConfig& config, const std::vector<Example>& examples,
                                                  const CatalogSet& catalogs) {
  switch (config.predictor) {
    case PredictorKind::oracle: return std::make_unique<OraclePredictor>(examples, catalogs);
    case PredictorKind::heuristic: {
      if (config.heuristic_rules_path.empty()) return std::make_unique<HeuristicPredictor>();
      json doc;
      try {
        doc = json::parse(read_file(config.heuristic_rules_path));
      } catch (const json::parse_error& e) {
        throw DocumentParseError(config.heuristic_rules_path, e.byte, e.what());
      }
      return std::make_unique<HeuristicPredictor>(HeuristicRules::from_json(doc));
    }
    case PredictorKind::endpoint:
      return std::make_unique<EndpointPredictor>(config.endpoint(config.predictor_address));
  }
  return nullptr;
}

std::vector<HardnessQuery> queries_for(const std::vector<Example>& examples, const std::vector<std::string>& texts) {
  std::vector<HardnessQuery> out;
  for (std::size_t i = 0; i < examples.size(); ++i) out.push_back({i, examples[i].question, texts[i]});
  return out;
}

}  // namespace

void Pipeline::compose() {
  stage("compose", [&] {
    auto examples = load_examples();
    auto refined = schema_texts(require(artifact::refined, "refine"), examples.size(), path_of(artifact::refined));
    auto predictor = make_predictor(config_, examples, catalogs());
    auto predictor_texts =
        config_.predictor_schema == SchemaView::refined ? refined : full_texts(examples, catalogs(), config_.include_fk);
    auto levels = predict_all(*predictor, queries_for(examples, predictor_texts), config_.concurrency);
    std::vector<json> records;
    for (std::size_t i = 0; i < examples.size(); ++i) {
      auto prompt = compose_input(levels[i], examples[i].question, refined[i], config_.layout);
      records.push_back({{"index", i},
                         {"db_id", examples[i].db_id},
                         {"predicted_level", to_string(levels[i])},
                         {"hardness_token", prompt.hardness_token},
                         {"question", prompt.question},
                         {"schema_text", prompt.schema_text},
                         {"full_text", prompt.full_text}});
    }
    write_jsonl(path_of(artifact::prompts), records);
  });
}

std::size_t Pipeline::generate() {
  return stage("generate", [&] {
    auto examples = load_examples();
    std::vector<GenerationRequest> requests;
    for (const auto& j : require(artifact::prompts, "compose")) {
      try {
        GenerationRequest r;
        r.example_index = j.at("index").get<std::size_t>();
        r.prompt = {j.at("hardness_token").get<std::string>(), j.at("question").get<std::string>(),
                    j.at("schema_text").get<std::string>(), j.at("full_text").get<std::string>()};
        requests.push_back(std::move(r));
      } catch (const json::exception& e) {
        throw DocumentParseError(path_of(artifact::prompts), requests.size(), e.what());
      }
    }
    std::unique_ptr<SqlGenerator> generator;
    switch (config_.generator) {
      case GeneratorKind::gold_echo: generator = std::make_unique<GoldEchoGenerator>(examples); break;
      case GeneratorKind::replay:
        generator = std::make_unique<ReplayGenerator>(ReplayGenerator::from_file(config_.replay_path));
        break;
      case GeneratorKind::endpoint:
        generator = std::make_unique<EndpointGenerator>(config_.endpoint(config_.generator_address));
        break;
    }
    GenerateOptions options{config_.concurrency, config_.placeholder_on_failure};
    auto result = generate_all(*generator, requests, options);
    std::vector<json> records;
    for (const auto& r : result.records) records.push_back(to_json(r));
    write_jsonl(path_of(artifact::predictions), records);
    return result.failures;
  });
}

namespace {

void write_report(const Pipeline& p, const EvalReport& report, std::size_t failures) {
  json j = report.to_json();
  j["generation_failures"] = failures;
  write_text_file(p.path_of(artifact::report_json), j.dump(2) + "\n");
  std::string text = report.to_table();
  if (failures) text += "generation failures " + std::to_string(failures) + " (placeholder SQL)\n";
  write_text_file(p.path_of(artifact::report_text), text);
}

}  // namespace

StageSummary Pipeline::evaluate(const std::optional<std::string>& predictions_path) {
  return stage("evaluation", [&] {
    auto examples = load_examples();
    std::vector<json> lines;
    if (predictions_path) {
      lines = read_jsonl(*predictions_path);
    } else {
      lines = require(artifact::predictions, "generate");
    }
    std::vector<PredictionRecord> records;
    for (const auto& j : lines) records.push_back(prediction_from_json(j));
    ReplayGenerator lookup(records);
    std::vector<std::string> predictions;
    for (std::size_t i = 0; i < examples.size(); ++i) predictions.push_back(lookup.generate({i, {}}));
    StageSummary summary;
    for (const auto& r : records) summary.generation_failures += r.error ? 1 : 0;

    EvalOptions options;
    options.etype = config_.etype;
    options.db_root = config_.db_root;
    options.workers = config_.concurrency;
    options.timeout = config_.query_timeout;
    options.em.respect_distinct = config_.respect_distinct;
    auto result = evaluate_corpus(examples, predictions, catalogs(), options);
    result.report.fingerprint = config_.fingerprint();

    std::vector<json> outcome_lines;
    for (const auto& o : result.outcomes) outcome_lines.push_back(to_json(o));
    write_jsonl(path_of(artifact::outcomes), outcome_lines);
    write_report(*this, result.report, summary.generation_failures);
    summary.report = std::move(result.report);
    return summary;
  });
}

StageSummary Pipeline::report() {
  return stage("report", [&] {
    std::vector<MatchOutcome> outcomes;
    for (const auto& j : require(artifact::outcomes, "evaluate")) outcomes.push_back(outcome_from_json(j));
    StageSummary summary;
    std::error_code ec;
    if (std::filesystem::is_regular_file(path_of(artifact::predictions), ec))
      for (const auto& j : read_jsonl(path_of(artifact::predictions)))
        summary.generation_failures += prediction_from_json(j).error ? 1 : 0;
    summary.report = summarize(outcomes, config_.etype, config_.fingerprint());
    write_report(*this, summary.report, summary.generation_failures);
    return summary;
  });
}

AblationReport Pipeline::ablate() {
  return stage("ablate", [&] {
    auto examples = load_examples();
    auto refined = schema_texts(require(artifact::refined, "refine"), examples.size(), path_of(artifact::refined));
    auto full = full_texts(examples, catalogs(), config_.include_fk);
    auto gold = label_corpus(examples, catalogs(), config_.concurrency);
    auto predictor = make_predictor(config_, examples, catalogs());

    AblationReport report;
    report.fingerprint = config_.fingerprint();
    for (auto [texts, row] : {std::pair{&refined, &report.refined}, std::pair{&full, &report.full}}) {
      auto levels = predict_all(*predictor, queries_for(examples, *texts), config_.concurrency);
      for (std::size_t i = 0; i < examples.size(); ++i) {
        auto slot = static_cast<std::size_t>(gold.labels[i].level);
        ++row->count[slot];
        row->correct[slot] += levels[i] == gold.labels[i].level ? 1 : 0;
      }
    }
    write_text_file(path_of(artifact::ablation_json), report.to_json().dump(2) + "\n");
    write_text_file(path_of(artifact::ablation_text), report.to_table());
    return report;
  });
}

StageSummary Pipeline::run() {
  ingest();
  label();
  refine();
  compose();
  generate();
  return evaluate();
}

}  // namespace hpsql
