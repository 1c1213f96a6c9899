#include "hpsql/generation.h"

#include <chrono>
#include <mutex>

#include <nlohmann/json.hpp>

#include "hpsql/error.h"
#include "hpsql/jsonl.h"
#include "parallel.h"

namespace hpsql {

namespace {

std::string first_line_trimmed(const std::string& text) {
  auto begin = text.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return {};
  auto end = text.find_first_of("\r\n", begin);
  std::string line = text.substr(begin, end == std::string::npos ? std::string::npos : end - begin);
  line.erase(line.find_last_not_of(" \t") + 1);
  return line;
}

}  // namespace

EndpointGenerator::EndpointGenerator(EndpointConfig config) : endpoint_(std::move(config)) {}

std::string EndpointGenerator::generate(const GenerationRequest& request) const {
  nlohmann::json reply;
  try {
    reply = endpoint_.post("/generate", {{"prompt", request.prompt.full_text}});
  } catch (const ServiceUnavailable& e) {
    throw GeneratorUnavailable(e.what());
  }
  if (!reply.is_object() || !reply.contains("text") || !reply["text"].is_string())
    throw ProtocolError("/generate reply lacks a string \"text\"");
  auto sql = first_line_trimmed(reply["text"].get<std::string>());
  if (sql.empty()) throw EmptyGeneration("empty generation for example " + std::to_string(request.example_index));
  return sql;
}

nlohmann::json to_json(const PredictionRecord& record) {
  nlohmann::json j = {{"index", record.example_index}, {"sql", record.predicted_sql}};
  if (record.latency_ms) j["latency_ms"] = *record.latency_ms;
  if (record.error) j["error"] = *record.error;
  return j;
}

PredictionRecord prediction_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("index") || !j["index"].is_number_unsigned() || !j.contains("sql") ||
      !j["sql"].is_string())
    throw ValidationError("prediction record needs {\"index\": uint, \"sql\": string}: " + j.dump());
  PredictionRecord r{j["index"].get<std::size_t>(), j["sql"].get<std::string>(), std::nullopt, std::nullopt};
  if (j.contains("latency_ms") && j["latency_ms"].is_number()) r.latency_ms = j["latency_ms"].get<double>();
  if (j.contains("error") && j["error"].is_string()) r.error = j["error"].get<std::string>();
  return r;
}

ReplayGenerator::ReplayGenerator(const std::vector<PredictionRecord>& records) {
  for (const auto& r : records)
    if (!by_index_.emplace(r.example_index, r.predicted_sql).second)
      throw ValidationError("duplicate prediction for example " + std::to_string(r.example_index));
}

ReplayGenerator ReplayGenerator::from_file(const std::string& path) {
  std::vector<PredictionRecord> records;
  for (const auto& j : read_jsonl(path)) records.push_back(prediction_from_json(j));
  return ReplayGenerator(records);
}

std::string ReplayGenerator::generate(const GenerationRequest& request) const {
  auto it = by_index_.find(request.example_index);
  if (it == by_index_.end()) throw MissingPrediction(request.example_index);
  return it->second;
}

GoldEchoGenerator::GoldEchoGenerator(const std::vector<Example>& examples) : examples_(examples) {}

std::string GoldEchoGenerator::generate(const GenerationRequest& request) const {
  if (request.example_index >= examples_.size()) throw MissingPrediction(request.example_index);
  return examples_[request.example_index].gold_sql;
}

GenerationResult generate_all(const SqlGenerator& generator, const std::vector<GenerationRequest>& requests,
                              const GenerateOptions& options) {
  GenerationResult result;
  result.records.resize(requests.size());
  const bool timed = dynamic_cast<const EndpointGenerator*>(&generator) != nullptr;
  detail::parallel_for(requests.size(), options.max_in_flight, [&](std::size_t i) {
    const auto& request = requests[i];
    auto& record = result.records[i];
    record.example_index = request.example_index;
    auto start = std::chrono::steady_clock::now();
    try {
      record.predicted_sql = generator.generate(request);
    } catch (const Error& e) {
      bool infrastructure = dynamic_cast<const InfrastructureError*>(&e) != nullptr;
      if (!options.placeholder_on_failure)
        throw StageError("generate", static_cast<std::ptrdiff_t>(request.example_index), e, infrastructure);
      record.predicted_sql = kPlaceholderSql;
      record.error = e.what();
      return;
    }
    if (timed)
      record.latency_ms =
          std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  });
  for (const auto& record : result.records) result.failures += record.error ? 1 : 0;
  return result;
}

}  // namespace hpsql
