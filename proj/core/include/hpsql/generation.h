#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "hpsql/http_client.h"
#include "hpsql/prompt.h"
#include "hpsql/schema.h"

namespace hpsql {

struct GenerationRequest {
  std::size_t example_index = 0;
  ComposedPrompt prompt;
};

/// Produces one SQL string per prompt. Implementations are stateless across
/// calls and shareable between threads.
class SqlGenerator {
 public:
  virtual ~SqlGenerator() = default;
  virtual std::string generate(const GenerationRequest& request) const = 0;
};

/// POST /generate {"prompt"} -> {"text"}; reply reduced to its first line, trimmed.
class EndpointGenerator final : public SqlGenerator {
 public:
  explicit EndpointGenerator(EndpointConfig config);
  std::string generate(const GenerationRequest& request) const override;

 private:
  JsonEndpoint endpoint_;
};

struct PredictionRecord {
  std::size_t example_index = 0;
  std::string predicted_sql;
  std::optional<double> latency_ms;
  std::optional<std::string> error;  // set when a placeholder replaced a failed generation

  friend bool operator==(const PredictionRecord&, const PredictionRecord&) = default;
};

nlohmann::json to_json(const PredictionRecord& record);
/// Accepts {"index", "sql"[, "latency_ms", "error"]}.
PredictionRecord prediction_from_json(const nlohmann::json& record);

/// Serves recorded predictions by example index.
class ReplayGenerator final : public SqlGenerator {
 public:
  /// Throws ValidationError on a duplicate index.
  explicit ReplayGenerator(const std::vector<PredictionRecord>& records);
  static ReplayGenerator from_file(const std::string& path);

  std::string generate(const GenerationRequest& request) const override;
  bool has(std::size_t index) const { return by_index_.count(index) != 0; }

 private:
  std::unordered_map<std::size_t, std::string> by_index_;
};

class GoldEchoGenerator final : public SqlGenerator {
 public:
  explicit GoldEchoGenerator(const std::vector<Example>& examples);
  std::string generate(const GenerationRequest& request) const override;

 private:
  const std::vector<Example>& examples_;
};

inline constexpr const char* kPlaceholderSql = "SELECT 1";

struct GenerateOptions {
  unsigned max_in_flight = 4;
  bool placeholder_on_failure = false;  // else the first failure aborts
};

struct GenerationResult {
  std::vector<PredictionRecord> records;  // request order
  std::size_t failures = 0;
};

/// Fans requests out with a bound on concurrency and gathers results in
/// request order. Failures raise StageError("generate", index) unless
/// placeholders are enabled.
GenerationResult generate_all(const SqlGenerator& generator, const std::vector<GenerationRequest>& requests,
                              const GenerateOptions& options = {});

}  // namespace hpsql
