#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string_view>
#include <vector>

#include "hpsql/schema.h"
#include "hpsql/sql_ast.h"

namespace hpsql {

enum class HardnessLevel { easy, medium, hard, extra_hard };

inline constexpr std::array<HardnessLevel, 4> kHardnessLevels = {
    HardnessLevel::easy, HardnessLevel::medium, HardnessLevel::hard, HardnessLevel::extra_hard};

/// "easy", "medium", "hard", "extra" (the benchmark's bucket names).
std::string_view to_string(HardnessLevel level);
/// Accepts the bucket names above plus "extra-hard"/"extra_hard".
std::optional<HardnessLevel> parse_hardness(std::string_view name);

struct ComponentCounts {
  int c1 = 0;
  int c2 = 0;
  int others = 0;

  friend bool operator==(const ComponentCounts&, const ComponentCounts&) = default;
};

/// Counters of the benchmark's reference evaluator. Only the outer query is
/// inspected; nested queries add to c2 and nothing else.
ComponentCounts count_components(const sql::SqlComponents& q);

HardnessLevel classify_hardness(const ComponentCounts& counts);

struct LabeledExample {
  std::size_t index = 0;
  HardnessLevel level = HardnessLevel::easy;
  ComponentCounts counts;
};

struct HardnessDistribution {
  std::array<std::size_t, 4> counts{};
  std::size_t total = 0;

  /// Percentage of `level`; 0 for an empty corpus.
  double percent(HardnessLevel level) const;
};

struct LabeledCorpus {
  std::vector<LabeledExample> labels;
  HardnessDistribution distribution;
};

/// Parses and labels every example's gold SQL in parallel (`workers` = 0 picks
/// the hardware concurrency); output keeps input order. Parse failures are
/// rethrown as StageError("label", index).
LabeledCorpus label_corpus(const std::vector<Example>& examples, const CatalogSet& catalogs,
                           unsigned workers = 0);

HardnessLevel hardness_of(std::string_view gold_sql, const SchemaCatalog& catalog);

}  // namespace hpsql
