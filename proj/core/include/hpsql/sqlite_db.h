#pragma once

#include <chrono>
#include <cstdint>
#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "hpsql/error.h"

struct sqlite3;

namespace hpsql {

/// SQL NULL, INTEGER, REAL, TEXT, BLOB (blob bytes kept as a string).
struct Blob {
  std::string bytes;
  friend bool operator==(const Blob&, const Blob&) = default;
};
using SqlValue = std::variant<std::monostate, std::int64_t, double, std::string, Blob>;
using ResultRow = std::vector<SqlValue>;

struct ResultTable {
  std::vector<ResultRow> rows;
};

/// Statement failed to prepare or run, or exceeded its time budget.
class QueryError : public Error {
 public:
  QueryError(const std::string& message, bool timed_out) : Error(message), timed_out_(timed_out) {}
  bool timed_out() const noexcept { return timed_out_; }

 private:
  bool timed_out_;
};

/// A read-only SQLite connection. Not thread-safe; open one per worker.
class Database {
 public:
  /// Throws InfrastructureError when the file is missing or unreadable.
  explicit Database(const std::string& path);
  ~Database();
  Database(Database&&) noexcept;
  Database& operator=(Database&&) noexcept;

  /// Runs one statement, collecting every row. Throws QueryError.
  ResultTable query(const std::string& sql, std::chrono::milliseconds timeout) const;

  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
  sqlite3* db_ = nullptr;
};

/// `<db_root>/<db_id>/<db_id>.sqlite`.
std::string database_path(const std::string& db_root, const std::string& db_id);

/// Row-multiset (or sequence, when `ordered`) equality; numbers compare with
/// 1e-6 relative tolerance across INTEGER/REAL, NULL equals NULL.
bool results_equal(const ResultTable& a, const ResultTable& b, bool ordered);

}  // namespace hpsql
