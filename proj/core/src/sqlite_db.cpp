#include "hpsql/sqlite_db.h"

#include <algorithm>
#include <cmath>
#include <filesystem>

#include <sqlite3.h>

namespace hpsql {

Database::Database(const std::string& path) : path_(path) {
  std::error_code ec;
  if (!std::filesystem::is_regular_file(path, ec)) throw InfrastructureError("database file not found: " + path);
  int rc = sqlite3_open_v2(path.c_str(), &db_, SQLITE_OPEN_READONLY | SQLITE_OPEN_NOMUTEX, nullptr);
  if (rc != SQLITE_OK) {
    std::string message = db_ ? sqlite3_errmsg(db_) : sqlite3_errstr(rc);
    sqlite3_close(db_);
    db_ = nullptr;
    throw InfrastructureError("cannot open database " + path + ": " + message);
  }
  // Touch the schema so an unreadable or non-database file fails here.
  char* err = nullptr;
  rc = sqlite3_exec(db_, "SELECT count(*) FROM sqlite_master", nullptr, nullptr, &err);
  if (rc != SQLITE_OK) {
    std::string message = err ? err : sqlite3_errstr(rc);
    sqlite3_free(err);
    sqlite3_close(db_);
    db_ = nullptr;
    throw InfrastructureError("cannot read database " + path + ": " + message);
  }
}

Database::~Database() {
  if (db_) sqlite3_close(db_);
}

Database::Database(Database&& other) noexcept : path_(std::move(other.path_)), db_(other.db_) { other.db_ = nullptr; }

Database& Database::operator=(Database&& other) noexcept {
  if (this != &other) {
    if (db_) sqlite3_close(db_);
    path_ = std::move(other.path_);
    db_ = other.db_;
    other.db_ = nullptr;
  }
  return *this;
}

namespace {

struct Deadline {
  std::chrono::steady_clock::time_point at;
  bool expired = false;
};

int check_deadline(void* arg) {
  auto* deadline = static_cast<Deadline*>(arg);
  if (std::chrono::steady_clock::now() >= deadline->at) {
    deadline->expired = true;
    return 1;
  }
  return 0;
}

SqlValue column_value(sqlite3_stmt* stmt, int i) {
  switch (sqlite3_column_type(stmt, i)) {
    case SQLITE_INTEGER: return static_cast<std::int64_t>(sqlite3_column_int64(stmt, i));
    case SQLITE_FLOAT: return sqlite3_column_double(stmt, i);
    case SQLITE_TEXT: {
      auto* text = reinterpret_cast<const char*>(sqlite3_column_text(stmt, i));
      return std::string(text, static_cast<std::size_t>(sqlite3_column_bytes(stmt, i)));
    }
    case SQLITE_BLOB: {
      auto* data = static_cast<const char*>(sqlite3_column_blob(stmt, i));
      return Blob{std::string(data ? data : "", static_cast<std::size_t>(sqlite3_column_bytes(stmt, i)))};
    }
    default: return std::monostate{};
  }
}

}  // namespace

ResultTable Database::query(const std::string& sql, std::chrono::milliseconds timeout) const {
  Deadline deadline{std::chrono::steady_clock::now() + timeout};
  sqlite3_progress_handler(db_, 1000, check_deadline, &deadline);
  struct Reset {
    sqlite3* db;
    ~Reset() { sqlite3_progress_handler(db, 0, nullptr, nullptr); }
  } reset{db_};

  sqlite3_stmt* stmt = nullptr;
  const char* tail = nullptr;
  int rc = sqlite3_prepare_v2(db_, sql.c_str(), static_cast<int>(sql.size()), &stmt, &tail);
  if (rc != SQLITE_OK || !stmt) {
    std::string message = rc != SQLITE_OK ? sqlite3_errmsg(db_) : "empty statement";
    sqlite3_finalize(stmt);
    throw QueryError(message, deadline.expired);
  }
  if (!sqlite3_stmt_readonly(stmt)) {
    sqlite3_finalize(stmt);
    throw QueryError("statement is not read-only", false);
  }
  ResultTable table;
  const int columns = sqlite3_column_count(stmt);
  while ((rc = sqlite3_step(stmt)) == SQLITE_ROW) {
    ResultRow row;
    row.reserve(static_cast<std::size_t>(columns));
    for (int i = 0; i < columns; ++i) row.push_back(column_value(stmt, i));
    table.rows.push_back(std::move(row));
  }
  if (rc != SQLITE_DONE) {
    std::string message = deadline.expired ? "query timed out" : sqlite3_errmsg(db_);
    sqlite3_finalize(stmt);
    throw QueryError(message, deadline.expired);
  }
  sqlite3_finalize(stmt);
  return table;
}

std::string database_path(const std::string& db_root, const std::string& db_id) {
  return (std::filesystem::path(db_root) / db_id / (db_id + ".sqlite")).string();
}

namespace {

// Rank used for canonical ordering: NULL < numbers < text < blob.
int rank(const SqlValue& v) {
  switch (v.index()) {
    case 0: return 0;
    case 1:
    case 2: return 1;
    case 3: return 2;
    default: return 3;
  }
}

double as_double(const SqlValue& v) {
  return v.index() == 1 ? static_cast<double>(std::get<std::int64_t>(v)) : std::get<double>(v);
}

bool numbers_close(double a, double b) {
  if (a == b) return true;
  if (std::isnan(a) || std::isnan(b)) return std::isnan(a) && std::isnan(b);
  return std::fabs(a - b) <= 1e-6 * std::max(std::fabs(a), std::fabs(b));
}

bool values_equal(const SqlValue& a, const SqlValue& b) {
  if (rank(a) != rank(b)) return false;
  switch (rank(a)) {
    case 0: return true;
    case 1:
      if (a.index() == 1 && b.index() == 1) return std::get<std::int64_t>(a) == std::get<std::int64_t>(b);
      return numbers_close(as_double(a), as_double(b));
    case 2: return std::get<std::string>(a) == std::get<std::string>(b);
    default: return std::get<Blob>(a) == std::get<Blob>(b);
  }
}

bool value_less(const SqlValue& a, const SqlValue& b) {
  if (rank(a) != rank(b)) return rank(a) < rank(b);
  switch (rank(a)) {
    case 0: return false;
    case 1: return as_double(a) < as_double(b);
    case 2: return std::get<std::string>(a) < std::get<std::string>(b);
    default: return std::get<Blob>(a).bytes < std::get<Blob>(b).bytes;
  }
}

bool rows_equal(const ResultRow& a, const ResultRow& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!values_equal(a[i], b[i])) return false;
  return true;
}

bool row_less(const ResultRow& a, const ResultRow& b) {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end(), value_less);
}

}  // namespace

bool results_equal(const ResultTable& a, const ResultTable& b, bool ordered) {
  if (a.rows.size() != b.rows.size()) return false;
  if (ordered) {
    for (std::size_t i = 0; i < a.rows.size(); ++i)
      if (!rows_equal(a.rows[i], b.rows[i])) return false;
    return true;
  }
  auto x = a.rows;
  auto y = b.rows;
  std::sort(x.begin(), x.end(), row_less);
  std::sort(y.begin(), y.end(), row_less);
  for (std::size_t i = 0; i < x.size(); ++i)
    if (!rows_equal(x[i], y[i])) return false;
  return true;
}

}  // namespace hpsql
