#pragma once

#include <string>

#include "hpsql/sql_ast.h"

namespace hpsql::testing {

/// Renders components back to SQL the parser accepts. Masked literals print
/// as 'value'. Aliases are kept; unaliased tables qualify by name.
std::string print_sql(const sql::SqlComponents& q, const SchemaCatalog& catalog);

}  // namespace hpsql::testing
