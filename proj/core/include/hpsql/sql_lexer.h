#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace hpsql::sql {

enum class TokenKind { identifier, quoted_identifier, number, string, symbol, end };

struct Token {
  TokenKind kind = TokenKind::end;
  std::string text;  // lowercased for identifiers; verbatim for literals and symbols
  std::string raw;   // exact source slice
  std::size_t offset = 0;

  bool is(std::string_view word) const {
    return (kind == TokenKind::identifier || kind == TokenKind::symbol) && text == word;
  }
};

/// Splits SQL text into tokens. Single- and double-quoted spans are string
/// literals (the benchmark writes strings with either quote); backticks and
/// brackets quote identifiers. Always ends with a TokenKind::end token.
std::vector<Token> tokenize(std::string_view sql_text);

/// True when the outermost statement carries an ORDER BY clause (any depth-0
/// occurrence, including on the last arm of a set operation).
bool has_top_level_order_by(std::string_view sql_text);

}  // namespace hpsql::sql
