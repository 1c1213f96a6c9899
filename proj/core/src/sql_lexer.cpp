#include "hpsql/sql_lexer.h"

#include <cctype>

#include "hpsql/error.h"
#include "hpsql/schema.h"

namespace hpsql::sql {

namespace {

bool ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '$' ||
         static_cast<unsigned char>(c) >= 0x80;
}

}  // namespace

std::vector<Token> tokenize(std::string_view text) {
  std::vector<Token> out;
  std::size_t i = 0;
  const std::size_t n = text.size();
  auto push = [&](TokenKind kind, std::string value, std::size_t begin) {
    out.push_back(Token{kind, std::move(value), std::string(text.substr(begin, i - begin)), begin});
  };

  while (i < n) {
    const char c = text[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    const std::size_t begin = i;
    if (c == '\'' || c == '"') {
      ++i;
      while (true) {
        if (i >= n) throw UnsupportedSyntax(std::string(text.substr(begin, 16)), begin, "unterminated string literal");
        if (text[i] == c) {
          if (i + 1 < n && text[i + 1] == c) {
            i += 2;
            continue;
          }
          ++i;
          break;
        }
        ++i;
      }
      push(TokenKind::string, std::string(text.substr(begin, i - begin)), begin);
      continue;
    }
    if (c == '`' || c == '[') {
      const char close = c == '`' ? '`' : ']';
      ++i;
      while (i < n && text[i] != close) ++i;
      if (i >= n) throw UnsupportedSyntax(std::string(1, c), begin, "unterminated quoted identifier");
      std::string name(text.substr(begin + 1, i - begin - 1));
      ++i;
      push(TokenKind::quoted_identifier, to_lower(name), begin);
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) ||
        (c == '.' && i + 1 < n && std::isdigit(static_cast<unsigned char>(text[i + 1])))) {
      while (i < n && std::isdigit(static_cast<unsigned char>(text[i]))) ++i;
      if (i < n && text[i] == '.' && i + 1 < n && std::isdigit(static_cast<unsigned char>(text[i + 1]))) {
        ++i;
        while (i < n && std::isdigit(static_cast<unsigned char>(text[i]))) ++i;
      } else if (i < n && text[i] == '.' && !(i + 1 < n && ident_char(text[i + 1]))) {
        ++i;  // "5." is a number
      }
      if (i < n && (text[i] == 'e' || text[i] == 'E')) {
        std::size_t j = i + 1;
        if (j < n && (text[j] == '+' || text[j] == '-')) ++j;
        if (j < n && std::isdigit(static_cast<unsigned char>(text[j]))) {
          i = j;
          while (i < n && std::isdigit(static_cast<unsigned char>(text[i]))) ++i;
        }
      }
      // Identifiers such as 18_49_rating_share start with digits.
      if (i < n && ident_char(text[i]) && text[begin] != '.') {
        while (i < n && ident_char(text[i])) ++i;
        push(TokenKind::identifier, to_lower(text.substr(begin, i - begin)), begin);
      } else {
        push(TokenKind::number, std::string(text.substr(begin, i - begin)), begin);
      }
      continue;
    }
    if (ident_char(c)) {
      while (i < n && ident_char(text[i])) ++i;
      push(TokenKind::identifier, to_lower(text.substr(begin, i - begin)), begin);
      continue;
    }
    auto two = text.substr(i, 2);
    if (two == "<=" || two == ">=" || two == "!=" || two == "<>" || two == "==") {
      i += 2;
      std::string op(two);
      if (op == "<>") op = "!=";
      if (op == "==") op = "=";
      push(TokenKind::symbol, op, begin);
      continue;
    }
    static constexpr std::string_view singles = "=<>+-*/(),.;%";
    if (singles.find(c) != std::string_view::npos) {
      ++i;
      push(TokenKind::symbol, std::string(1, c), begin);
      continue;
    }
    throw UnsupportedSyntax(std::string(1, c), begin, "unexpected character");
  }
  out.push_back(Token{TokenKind::end, "", "", n});
  return out;
}

bool has_top_level_order_by(std::string_view sql_text) {
  std::vector<Token> tokens;
  try {
    tokens = tokenize(sql_text);
  } catch (const Error&) {
    return false;
  }
  int depth = 0;
  for (std::size_t i = 0; i + 1 < tokens.size(); ++i) {
    const auto& tok = tokens[i];
    if (tok.kind == TokenKind::symbol && tok.text == "(") ++depth;
    if (tok.kind == TokenKind::symbol && tok.text == ")") --depth;
    if (depth == 0 && tok.kind == TokenKind::identifier && tok.text == "order" &&
        tokens[i + 1].kind == TokenKind::identifier && tokens[i + 1].text == "by")
      return true;
  }
  return false;
}

}  // namespace hpsql::sql
