#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace ludilite {

enum class TokenKind {
  kOpenParen,
  kCloseParen,
  kOpenBrace,
  kCloseBrace,
  kString,  // "..." with the quotes included in `text`
  kInteger, // optionally signed run of digits
  kWord,    // bare identifier or keyword
};

const char* to_string(TokenKind kind);

struct Token {
  TokenKind kind;
  std::string text;
  std::size_t offset = 0;  // first character in the source

  std::size_t end() const { return offset + text.size(); }
  // Contents of a quoted string without the surrounding quotes.
  std::string_view unquoted() const;
};

struct LexError {
  std::size_t offset = 0;
  std::string message;
};

// Lexing never throws: tokens up to the first malformed lexeme are kept and
// the failure is reported alongside them.
struct LexResult {
  std::vector<Token> tokens;
  std::optional<LexError> error;

  bool ok() const { return !error.has_value(); }
};

LexResult lex(std::string_view text);

class LexException : public std::runtime_error {
 public:
  explicit LexException(LexError error);
  const LexError& error() const { return error_; }

 private:
  LexError error_;
};

// Strict form: throws LexException on an unterminated string.
std::vector<Token> tokenize(std::string_view text);

bool is_integer_lexeme(std::string_view word);

}  // namespace ludilite
