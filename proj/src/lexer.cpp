#include "ludilite/lexer.hpp"

#include <cctype>

namespace ludilite {

namespace {

bool is_space(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }

bool is_delimiter(char c) {
  return is_space(c) || c == '(' || c == ')' || c == '{' || c == '}' || c == '"';
}

}  // namespace

const char* to_string(TokenKind kind) {
  switch (kind) {
    case TokenKind::kOpenParen: return "(";
    case TokenKind::kCloseParen: return ")";
    case TokenKind::kOpenBrace: return "{";
    case TokenKind::kCloseBrace: return "}";
    case TokenKind::kString: return "string";
    case TokenKind::kInteger: return "integer";
    case TokenKind::kWord: return "word";
  }
  return "?";
}

std::string_view Token::unquoted() const {
  std::string_view view = text;
  if (kind == TokenKind::kString && view.size() >= 2) {
    return view.substr(1, view.size() - 2);
  }
  return view;
}

bool is_integer_lexeme(std::string_view word) {
  std::size_t i = 0;
  if (!word.empty() && (word[0] == '+' || word[0] == '-')) i = 1;
  if (i == word.size()) return false;
  for (; i < word.size(); ++i) {
    if (!std::isdigit(static_cast<unsigned char>(word[i]))) return false;
  }
  return true;
}

LexResult lex(std::string_view text) {
  LexResult result;
  std::size_t pos = 0;
  while (pos < text.size()) {
    const char c = text[pos];
    if (is_space(c)) {
      ++pos;
      continue;
    }
    switch (c) {
      case '(':
        result.tokens.push_back({TokenKind::kOpenParen, "(", pos++});
        continue;
      case ')':
        result.tokens.push_back({TokenKind::kCloseParen, ")", pos++});
        continue;
      case '{':
        result.tokens.push_back({TokenKind::kOpenBrace, "{", pos++});
        continue;
      case '}':
        result.tokens.push_back({TokenKind::kCloseBrace, "}", pos++});
        continue;
      default:
        break;
    }
    if (c == '"') {
      const std::size_t close = text.find('"', pos + 1);
      if (close == std::string_view::npos) {
        result.error = LexError{pos, "unterminated quoted string"};
        return result;
      }
      result.tokens.push_back(
          {TokenKind::kString, std::string(text.substr(pos, close - pos + 1)), pos});
      pos = close + 1;
      continue;
    }
    std::size_t end = pos;
    while (end < text.size() && !is_delimiter(text[end])) ++end;
    std::string word(text.substr(pos, end - pos));
    const TokenKind kind = is_integer_lexeme(word) ? TokenKind::kInteger : TokenKind::kWord;
    result.tokens.push_back({kind, std::move(word), pos});
    pos = end;
  }
  return result;
}

LexException::LexException(LexError error)
    : std::runtime_error("lex error at offset " + std::to_string(error.offset) + ": " +
                         error.message),
      error_(std::move(error)) {}

std::vector<Token> tokenize(std::string_view text) {
  LexResult result = lex(text);
  if (result.error) throw LexException(*result.error);
  return std::move(result.tokens);
}

}  // namespace ludilite
