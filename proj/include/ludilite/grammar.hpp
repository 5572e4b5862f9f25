#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "ludilite/lexer.hpp"

namespace ludilite {

// Grammar file format (UTF-8, line oriented):
//
//   # comment
//   game   := "(" "game" STRING players ")"
//   owner  := "Each" | "Shared"
//           | "Other"                 # a line starting with '|' continues
//
// Nonterminals are bare names, optionally written <name>. Terminals are
// double-quoted literals or the token classes STRING and INT. The first
// production's left-hand side is the start symbol.

namespace detail {
class GrammarBuilder;
}

class GrammarError : public std::runtime_error {
 public:
  enum class Kind { kSyntax, kUndefinedNonterminal, kEmptyGrammar, kInvalidTerminal, kUnproductive };

  GrammarError(Kind kind, std::size_t line, std::size_t column, const std::string& message);

  Kind kind() const { return kind_; }
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  Kind kind_;
  std::size_t line_;
  std::size_t column_;
};

struct Symbol {
  enum class Kind : std::uint8_t { kNonterminal, kLiteral, kStringClass, kIntClass };
  Kind kind;
  std::uint32_t id = 0;  // nonterminal or literal index; unused for classes

  bool terminal() const { return kind != Kind::kNonterminal; }
  friend bool operator==(const Symbol&, const Symbol&) = default;
};

struct Production {
  std::uint32_t lhs;
  std::vector<Symbol> rhs;
};

class Grammar {
 public:
  const std::string& start_symbol() const { return nonterminals_[start_]; }
  std::uint32_t start_id() const { return start_; }

  const std::vector<Production>& productions() const { return productions_; }
  const std::vector<std::uint32_t>& productions_for(std::uint32_t nonterminal) const {
    return by_lhs_[nonterminal];
  }

  std::size_t nonterminal_count() const { return nonterminals_.size(); }
  const std::string& nonterminal_name(std::uint32_t id) const { return nonterminals_[id]; }
  const std::string& literal(std::uint32_t id) const { return literals_[id]; }
  const std::vector<std::string>& literals() const { return literals_; }

  bool matches(const Symbol& terminal, const Token& token) const;
  std::string describe(const Symbol& symbol) const;

 private:
  friend class detail::GrammarBuilder;

  std::vector<std::string> nonterminals_;
  std::vector<std::string> literals_;
  std::vector<Production> productions_;
  std::vector<std::vector<std::uint32_t>> by_lhs_;
  std::uint32_t start_ = 0;
};

Grammar load_grammar(std::string_view source);
Grammar load_grammar_file(const std::string& path);

// Grammar text of the LudiLite subset shipped with the library.
std::string_view default_grammar_source();
const Grammar& default_grammar();

struct FailurePoint {
  std::string token;
  std::size_t offset = 0;
};

struct ValidPrefixResult {
  std::size_t consumed_chars = 0;
  std::size_t total_chars = 0;
  bool accepted = false;
  std::optional<FailurePoint> failure;
};

// Longest viable prefix of `input`, measured in characters. Scanning stops at
// the first token the Earley chart cannot advance over; the part of that
// token sharing a prefix with some expected terminal is still credited.
ValidPrefixResult recognize(const Grammar& grammar, std::string_view input);

// consumed / total, or 0 for empty input.
double grammar_reward(const Grammar& grammar, std::string_view candidate);

}  // namespace ludilite
