#include "ludilite/grammar.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>
#include <unordered_set>

namespace ludilite {

GrammarError::GrammarError(Kind kind, std::size_t line, std::size_t column,
                           const std::string& message)
    : std::runtime_error("grammar:" + std::to_string(line) + ":" + std::to_string(column) +
                         ": " + message),
      kind_(kind),
      line_(line),
      column_(column) {}

bool Grammar::matches(const Symbol& terminal, const Token& token) const {
  switch (terminal.kind) {
    case Symbol::Kind::kLiteral:
      return token.kind != TokenKind::kString && token.kind != TokenKind::kInteger &&
             token.text == literals_[terminal.id];
    case Symbol::Kind::kStringClass:
      return token.kind == TokenKind::kString;
    case Symbol::Kind::kIntClass:
      return token.kind == TokenKind::kInteger;
    case Symbol::Kind::kNonterminal:
      return false;
  }
  return false;
}

std::string Grammar::describe(const Symbol& symbol) const {
  switch (symbol.kind) {
    case Symbol::Kind::kLiteral: return '"' + literals_[symbol.id] + '"';
    case Symbol::Kind::kStringClass: return "STRING";
    case Symbol::Kind::kIntClass: return "INT";
    case Symbol::Kind::kNonterminal: return nonterminals_[symbol.id];
  }
  return "?";
}

namespace {

using Kind = GrammarError::Kind;

struct Reference {
  std::uint32_t nonterminal;
  std::size_t line;
  std::size_t column;
};

bool is_name_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) != 0 || c == '_' || c == '-' || c == '.';
}

std::string_view strip_comment(std::string_view line) {
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    if (line[i] == '"') quoted = !quoted;
    if (line[i] == '#' && !quoted) return line.substr(0, i);
  }
  return line;
}

}  // namespace

namespace detail {

class GrammarBuilder {
 public:
  Grammar build(std::string_view source) {
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= source.size()) {
      std::size_t eol = source.find('\n', pos);
      if (eol == std::string_view::npos) eol = source.size();
      ++line_no;
      parse_line(strip_comment(source.substr(pos, eol - pos)), line_no);
      pos = eol + 1;
    }
    if (grammar_.productions_.empty()) {
      throw GrammarError(Kind::kEmptyGrammar, line_no, 1, "grammar has no productions");
    }
    for (const Reference& ref : references_) {
      if (grammar_.by_lhs_[ref.nonterminal].empty()) {
        throw GrammarError(Kind::kUndefinedNonterminal, ref.line, ref.column,
                           "undefined nonterminal '" +
                               grammar_.nonterminals_[ref.nonterminal] + "'");
      }
    }
    check_productive();
    return std::move(grammar_);
  }

 private:
  void parse_line(std::string_view line, std::size_t line_no) {
    std::size_t col = 0;
    skip_space(line, col);
    if (col == line.size()) return;

    if (line[col] == '|') {
      if (!current_lhs_) {
        throw GrammarError(Kind::kSyntax, line_no, col + 1,
                           "continuation '|' without a preceding production");
      }
      ++col;
      parse_alternatives(line, col, line_no);
      return;
    }

    const std::size_t name_col = col;
    std::string name = read_name(line, col, line_no);
    skip_space(line, col);
    if (line.substr(col, 2) != ":=") {
      throw GrammarError(Kind::kSyntax, line_no, col + 1, "expected ':=' after '" + name + "'");
    }
    col += 2;
    if (name == "STRING" || name == "INT") {
      throw GrammarError(Kind::kSyntax, line_no, name_col + 1,
                         "token class '" + name + "' cannot be a left-hand side");
    }
    current_lhs_ = intern_nonterminal(name);
    if (grammar_.productions_.empty()) grammar_.start_ = *current_lhs_;
    parse_alternatives(line, col, line_no);
  }

  void parse_alternatives(std::string_view line, std::size_t& col, std::size_t line_no) {
    std::vector<Symbol> rhs;
    std::size_t alt_col = col;
    auto finish = [&](std::size_t at) {
      if (rhs.empty()) {
        throw GrammarError(Kind::kSyntax, line_no, at + 1, "empty alternative");
      }
      grammar_.productions_.push_back({*current_lhs_, std::move(rhs)});
      grammar_.by_lhs_[*current_lhs_].push_back(
          static_cast<std::uint32_t>(grammar_.productions_.size() - 1));
      rhs.clear();
    };

    while (true) {
      skip_space(line, col);
      if (col == line.size()) break;
      const char c = line[col];
      if (c == '|') {
        finish(alt_col);
        alt_col = ++col;
        continue;
      }
      if (c == '"') {
        const std::size_t close = line.find('"', col + 1);
        if (close == std::string_view::npos) {
          throw GrammarError(Kind::kSyntax, line_no, col + 1, "unterminated literal");
        }
        rhs.push_back(make_literal(line.substr(col + 1, close - col - 1), line_no, col + 1));
        col = close + 1;
        continue;
      }
      const std::size_t sym_col = col;
      std::string name = read_name(line, col, line_no);
      if (name == "STRING") {
        rhs.push_back({Symbol::Kind::kStringClass, 0});
      } else if (name == "INT") {
        rhs.push_back({Symbol::Kind::kIntClass, 0});
      } else {
        const std::uint32_t id = intern_nonterminal(name);
        references_.push_back({id, line_no, sym_col + 1});
        rhs.push_back({Symbol::Kind::kNonterminal, id});
      }
    }
    finish(alt_col);
  }

  Symbol make_literal(std::string_view text, std::size_t line_no, std::size_t col) {
    const LexResult lexed = lex(text);
    if (!lexed.ok() || lexed.tokens.size() != 1 || lexed.tokens[0].text != text) {
      throw GrammarError(Kind::kInvalidTerminal, line_no, col,
                         "literal \"" + std::string(text) + "\" is not a single token");
    }
    const TokenKind kind = lexed.tokens[0].kind;
    if (kind == TokenKind::kInteger || kind == TokenKind::kString) {
      throw GrammarError(Kind::kInvalidTerminal, line_no, col,
                         "literal \"" + std::string(text) + "\" overlaps the " +
                             (kind == TokenKind::kInteger ? "INT" : "STRING") + " class");
    }
    auto it = std::find(grammar_.literals_.begin(), grammar_.literals_.end(), text);
    if (it != grammar_.literals_.end()) {
      return {Symbol::Kind::kLiteral,
              static_cast<std::uint32_t>(it - grammar_.literals_.begin())};
    }
    grammar_.literals_.emplace_back(text);
    return {Symbol::Kind::kLiteral, static_cast<std::uint32_t>(grammar_.literals_.size() - 1)};
  }

  std::string read_name(std::string_view line, std::size_t& col, std::size_t line_no) {
    const std::size_t start = col;
    const bool angled = line[col] == '<';
    if (angled) ++col;
    const std::size_t begin = col;
    while (col < line.size() && is_name_char(line[col])) ++col;
    std::string name(line.substr(begin, col - begin));
    if (angled) {
      if (col == line.size() || line[col] != '>') {
        throw GrammarError(Kind::kSyntax, line_no, col + 1, "expected '>'");
      }
      ++col;
    }
    if (name.empty()) {
      throw GrammarError(Kind::kSyntax, line_no, start + 1,
                         std::string("unexpected character '") + line[start] + "'");
    }
    return name;
  }

  static void skip_space(std::string_view line, std::size_t& col) {
    while (col < line.size() && std::isspace(static_cast<unsigned char>(line[col]))) ++col;
  }

  std::uint32_t intern_nonterminal(const std::string& name) {
    auto [it, inserted] =
        ids_.try_emplace(name, static_cast<std::uint32_t>(grammar_.nonterminals_.size()));
    if (inserted) {
      grammar_.nonterminals_.push_back(name);
      grammar_.by_lhs_.emplace_back();
    }
    return it->second;
  }

  void check_productive() {
    std::vector<bool> productive(grammar_.nonterminals_.size(), false);
    bool changed = true;
    while (changed) {
      changed = false;
      for (const Production& p : grammar_.productions_) {
        if (productive[p.lhs]) continue;
        const bool all = std::all_of(p.rhs.begin(), p.rhs.end(), [&](const Symbol& s) {
          return s.terminal() || productive[s.id];
        });
        if (all) productive[p.lhs] = changed = true;
      }
    }
    for (std::uint32_t id = 0; id < productive.size(); ++id) {
      if (!productive[id] && !grammar_.by_lhs_[id].empty()) {
        throw GrammarError(Kind::kUnproductive, 0, 0,
                           "nonterminal '" + grammar_.nonterminals_[id] +
                               "' derives no finite sentence");
      }
    }
  }

  Grammar grammar_;
  std::unordered_map<std::string, std::uint32_t> ids_;
  std::vector<Reference> references_;
  std::optional<std::uint32_t> current_lhs_;
};

}  // namespace detail

Grammar load_grammar(std::string_view source) { return detail::GrammarBuilder{}.build(source); }

Grammar load_grammar_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open grammar file '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return load_grammar(buffer.str());
}

const Grammar& default_grammar() {
  static const Grammar grammar = load_grammar(default_grammar_source());
  return grammar;
}

// ---------------------------------------------------------------------------
// Earley recognizer

namespace {

struct Item {
  std::uint32_t production;
  std::uint32_t dot;
  std::uint32_t origin;
};

class ItemSet {
 public:
  bool add(const Item& item) {
    const std::uint64_t key = (static_cast<std::uint64_t>(item.production) << 40) ^
                              (static_cast<std::uint64_t>(item.dot) << 28) ^ item.origin;
    if (!seen_.insert(key).second) return false;
    items_.push_back(item);
    return true;
  }
  std::size_t size() const { return items_.size(); }
  const Item& operator[](std::size_t i) const { return items_[i]; }
  bool empty() const { return items_.empty(); }

 private:
  std::vector<Item> items_;
  std::unordered_set<std::uint64_t> seen_;
};

std::size_t common_prefix(std::string_view a, std::string_view b) {
  const std::size_t n = std::min(a.size(), b.size());
  std::size_t i = 0;
  while (i < n && a[i] == b[i]) ++i;
  return i;
}

// Longest prefix of `word` that is also a prefix of some integer lexeme.
std::size_t integer_prefix(std::string_view word) {
  std::size_t i = 0;
  if (!word.empty() && (word[0] == '+' || word[0] == '-')) i = 1;
  while (i < word.size() && std::isdigit(static_cast<unsigned char>(word[i]))) ++i;
  return i;
}

std::size_t partial_credit(const Grammar& grammar, const ItemSet& set, const Token& token) {
  if (token.kind == TokenKind::kString) return 0;
  std::size_t best = 0;
  for (std::size_t i = 0; i < set.size(); ++i) {
    const Production& p = grammar.productions()[set[i].production];
    if (set[i].dot == p.rhs.size()) continue;
    const Symbol& next = p.rhs[set[i].dot];
    if (next.kind == Symbol::Kind::kLiteral) {
      best = std::max(best, common_prefix(token.text, grammar.literal(next.id)));
    } else if (next.kind == Symbol::Kind::kIntClass) {
      best = std::max(best, integer_prefix(token.text));
    }
  }
  return best;
}

}  // namespace

ValidPrefixResult recognize(const Grammar& grammar, std::string_view input) {
  ValidPrefixResult result;
  result.total_chars = input.size();

  const LexResult lexed = lex(input);
  const std::vector<Token>& tokens = lexed.tokens;
  const std::size_t n = tokens.size();
  const auto& productions = grammar.productions();

  std::vector<ItemSet> chart(n + 1);
  std::vector<bool> predicted(grammar.nonterminal_count());
  for (std::uint32_t p : grammar.productions_for(grammar.start_id())) chart[0].add({p, 0, 0});

  std::optional<std::size_t> failed_at;
  for (std::size_t i = 0; i <= n; ++i) {
    std::fill(predicted.begin(), predicted.end(), false);
    ItemSet& set = chart[i];
    for (std::size_t j = 0; j < set.size(); ++j) {
      const Item item = set[j];
      const Production& prod = productions[item.production];
      if (item.dot == prod.rhs.size()) {
        const ItemSet& origin = chart[item.origin];
        for (std::size_t k = 0; k < origin.size(); ++k) {
          const Item& waiting = origin[k];
          const Production& wp = productions[waiting.production];
          if (waiting.dot < wp.rhs.size() &&
              wp.rhs[waiting.dot] == Symbol{Symbol::Kind::kNonterminal, prod.lhs}) {
            set.add({waiting.production, waiting.dot + 1, waiting.origin});
          }
        }
        continue;
      }
      const Symbol& next = prod.rhs[item.dot];
      if (!next.terminal()) {
        if (!predicted[next.id]) {
          predicted[next.id] = true;
          for (std::uint32_t p : grammar.productions_for(next.id)) {
            set.add({p, 0, static_cast<std::uint32_t>(i)});
          }
        }
      } else if (i < n && grammar.matches(next, tokens[i])) {
        chart[i + 1].add({item.production, item.dot + 1, item.origin});
      }
    }
    if (i < n && chart[i + 1].empty()) {
      failed_at = i;
      break;
    }
  }

  if (failed_at) {
    const Token& bad = tokens[*failed_at];
    const std::size_t credit = partial_credit(grammar, chart[*failed_at], bad);
    // Whitespace after a scanned token belongs to that token's span.
    result.consumed_chars = (*failed_at > 0 || credit > 0) ? bad.offset + credit : 0;
    result.failure = FailurePoint{bad.text, bad.offset};
    return result;
  }

  if (lexed.error) {
    result.consumed_chars = n > 0 ? lexed.error->offset : 0;
    const std::size_t stop = input.find_first_of(" \t\r\n", lexed.error->offset);
    result.failure = FailurePoint{
        std::string(input.substr(lexed.error->offset, stop == std::string_view::npos
                                                          ? std::string_view::npos
                                                          : stop - lexed.error->offset)),
        lexed.error->offset};
    return result;
  }

  if (n == 0) return result;

  result.consumed_chars = result.total_chars;
  const ItemSet& last = chart[n];
  for (std::size_t k = 0; k < last.size(); ++k) {
    const Item& item = last[k];
    const Production& prod = productions[item.production];
    if (item.origin == 0 && item.dot == prod.rhs.size() && prod.lhs == grammar.start_id()) {
      result.accepted = true;
      break;
    }
  }
  return result;
}

double grammar_reward(const Grammar& grammar, std::string_view candidate) {
  const ValidPrefixResult r = recognize(grammar, candidate);
  if (r.total_chars == 0) return 0.0;
  return static_cast<double>(r.consumed_chars) / static_cast<double>(r.total_chars);
}

}  // namespace ludilite
