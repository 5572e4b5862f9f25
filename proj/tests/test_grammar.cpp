#include "doctest.h"

#include <random>
#include <string>
#include <vector>

#include "ludilite/grammar.hpp"
#include "ludilite/lexer.hpp"
#include "oracles/prefix_oracle.hpp"
#include "test_support.hpp"

using namespace ludilite;

namespace {

const char* kToy = "s := \"(\" \"a\" \")\"\n";

// Nested lists of a / ab atoms, plus an empty brace pair.
const char* kNested =
    "s := \"(\" l \")\" | \"a\" | \"ab\"\n"
    "   | \"{\" \"}\"\n"
    "l := s | s l\n";

oracle::ToyGrammar nested_oracle() {
  oracle::ToyGrammar g;
  g.start = "s";
  g.rules["s"] = {{"'('", "l", "')'"}, {"'a'"}, {"'ab'"}, {"'{'", "'}'"}};
  g.rules["l"] = {{"s"}, {"s", "l"}};
  return g;
}

GrammarError::Kind load_error_kind(const std::string& text) {
  try {
    load_grammar(text);
  } catch (const GrammarError& e) {
    return e.kind();
  }
  FAIL("grammar loaded unexpectedly: " << text);
  return GrammarError::Kind::kSyntax;
}

}  // namespace

TEST_CASE("shipped grammar loads with start symbol game") {
  const Grammar& g = default_grammar();
  CHECK(g.start_symbol() == "game");
  CHECK(load_grammar(default_grammar_source()).productions().size() == g.productions().size());
  CHECK(load_grammar_file(testing::data_path("ludilite.grammar")).start_symbol() == "game");
}

TEST_CASE("grammar loader errors") {
  CHECK(load_error_kind("game := \"(\" <bogus> \")\"\n") == GrammarError::Kind::kUndefinedNonterminal);
  CHECK(load_error_kind("") == GrammarError::Kind::kEmptyGrammar);
  CHECK(load_error_kind("# only a comment\n\n") == GrammarError::Kind::kEmptyGrammar);
  CHECK(load_error_kind("s = \"a\"\n") == GrammarError::Kind::kSyntax);
  CHECK(load_error_kind("s := \"a\n") == GrammarError::Kind::kSyntax);
  CHECK(load_error_kind("s := \"a b\"\n") == GrammarError::Kind::kInvalidTerminal);
  CHECK(load_error_kind("s := \"(\" s \")\"\n") == GrammarError::Kind::kUnproductive);
  CHECK(load_error_kind("s := \"a\" |\n") == GrammarError::Kind::kSyntax);

  try {
    load_grammar("s := \"a\" t\n\nt := \"b\" = \n");
    FAIL("expected syntax error");
  } catch (const GrammarError& e) {
    CHECK(e.line() == 3);
  }
}

TEST_CASE("angle-bracket and bare nonterminals are the same symbol") {
  Grammar g = load_grammar("s := \"x\" <t>\nt := INT | STRING\n");
  CHECK(recognize(g, "x 5").accepted);
  CHECK(recognize(g, "x \"q\"").accepted);
  CHECK_FALSE(recognize(g, "x y").accepted);
}

TEST_CASE("toy grammar: (ab consumes two of three characters") {
  Grammar g = load_grammar(kToy);
  ValidPrefixResult r = recognize(g, "(ab");
  CHECK(r.consumed_chars == 2);
  CHECK(r.total_chars == 3);
  CHECK_FALSE(r.accepted);
  REQUIRE(r.failure.has_value());
  CHECK(r.failure->token == "ab");
  CHECK(r.failure->offset == 1);
  CHECK(grammar_reward(g, "(ab") == doctest::Approx(2.0 / 3.0).epsilon(1e-15));

  CHECK(recognize(g, "( a )").accepted);
  CHECK(grammar_reward(g, "( a )") == 1.0);
  CHECK(grammar_reward(g, "( a") == 1.0);  // viable but incomplete
  CHECK_FALSE(recognize(g, "( a").accepted);
}

TEST_CASE("empty and unscannable inputs") {
  Grammar g = load_grammar(kToy);
  ValidPrefixResult r = recognize(g, "");
  CHECK(r.consumed_chars == 0);
  CHECK(r.total_chars == 0);
  CHECK_FALSE(r.accepted);
  CHECK(grammar_reward(g, "") == 0.0);

  CHECK(recognize(g, "xyz").consumed_chars == 0);
  CHECK(recognize(g, "   ").consumed_chars == 0);
  CHECK(recognize(g, "  ) a").consumed_chars == 0);
  CHECK(grammar_reward(default_grammar(), "xyz") == 0.0);
}

TEST_CASE("lex failure stops at the last well-formed token") {
  // Unterminated string: everything before the quote is viable.
  ValidPrefixResult r = recognize(default_grammar(), "(game \"Tic");
  CHECK(r.consumed_chars == 6);
  CHECK(r.total_chars == 10);
  CHECK(recognize(default_grammar(), "\"open").consumed_chars == 0);
}

TEST_CASE("tic-tac-toe is a complete sentence") {
  ValidPrefixResult r = recognize(default_grammar(), testing::kTicTacToe);
  CHECK(r.accepted);
  CHECK(r.consumed_chars == r.total_chars);
  CHECK_FALSE(r.failure.has_value());
  CHECK(grammar_reward(default_grammar(), testing::kTicTacToe) == 1.0);
}

TEST_CASE("every corpus description is accepted") {
  for (const Instance& inst : testing::corpus()) {
    CAPTURE(inst.id);
    CHECK(recognize(default_grammar(), inst.description).accepted);
    CHECK(grammar_reward(default_grammar(), inst.description) == 1.0);
  }
}

TEST_CASE("property: keyword mutations break acceptance no later than the mutation") {
  // 'Q' appears in no literal of the shipped grammar.
  for (const Instance& inst : testing::corpus()) {
    const std::string& text = inst.description;
    for (const Token& tok : tokenize(text)) {
      if (tok.kind != TokenKind::kWord) continue;
      for (std::size_t k = 0; k < tok.text.size(); ++k) {
        std::string mutated = text;
        const std::size_t at = tok.offset + k;
        mutated[at] = 'Q';
        ValidPrefixResult r = recognize(default_grammar(), mutated);
        CAPTURE(inst.id);
        CAPTURE(mutated);
        CHECK(grammar_reward(default_grammar(), mutated) < 1.0);
        CHECK(r.consumed_chars <= at);
        CHECK_FALSE(r.accepted);
      }
    }
  }
}

TEST_CASE("property: extending a fully viable prefix never loses consumed characters") {
  std::mt19937_64 rng(20240611);
  const std::string alphabet = "() {}\"aQ19-Line ";
  for (const Instance& inst : testing::corpus()) {
    const std::string& text = inst.description;
    for (int trial = 0; trial < 60; ++trial) {
      const std::size_t cut = std::uniform_int_distribution<std::size_t>(0, text.size())(rng);
      const std::string s = text.substr(0, cut);
      const ValidPrefixResult base = recognize(default_grammar(), s);
      if (base.consumed_chars != base.total_chars) continue;
      std::string t;
      const int len = std::uniform_int_distribution<int>(1, 8)(rng);
      for (int i = 0; i < len; ++i) {
        t += alphabet[std::uniform_int_distribution<std::size_t>(0, alphabet.size() - 1)(rng)];
      }
      CAPTURE(s);
      CAPTURE(t);
      CHECK(recognize(default_grammar(), s + t).consumed_chars >= base.consumed_chars);
      CHECK(recognize(default_grammar(), s + text.substr(cut)).accepted);
    }
  }
}

TEST_CASE("property: agreement with brute-force sentence enumeration") {
  Grammar g = load_grammar(kNested);
  const auto sentences = oracle::enumerate_sentences(nested_oracle(), 11);
  REQUIRE(sentences.size() > 100);

  const std::vector<std::string> pieces = {"(", ")", "{", "}", "a", "ab", "b", "ac", "abc"};
  std::mt19937_64 rng(7);
  int compared = 0;
  for (int trial = 0; trial < 3000; ++trial) {
    const int n = std::uniform_int_distribution<int>(0, 5)(rng);
    std::string input;
    for (int i = 0; i < n; ++i) {
      if (i > 0) input += ' ';
      input += pieces[std::uniform_int_distribution<std::size_t>(0, pieces.size() - 1)(rng)];
    }
    CAPTURE(input);
    CHECK(recognize(g, input).consumed_chars == oracle::longest_viable_prefix(sentences, input));
    ++compared;
  }
  CHECK(compared == 3000);
}

TEST_CASE("property: reward bounds and determinism") {
  std::mt19937_64 rng(99);
  const std::string alphabet = "()\"{} gameplyrsEchLin0123";
  for (int trial = 0; trial < 500; ++trial) {
    std::string input;
    const int len = std::uniform_int_distribution<int>(0, 40)(rng);
    for (int i = 0; i < len; ++i) {
      input += alphabet[std::uniform_int_distribution<std::size_t>(0, alphabet.size() - 1)(rng)];
    }
    const ValidPrefixResult a = recognize(default_grammar(), input);
    const ValidPrefixResult b = recognize(default_grammar(), input);
    CHECK(a.consumed_chars <= a.total_chars);
    CHECK(a.total_chars == input.size());
    if (a.accepted) CHECK(a.consumed_chars == a.total_chars);
    CHECK(a.consumed_chars == b.consumed_chars);
    CHECK(a.accepted == b.accepted);
    const double r = grammar_reward(default_grammar(), input);
    CHECK(r >= 0.0);
    CHECK(r <= 1.0);
  }
}
