#include "doctest.h"

#include <algorithm>
#include <array>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "ludilite/engine.hpp"
#include "ludilite/lexer.hpp"
#include "ludilite/rng.hpp"
#include "oracles/tictactoe_oracle.hpp"
#include "test_support.hpp"

using namespace ludilite;

namespace {

GameSpec must_compile(const std::string& text) {
  CompileResult r = compile(text);
  if (!r) FAIL(r.error().describe());
  return r.spec();
}

GameSpec tictactoe() { return must_compile(testing::kTicTacToe); }

GameState play(const GameSpec& spec, std::initializer_list<int> sites) {
  GameState s = initial_state(spec);
  for (int site : sites) s = apply_move(spec, s, Move{site, s.mover});
  return s;
}

int occupied(const GameState& s) {
  return static_cast<int>(std::count_if(s.occupancy.begin(), s.occupancy.end(),
                                        [](std::uint8_t v) { return v != 0; }));
}

// Probability-weighted walk of the engine's own game tree.
void engine_walk(const GameSpec& spec, const GameState& state, double prob,
                 std::map<std::string, double>& out) {
  const auto moves = legal_moves(spec, state);
  for (const Move& m : moves) {
    GameState next = apply_move(spec, state, m);
    const double p = prob / static_cast<double>(moves.size());
    if (auto outcome = terminal_result(spec, next)) {
      out[to_string(*outcome)] += p;
    } else {
      engine_walk(spec, next, p, out);
    }
  }
}

}  // namespace

TEST_CASE("SplitMix64 reference sequence") {
  SplitMix64 rng(1234567);
  CHECK(rng.next() == 6457827717110365317ULL);
  CHECK(rng.next() == 3203168211198807973ULL);
  CHECK(rng.next() == 9817491932198370423ULL);
  CHECK(rng.next() == 4593380528125082431ULL);
  CHECK(rng.next() == 16408922859458223821ULL);
}

TEST_CASE("bounded draws stay in range and cover it") {
  SplitMix64 rng(5);
  std::array<int, 7> seen{};
  for (int i = 0; i < 7000; ++i) {
    const auto v = rng.bounded(7);
    REQUIRE(v < 7);
    ++seen[v];
  }
  for (int count : seen) CHECK(count > 800);
}

TEST_CASE("tokenize") {
  auto tokens = tokenize("(players 2)");
  REQUIRE(tokens.size() == 4);
  CHECK(tokens[0].kind == TokenKind::kOpenParen);
  CHECK(tokens[1].text == "players");
  CHECK(tokens[1].kind == TokenKind::kWord);
  CHECK(tokens[2].kind == TokenKind::kInteger);
  CHECK(tokens[2].offset == 9);
  CHECK(tokens[3].kind == TokenKind::kCloseParen);

  CHECK(tokenize("").empty());
  CHECK(tokenize(" \n\t ").empty());

  try {
    tokenize("(game \"Tic)");
    FAIL("expected lex error");
  } catch (const LexException& e) {
    CHECK(e.error().offset == 6);
  }

  auto mixed = tokenize("{\"a b\" -3 +4 x-1 Line}");
  REQUIRE(mixed.size() == 7);
  CHECK(mixed[1].kind == TokenKind::kString);
  CHECK(mixed[1].unquoted() == "a b");
  CHECK(mixed[2].kind == TokenKind::kInteger);
  CHECK(mixed[3].kind == TokenKind::kInteger);
  CHECK(mixed[4].kind == TokenKind::kWord);
}

TEST_CASE("compile tic-tac-toe") {
  GameSpec spec = tictactoe();
  CHECK(spec.name == "Tic-Tac-Toe");
  CHECK(spec.num_players == 2);
  CHECK(spec.rows == 3);
  CHECK(spec.cols == 3);
  REQUIRE(spec.pieces.size() == 1);
  CHECK(spec.pieces[0] == PieceSpec{"Disc", Ownership::kEach});
  CHECK(spec.move_rule == MoveRule::kAddToEmpty);
  REQUIRE(spec.end_rules.size() == 2);
  CHECK(spec.end_rules[0] == EndRule{EndCondition::kLine, 3, Role::kMover, ResultKind::kWin});
  CHECK(spec.end_rules[1].condition == EndCondition::kFull);
  CHECK(spec.end_rules[1].role == Role::kAll);
  CHECK(spec.end_rules[1].result == ResultKind::kDraw);
}

TEST_CASE("compile errors") {
  std::string zero = testing::kTicTacToe;
  zero.replace(zero.find("(players 2)"), 11, "(players 0)");
  CompileResult r = compile(zero);
  REQUIRE_FALSE(r.ok());
  CHECK(r.error().kind == CompileError::Kind::kSemantic);
  CHECK(r.error().message == "players must be >= 1");

  CompileResult typo = compile("(gmae \"x\")");
  REQUIRE_FALSE(typo.ok());
  CHECK(typo.error().kind == CompileError::Kind::kStructural);
  CHECK(typo.error().offset == 1);

  CompileResult lex = compile("(game \"Tic");
  REQUIRE_FALSE(lex.ok());
  CHECK(lex.error().kind == CompileError::Kind::kLex);

  CHECK(compile(testing::placement_game(2, "(square 0)", "(if (is Full) (result All Draw))"))
            .error().kind == CompileError::Kind::kSemantic);
  CHECK(compile(testing::placement_game(2, "(square 3)", "(if (is Line 0) (result Mover Win))"))
            .error().kind == CompileError::Kind::kSemantic);
  CHECK_FALSE(compile(testing::placement_game(2, "(square 3)", "(if (is Full) (result All Win))")));
  CHECK_FALSE(compile(testing::placement_game(3, "(square 3)", "(if (is Line 3) (result Mover Loss))")));
  CHECK(compile(testing::placement_game(2, "(square 3)", "(if (is Line 3) (result Mover Loss))")));
  CHECK_FALSE(compile(testing::placement_game(2, "(square 3)", "")));
  CHECK_FALSE(compile(testing::placement_game(65, "(square 3)", "(if (is Full) (result All Draw))")));
  CHECK_FALSE(compile(testing::placement_game(2, "(square 300)", "(if (is Full) (result All Draw))")));
  CHECK_FALSE(compile(std::string(testing::kTicTacToe) + " extra"));
}

TEST_CASE("every corpus description compiles") {
  for (const Instance& inst : testing::corpus()) {
    CAPTURE(inst.id);
    CHECK(compile(inst.description).ok());
  }
}

TEST_CASE("initial state and legal moves") {
  GameSpec spec = tictactoe();
  GameState s = initial_state(spec);
  CHECK(s.occupancy.size() == 9);
  CHECK(occupied(s) == 0);
  CHECK(s.mover == 1);
  CHECK(s.move_count == 0);
  CHECK(s.touched_count() == 0);
  CHECK(legal_moves(spec, s).size() == 9);
  CHECK(legal_moves(spec, s).front() == Move{0, 1});

  GameSpec strip = must_compile(testing::placement_game(1, "(rectangle 1 5)", "(if (is Full) (result All Draw))"));
  CHECK(initial_state(strip).occupancy.size() == 5);

  GameState eight = play(spec, {0, 1, 2, 4, 3, 5, 7, 6});
  auto one = legal_moves(spec, eight);
  REQUIRE(one.size() == 1);
  CHECK(one[0].site == 8);
  CHECK(legal_moves(spec, play(spec, {0, 1, 2, 4, 3, 5, 7, 6, 8})).empty());
}

TEST_CASE("apply_move") {
  GameSpec spec = tictactoe();
  const GameState before = initial_state(spec);
  const GameState copy = before;
  GameState after = apply_move(spec, before, Move{4, 1});
  CHECK(before == copy);
  CHECK(after.occupancy[4] == 1);
  CHECK(after.touched[4] == 1);
  CHECK(after.mover == 2);
  CHECK(after.move_count == 1);
  CHECK_THROWS_AS(apply_move(spec, after, Move{4, 2}), IllegalMoveError);
  CHECK_THROWS_AS(apply_move(spec, after, Move{9, 2}), IllegalMoveError);
  CHECK_THROWS_AS(apply_move(spec, after, Move{-1, 2}), IllegalMoveError);
  CHECK_THROWS_AS(apply_move(spec, after, Move{0, 1}), IllegalMoveError);

  GameSpec three = must_compile(testing::placement_game(3, "(square 4)", "(if (is Line 3) (result Mover Win))"));
  GameState s = play(three, {0, 1, 2});
  CHECK(s.mover == 1);
  CHECK(play(three, {0, 1}).mover == 3);
}

TEST_CASE("terminal_result") {
  GameSpec spec = tictactoe();
  CHECK_FALSE(terminal_result(spec, initial_state(spec)).has_value());
  // P1 takes the top row.
  CHECK(terminal_result(spec, play(spec, {0, 3, 1, 4, 2})) == Outcome::win(1));
  // P2 takes the anti-diagonal.
  CHECK(terminal_result(spec, play(spec, {0, 2, 1, 4, 3, 6})) == Outcome::win(2));
  // X O X / X O O / O X X: full, no line.
  CHECK(terminal_result(spec, play(spec, {0, 1, 2, 4, 3, 5, 7, 6, 8})) == Outcome::draw());
  CHECK_FALSE(terminal_result(spec, play(spec, {0, 1, 2})).has_value());

  // Misere: completing a line loses.
  GameSpec misere = must_compile(testing::placement_game(2, "(square 3)",
      "(if (is Line 3) (result Mover Loss)) (if (is Full) (result All Draw))"));
  CHECK(terminal_result(misere, play(misere, {0, 3, 1, 4, 2})) == Outcome::win(2));

  // Declaration order: Full before Line makes a board-filling line a draw.
  GameSpec full_first = must_compile(testing::placement_game(2, "(square 3)",
      "(if (is Full) (result All Draw)) (if (is Line 3) (result Mover Win))"));
  // X O X / O X O / O X X -- last move at 8 completes the main diagonal and fills the board.
  GameState filled = play(full_first, {0, 1, 2, 3, 4, 6, 7, 5, 8});
  CHECK(terminal_result(full_first, filled) == Outcome::draw());
  CHECK(terminal_result(spec, filled) == Outcome::win(1));
}

TEST_CASE("random playouts are deterministic and within 5..9 moves") {
  GameSpec spec = tictactoe();
  CHECK(random_playout(spec, 42) == random_playout(spec, 42));
  for (std::uint64_t seed = 0; seed < 2000; ++seed) {
    PlayoutTrace t = random_playout(spec, seed);
    CHECK(t.moves.size() >= 5);
    CHECK(t.moves.size() <= 9);
    CHECK(t.outcome.kind != Outcome::Kind::kTimeout);
    CHECK(t.decision_points.size() == t.moves.size());
    CHECK(t.seed == seed);
    CHECK(t.final_touched == static_cast<int>(t.moves.size()));
    for (std::size_t i = 0; i < t.decision_points.size(); ++i) {
      CHECK(t.decision_points[i] == 9 - static_cast<int>(i));
    }
  }
}

TEST_CASE("engine game tree matches the independent enumerator") {
  const oracle::TicTacToeExpectations exact = oracle::enumerate_tictactoe();
  std::map<std::string, double> engine;
  GameSpec spec = tictactoe();
  engine_walk(spec, initial_state(spec), 1.0, engine);
  CHECK(engine.size() == 3);
  CHECK(engine["win(1)"] == doctest::Approx(exact.p_win1).epsilon(1e-12));
  CHECK(engine["win(2)"] == doctest::Approx(exact.p_win2).epsilon(1e-12));
  CHECK(engine["draw"] == doctest::Approx(exact.p_draw).epsilon(1e-12));

  // Outcome set reachable by random playouts equals the enumerated set.
  std::set<std::string> sampled;
  int shortest = 10, longest = 0;
  for (std::uint64_t seed = 0; seed < 3000; ++seed) {
    PlayoutTrace t = random_playout(spec, seed);
    sampled.insert(t.outcome.kind == Outcome::Kind::kDraw ? "draw"
                                                          : "win" + std::to_string(t.outcome.winner));
    shortest = std::min(shortest, static_cast<int>(t.moves.size()));
    longest = std::max(longest, static_cast<int>(t.moves.size()));
  }
  CHECK(sampled == exact.outcomes);
  CHECK(shortest == exact.min_length);
  CHECK(longest == exact.max_length);
}

TEST_CASE("oracle values are frozen") {
  // Exact uniform-random tic-tac-toe: P1 737/1260, P2 363/1260, draw 160/1260.
  const oracle::TicTacToeExpectations e = oracle::enumerate_tictactoe();
  CHECK(e.p_win1 == doctest::Approx(737.0 / 1260.0).epsilon(1e-12));
  CHECK(e.p_win2 == doctest::Approx(363.0 / 1260.0).epsilon(1e-12));
  CHECK(e.p_draw == doctest::Approx(160.0 / 1260.0).epsilon(1e-12));
  CHECK(e.decision_moves == doctest::Approx(0.96084656084730025).epsilon(1e-12));
  CHECK(e.coverage == doctest::Approx(0.84735449735544621).epsilon(1e-12));
  CHECK(e.length == doctest::Approx(7.6261904761815256).epsilon(1e-12));
  CHECK(e.branching == doctest::Approx(5.6869047619254847).epsilon(1e-12));
  CHECK(e.min_length == 5);
  CHECK(e.max_length == 9);
}

TEST_CASE("property: conservation along random playouts") {
  for (const Instance& inst : testing::corpus()) {
    GameSpec spec = must_compile(inst.description);
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      PlayoutTrace t = random_playout(spec, seed, 60);
      GameState s = initial_state(spec);
      for (const Move& m : t.moves) {
        auto moves = legal_moves(spec, s);
        REQUIRE(std::find(moves.begin(), moves.end(), m) != moves.end());
        const int empties = static_cast<int>(std::count(s.occupancy.begin(), s.occupancy.end(), 0));
        CHECK(static_cast<int>(moves.size()) == empties);
        for (const Move& legal : moves) CHECK(s.occupancy[legal.site] == 0);
        const GameState before = s;
        GameState next = apply_move(spec, s, m);
        CHECK(s == before);
        s = std::move(next);
        CHECK(occupied(s) == s.move_count);
        CHECK(s.mover >= 1);
        CHECK(s.mover <= spec.num_players);
        for (std::size_t i = 0; i < s.occupancy.size(); ++i) {
          if (s.occupancy[i] != 0) CHECK(s.touched[i] == 1);
        }
      }
      CHECK(s.touched_count() == t.final_touched);
    }
  }
}

TEST_CASE("functionality") {
  CHECK(check_functionality(tictactoe()).functional);

  GameSpec unsat = must_compile(testing::placement_game(2, "(square 3)", "(if (is Line 5) (result Mover Win))"));
  FunctionalityResult r = check_functionality(unsat);
  CHECK_FALSE(r.functional);
  CHECK(r.reason == NonFunctionalReason::kStalemateWithoutEnd);

  PlayoutTrace t = random_playout(unsat, 3);
  CHECK(t.stalemate);
  CHECK(t.outcome.kind == Outcome::Kind::kTimeout);
  CHECK(t.moves.size() == 9);

  // The cap is respected when nothing can end the game in time.
  GameSpec big = must_compile(testing::placement_game(1, "(square 30)", "(if (is Full) (result All Draw))"));
  PlayoutTrace capped = random_playout(big, 0, 250);
  CHECK(capped.moves.size() == 250);
  CHECK(capped.outcome.kind == Outcome::Kind::kTimeout);
  CHECK_FALSE(capped.stalemate);
  FunctionalityResult never = check_functionality(big);
  CHECK_FALSE(never.functional);
  CHECK(never.reason == NonFunctionalReason::kNeverTerminates);

  GameSpec single = must_compile(testing::placement_game(1, "(square 1)", "(if (is Line 2) (result Mover Win))"));
  PlayoutTrace one = random_playout(single, 0, 250);
  CHECK(one.moves.size() == 1);
  CHECK(one.stalemate);
  CHECK(check_functionality(single).reason == NonFunctionalReason::kStalemateWithoutEnd);

  for (const Instance& inst : testing::corpus()) {
    CAPTURE(inst.id);
    CHECK(check_functionality(must_compile(inst.description)).functional);
  }
}
