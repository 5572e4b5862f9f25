#include "doctest.h"

#include <cmath>
#include <string>

#include "ludilite/concepts.hpp"
#include "oracles/tictactoe_oracle.hpp"
#include "test_support.hpp"

using namespace ludilite;

namespace {

GameSpec must_compile(const std::string& text) {
  CompileResult r = compile(text);
  if (!r) FAIL(r.error().describe());
  return r.spec();
}

PlayoutTrace trace_of(std::vector<int> decision_points, Outcome outcome, int touched) {
  PlayoutTrace t;
  for (std::size_t i = 0; i < decision_points.size(); ++i) t.moves.push_back(Move{static_cast<int>(i), 1});
  t.decision_points = std::move(decision_points);
  t.outcome = outcome;
  t.final_touched = touched;
  return t;
}

}  // namespace

TEST_CASE("run_playouts within budget") {
  GameSpec spec = must_compile(testing::kTicTacToe);
  PlayoutStats stats = run_playouts(spec, 10, 0, 250, 180.0);
  CHECK(stats.completed_playouts == 10);
  CHECK(stats.requested_playouts == 10);
  CHECK_FALSE(stats.budget_exceeded);
  CHECK(stats.traces.size() == 10);
  for (int i = 0; i < 10; ++i) CHECK(stats.traces[i].seed == static_cast<std::uint64_t>(i));
}

TEST_CASE("zero budget completes nothing") {
  GameSpec spec = must_compile(testing::kTicTacToe);
  PlayoutStats stats = run_playouts(spec, 10, 0, 250, 0.0);
  CHECK(stats.completed_playouts == 0);
  CHECK(stats.budget_exceeded);
  CHECK_THROWS_AS(extract_concepts(stats, spec), ConceptError);
}

TEST_CASE("property: accounting identity and ranges") {
  for (const Instance& inst : testing::corpus()) {
    CAPTURE(inst.id);
    GameSpec spec = must_compile(inst.description);
    PlayoutStats stats = run_playouts(spec, 40, 17, 250, 180.0);
    CHECK(stats.total_wins() + stats.draws + stats.timeouts == stats.completed_playouts);
    CHECK(stats.completed_playouts <= stats.requested_playouts);
    ConceptVector c = extract_concepts(stats, spec);
    for (double v : c.flatten()) {
      CHECK(v >= 0.0);
      CHECK(v <= 1.0);
    }
    CHECK(c.balance.has_value() == (spec.num_players >= 2));
    CHECK(c.completion.has_value() == (spec.num_players >= 2));
    CHECK(c.items().size() == c.item_count());
    CHECK(c.extended.size() == 2);
  }
}

TEST_CASE("one-player games have no balance or completion") {
  GameSpec solo = must_compile(testing::placement_game(1, "(square 4)", "(if (is Line 3) (result Mover Win)) (if (is Full) (result All Draw))"));
  ConceptVector c = extract_concepts(run_playouts(solo, 10, 0), solo);
  CHECK_FALSE(c.balance.has_value());
  CHECK_FALSE(c.completion.has_value());
  CHECK(c.item_count() == 3);
  CHECK(c.flatten().size() == 5);
}

TEST_CASE("seed stability") {
  GameSpec spec = must_compile(testing::kTicTacToe);
  CHECK(extract_concepts(run_playouts(spec, 50, 123), spec) ==
        extract_concepts(run_playouts(spec, 50, 123), spec));
  CHECK_FALSE(extract_concepts(run_playouts(spec, 50, 123), spec) ==
              extract_concepts(run_playouts(spec, 50, 124), spec));
}

TEST_CASE("timeouts count toward c3") {
  GameSpec big = must_compile(testing::placement_game(1, "(square 30)", "(if (is Full) (result All Draw))"));
  ConceptVector c = extract_concepts(run_playouts(big, 3, 0, 100), big);
  CHECK(c.timeout == 1.0);
  CHECK(c.extended[0] == 1.0);
  CHECK(c.board_coverage_used == doctest::Approx(100.0 / 900.0));
}

TEST_CASE("extraction formulas on hand-built stats") {
  GameSpec spec = must_compile(testing::placement_game(3, "(rectangle 2 2)", "(if (is Full) (result All Draw))"));
  PlayoutStats stats;
  stats.max_turns = 10;
  stats.traces = {
      trace_of({4, 3, 2, 1}, Outcome::draw(), 4),   // 3 of 4 turns with a choice
      trace_of({4, 3}, Outcome::win(1), 2),         // 2 of 2
      trace_of({4, 3, 2}, Outcome::win(1), 3),      // 3 of 3
      trace_of({4}, Outcome::win(2), 1),            // 1 of 1
  };
  stats.wins_per_player = {2, 1, 0};
  stats.draws = 1;
  stats.completed_playouts = stats.requested_playouts = 4;

  ConceptVector c = extract_concepts(stats, spec);
  CHECK(c.decision_moves == doctest::Approx((0.75 + 1 + 1 + 1) / 4));
  CHECK(c.board_coverage_used == doctest::Approx((1.0 + 0.5 + 0.75 + 0.25) / 4));
  CHECK(c.timeout == 0.0);
  // Win rates 1/2, 1/4, 0: pairwise gaps 1/4, 1/2, 1/4.
  REQUIRE(c.balance.has_value());
  CHECK(*c.balance == doctest::Approx(1.0 - (0.25 + 0.5 + 0.25) / 3));
  CHECK(*c.completion == doctest::Approx(0.75));
  CHECK(c.extended[0] == doctest::Approx((4 + 2 + 3 + 1) / 4.0 / 10.0));
  CHECK(c.extended[1] == doctest::Approx((2.5 + 3.5 + 3.0 + 4.0) / 4.0 / 4.0));
}

TEST_CASE("tic-tac-toe estimates converge to the enumerated values") {
  const oracle::TicTacToeExpectations exact = oracle::enumerate_tictactoe();
  GameSpec spec = must_compile(testing::kTicTacToe);
  ConceptVector c = extract_concepts(run_playouts(spec, 10000, 0), spec);
  constexpr double kTol = 0.02;
  CHECK(std::abs(c.decision_moves - exact.decision_moves) <= kTol);
  CHECK(std::abs(c.board_coverage_used - exact.coverage) <= kTol);
  CHECK(c.timeout == 0.0);
  CHECK(std::abs(*c.balance - exact.balance()) <= kTol);
  CHECK(std::abs(*c.completion - exact.completion()) <= kTol);
  CHECK(std::abs(c.extended[0] - exact.length / 250.0) <= kTol);
  CHECK(std::abs(c.extended[1] - exact.branching / 9.0) <= kTol);
}
