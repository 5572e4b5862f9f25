#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "ludilite/engine.hpp"

namespace ludilite {

inline constexpr double kDefaultBudgetSecs = 180.0;

struct PlayoutStats {
  std::vector<PlayoutTrace> traces;
  std::vector<int> wins_per_player;  // index 0 is player 1
  int draws = 0;
  int timeouts = 0;
  int requested_playouts = 0;
  int completed_playouts = 0;
  int max_turns = kDefaultMaxTurns;
  double elapsed_secs = 0.0;
  bool budget_exceeded = false;

  int total_wins() const;
};

// Runs playouts with seeds base_seed, base_seed+1, ... until `n` are done or
// the wall-clock budget for the whole batch is spent.
PlayoutStats run_playouts(const GameSpec& spec, int n, std::uint64_t base_seed,
                          int max_turns = kDefaultMaxTurns,
                          double budget_secs = kDefaultBudgetSecs);

// Five playout concepts plus the auxiliary features used for concept distance.
// Balance and completion are only defined for two or more players.
struct ConceptVector {
  double decision_moves = 0.0;      // c1
  double board_coverage_used = 0.0; // c2
  double timeout = 0.0;             // c3
  std::optional<double> balance;    // c4
  std::optional<double> completion; // c5
  // Mean game length / max_turns, mean branching factor / board size.
  std::vector<double> extended;

  // c1..c5, skipping undefined entries.
  std::vector<double> items() const;
  std::size_t item_count() const { return balance ? 5 : 3; }
  // items() followed by the extended features.
  std::vector<double> flatten() const;

  friend bool operator==(const ConceptVector&, const ConceptVector&) = default;
};

class ConceptError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Throws ConceptError when no playout completed.
ConceptVector extract_concepts(const PlayoutStats& stats, const GameSpec& spec);

}  // namespace ludilite
