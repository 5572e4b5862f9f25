#include "ludilite/engine.hpp"

#include <algorithm>
#include <numeric>

#include "ludilite/rng.hpp"

namespace ludilite {

int GameState::touched_count() const {
  return static_cast<int>(std::count(touched.begin(), touched.end(), std::uint8_t{1}));
}

std::string to_string(const Outcome& outcome) {
  switch (outcome.kind) {
    case Outcome::Kind::kWin: return "win(" + std::to_string(outcome.winner) + ")";
    case Outcome::Kind::kDraw: return "draw";
    case Outcome::Kind::kTimeout: return "timeout";
  }
  return "?";
}

GameState initial_state(const GameSpec& spec) {
  GameState state;
  state.occupancy.assign(static_cast<std::size_t>(spec.site_count()), 0);
  state.touched.assign(static_cast<std::size_t>(spec.site_count()), 0);
  state.mover = 1;
  state.move_count = 0;
  return state;
}

std::vector<Move> legal_moves(const GameSpec& spec, const GameState& state) {
  std::vector<Move> moves;
  const int sites = spec.site_count();
  moves.reserve(static_cast<std::size_t>(sites - state.move_count));
  for (int site = 0; site < sites; ++site) {
    if (state.occupancy[static_cast<std::size_t>(site)] == 0) {
      moves.push_back({site, state.mover});
    }
  }
  return moves;
}

GameState apply_move(const GameSpec& spec, const GameState& state, const Move& move) {
  if (move.site < 0 || move.site >= spec.site_count()) {
    throw IllegalMoveError("site " + std::to_string(move.site) + " is off the board");
  }
  if (move.player != state.mover) {
    throw IllegalMoveError("player " + std::to_string(move.player) + " is not the mover");
  }
  const auto site = static_cast<std::size_t>(move.site);
  if (state.occupancy[site] != 0) {
    throw IllegalMoveError("site " + std::to_string(move.site) + " is occupied");
  }
  GameState next = state;
  next.occupancy[site] = static_cast<std::uint8_t>(move.player);
  next.touched[site] = 1;
  next.mover = state.mover % spec.num_players + 1;
  next.move_count = state.move_count + 1;
  next.last_move = move;
  return next;
}

namespace {

bool completes_line(const GameSpec& spec, const GameState& state, const Move& last, int length) {
  const int row = last.site / spec.cols;
  const int col = last.site % spec.cols;
  const auto owned = [&](int r, int c) {
    return r >= 0 && r < spec.rows && c >= 0 && c < spec.cols &&
           state.occupancy[static_cast<std::size_t>(r * spec.cols + c)] == last.player;
  };
  static constexpr int kDirections[4][2] = {{0, 1}, {1, 0}, {1, 1}, {1, -1}};
  for (const auto& d : kDirections) {
    int run = 1;
    for (int r = row + d[0], c = col + d[1]; run < length && owned(r, c); r += d[0], c += d[1]) {
      ++run;
    }
    for (int r = row - d[0], c = col - d[1]; run < length && owned(r, c); r -= d[0], c -= d[1]) {
      ++run;
    }
    if (run >= length) return true;
  }
  return false;
}

Outcome resolve(const GameSpec& spec, const EndRule& rule, int just_moved) {
  if (rule.result == ResultKind::kDraw) return Outcome::draw();
  if (rule.result == ResultKind::kWin) return Outcome::win(just_moved);
  // Mover Loss is only compiled for two players.
  return Outcome::win(just_moved % spec.num_players + 1);
}

}  // namespace

std::optional<Outcome> terminal_result(const GameSpec& spec, const GameState& state) {
  if (state.move_count == 0 || !state.last_move) return std::nullopt;
  const Move& last = *state.last_move;
  for (const EndRule& rule : spec.end_rules) {
    bool fired = false;
    if (rule.condition == EndCondition::kLine) {
      fired = completes_line(spec, state, last, rule.line_length);
    } else {
      fired = std::find(state.occupancy.begin(), state.occupancy.end(), std::uint8_t{0}) ==
              state.occupancy.end();
    }
    if (fired) return resolve(spec, rule, last.player);
  }
  return std::nullopt;
}

PlayoutTrace random_playout(const GameSpec& spec, std::uint64_t seed, int max_turns) {
  if (max_turns < 1) throw std::invalid_argument("max_turns must be >= 1");
  SplitMix64 rng(seed);
  PlayoutTrace trace;
  trace.seed = seed;
  trace.outcome = Outcome::timeout();

  GameState state = initial_state(spec);
  while (state.move_count < max_turns) {
    const std::vector<Move> moves = legal_moves(spec, state);
    if (moves.empty()) {
      trace.stalemate = true;
      break;
    }
    trace.decision_points.push_back(static_cast<int>(moves.size()));
    const Move& chosen = moves[rng.bounded(moves.size())];
    trace.moves.push_back(chosen);
    state = apply_move(spec, state, chosen);
    if (auto outcome = terminal_result(spec, state)) {
      trace.outcome = *outcome;
      break;
    }
  }
  trace.final_touched = state.touched_count();
  return trace;
}

const char* to_string(NonFunctionalReason reason) {
  switch (reason) {
    case NonFunctionalReason::kNone: return "none";
    case NonFunctionalReason::kNoInitialMoves: return "no-initial-moves";
    case NonFunctionalReason::kStalemateWithoutEnd: return "stalemate-without-end";
    case NonFunctionalReason::kNeverTerminates: return "never-terminates";
  }
  return "?";
}

FunctionalityResult check_functionality(const GameSpec& spec,
                                        std::span<const std::uint64_t> probe_seeds,
                                        int max_turns) {
  if (legal_moves(spec, initial_state(spec)).empty()) {
    return {false, NonFunctionalReason::kNoInitialMoves};
  }
  bool any_terminal = false;
  for (std::uint64_t seed : probe_seeds) {
    const PlayoutTrace trace = random_playout(spec, seed, max_turns);
    if (trace.stalemate) return {false, NonFunctionalReason::kStalemateWithoutEnd};
    any_terminal = any_terminal || trace.outcome.kind != Outcome::Kind::kTimeout;
  }
  if (!any_terminal) return {false, NonFunctionalReason::kNeverTerminates};
  return {true, NonFunctionalReason::kNone};
}

FunctionalityResult check_functionality(const GameSpec& spec, int probe_count, int max_turns) {
  std::vector<std::uint64_t> seeds(static_cast<std::size_t>(std::max(probe_count, 0)));
  std::iota(seeds.begin(), seeds.end(), std::uint64_t{0});
  return check_functionality(spec, seeds, max_turns);
}

}  // namespace ludilite
