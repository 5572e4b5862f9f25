#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "ludilite/lexer.hpp"

namespace ludilite {

// ---------------------------------------------------------------------------
// Compiled game description

enum class Ownership { kEach, kShared };
enum class EndCondition { kLine, kFull };
enum class Role { kMover, kAll };
enum class ResultKind { kWin, kLoss, kDraw };

struct PieceSpec {
  std::string name;
  Ownership ownership = Ownership::kEach;
  friend bool operator==(const PieceSpec&, const PieceSpec&) = default;
};

struct EndRule {
  EndCondition condition = EndCondition::kFull;
  int line_length = 0;  // only meaningful for kLine
  Role role = Role::kMover;
  ResultKind result = ResultKind::kWin;
  friend bool operator==(const EndRule&, const EndRule&) = default;
};

// The only move rule LudiLite knows: the mover adds a piece to an empty site.
enum class MoveRule { kAddToEmpty };

struct GameSpec {
  std::string name;
  int num_players = 0;
  int rows = 0;
  int cols = 0;
  std::vector<PieceSpec> pieces;
  MoveRule move_rule = MoveRule::kAddToEmpty;
  std::vector<EndRule> end_rules;

  int site_count() const { return rows * cols; }
  friend bool operator==(const GameSpec&, const GameSpec&) = default;
};

inline constexpr int kMaxPlayers = 64;
inline constexpr int kMaxSites = 1 << 16;

struct CompileError {
  enum class Kind { kLex, kStructural, kSemantic };
  Kind kind = Kind::kStructural;
  std::size_t offset = 0;
  std::string message;

  std::string describe() const;
};

const char* to_string(CompileError::Kind kind);

class CompileResult {
 public:
  CompileResult(GameSpec spec) : spec_(std::move(spec)) {}
  CompileResult(CompileError error) : error_(std::move(error)) {}

  bool ok() const { return spec_.has_value(); }
  explicit operator bool() const { return ok(); }
  const GameSpec& spec() const { return spec_.value(); }
  const CompileError& error() const { return error_.value(); }

 private:
  std::optional<GameSpec> spec_;
  std::optional<CompileError> error_;
};

CompileResult compile(std::string_view text);

// ---------------------------------------------------------------------------
// Game state and rules

struct Move {
  int site = 0;    // row-major index
  int player = 0;  // 1-based
  friend bool operator==(const Move&, const Move&) = default;
};

struct GameState {
  std::vector<std::uint8_t> occupancy;  // 0 = empty, otherwise owning player
  std::vector<std::uint8_t> touched;    // 1 if a piece was ever placed there
  int mover = 1;
  int move_count = 0;
  std::optional<Move> last_move;

  int touched_count() const;
  friend bool operator==(const GameState&, const GameState&) = default;
};

struct Outcome {
  enum class Kind { kWin, kDraw, kTimeout };
  Kind kind = Kind::kTimeout;
  int winner = 0;  // set for kWin only

  static Outcome win(int player) { return {Kind::kWin, player}; }
  static Outcome draw() { return {Kind::kDraw, 0}; }
  static Outcome timeout() { return {Kind::kTimeout, 0}; }
  friend bool operator==(const Outcome&, const Outcome&) = default;
};

std::string to_string(const Outcome& outcome);

class IllegalMoveError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

GameState initial_state(const GameSpec& spec);
std::vector<Move> legal_moves(const GameSpec& spec, const GameState& state);
GameState apply_move(const GameSpec& spec, const GameState& state, const Move& move);
std::optional<Outcome> terminal_result(const GameSpec& spec, const GameState& state);

// ---------------------------------------------------------------------------
// Playouts

inline constexpr int kDefaultMaxTurns = 250;

struct PlayoutTrace {
  std::vector<Move> moves;
  std::vector<int> decision_points;  // legal-move count before each move
  Outcome outcome;
  bool stalemate = false;  // stopped because the mover had no legal move
  int final_touched = 0;
  std::uint64_t seed = 0;

  friend bool operator==(const PlayoutTrace&, const PlayoutTrace&) = default;
};

// Uniform random policy driven by SplitMix64(seed). Stalemates and the turn
// cap both end the trace with a Timeout outcome.
PlayoutTrace random_playout(const GameSpec& spec, std::uint64_t seed,
                            int max_turns = kDefaultMaxTurns);

enum class NonFunctionalReason { kNone, kNoInitialMoves, kStalemateWithoutEnd, kNeverTerminates };

const char* to_string(NonFunctionalReason reason);

struct FunctionalityResult {
  bool functional = false;
  NonFunctionalReason reason = NonFunctionalReason::kNone;
};

inline constexpr int kDefaultProbeCount = 10;

FunctionalityResult check_functionality(const GameSpec& spec,
                                        std::span<const std::uint64_t> probe_seeds,
                                        int max_turns = kDefaultMaxTurns);

// Probes with seeds 0 .. probe_count-1.
FunctionalityResult check_functionality(const GameSpec& spec, int probe_count = kDefaultProbeCount,
                                        int max_turns = kDefaultMaxTurns);

}  // namespace ludilite
