#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "ludilite/concepts.hpp"
#include "ludilite/engine.hpp"
#include "ludilite/grammar.hpp"

namespace ludilite {

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct RewardConfig {
  double sigma = 0.3;
  double weight_per_item = 0.18;
  double lambda_c = 1.0;
  double floor_reward = 0.1;
  int playouts_gt = 50;
  int playouts_pred = 10;
  int max_turns = kDefaultMaxTurns;
  double budget_secs = kDefaultBudgetSecs;
  int probe_seeds = kDefaultProbeCount;
  // Salt mixed into every content-derived playout seed.
  std::uint64_t seed = 0;

  // Throws ConfigError naming the offending field.
  void validate() const;
  friend bool operator==(const RewardConfig&, const RewardConfig&) = default;
};

// 1 - exp(-((c_hat - c) / sigma)^2 / 2)
double gaussian_penalty(double c_hat, double c, double sigma);

// 1 - sum(weight * p_i), clamped to [0, 1].
double concept_reward_from_penalties(std::span<const double> penalties, double weight);

// What the concept pipeline produced for a predicted game.
struct PredictedConcepts {
  enum class Status { kNonFunctional, kUncomputable, kComputed };
  Status status = Status::kNonFunctional;
  std::optional<ConceptVector> concepts;

  static PredictedConcepts non_functional() { return {Status::kNonFunctional, std::nullopt}; }
  static PredictedConcepts uncomputable() { return {Status::kUncomputable, std::nullopt}; }
  static PredictedConcepts computed(ConceptVector v) { return {Status::kComputed, std::move(v)}; }
};

// Items compared are those defined for both vectors (3 or 5).
double concept_reward(const PredictedConcepts& pred, const ConceptVector& gt,
                      const RewardConfig& cfg);

double combined_reward(double r_g, double r_c, double lambda_c);

// GRPO group normalization: (r_i - mean) / population std, all zeros when the
// group has a single member or no spread.
std::vector<double> group_advantages(std::span<const double> rewards);

enum class FailureReason { kNone, kCompileError, kNonFunctional, kConceptTimeout };

const char* to_string(FailureReason reason);

struct RewardBreakdown {
  double r_g = 0.0;
  double r_c = 0.0;
  double r = 0.0;
  std::size_t consumed_chars = 0;
  std::size_t total_chars = 0;
  bool compilable = false;
  bool functional = false;
  std::optional<ConceptVector> concepts;
  FailureReason failure = FailureReason::kNone;
  NonFunctionalReason non_functional = NonFunctionalReason::kNone;
  std::string detail;  // compile diagnostics, empty otherwise
  bool player_count_mismatch = false;

  friend bool operator==(const RewardBreakdown&, const RewardBreakdown&) = default;
};

class ReferenceError : public std::runtime_error {
 public:
  enum class Code { kNotCompilable, kNotFunctional, kUncomputable };
  ReferenceError(Code code, const std::string& message)
      : std::runtime_error(message), code_(code) {}
  Code code() const { return code_; }

 private:
  Code code_;
};

const char* to_string(ReferenceError::Code code);

struct ReferenceConcepts {
  GameSpec spec;
  ConceptVector concepts;
  std::uint64_t base_seed = 0;
  int completed_playouts = 0;
};

// Ground-truth concepts from cfg.playouts_gt playouts; throws ReferenceError.
ReferenceConcepts compute_reference(std::string_view gt_text, const RewardConfig& cfg);

// Concepts of a predicted game, gated on compilation and functionality.
struct CandidateAnalysis {
  bool compilable = false;
  std::optional<GameSpec> spec;
  std::string compile_detail;
  FunctionalityResult functionality;
  PredictedConcepts concepts;
};

CandidateAnalysis analyze_candidate(std::string_view text, const RewardConfig& cfg);

RewardBreakdown score_candidate(const Grammar& grammar, std::string_view candidate,
                                const ReferenceConcepts& reference, const RewardConfig& cfg);

struct ScoreResult {
  ReferenceConcepts reference;
  std::vector<RewardBreakdown> breakdowns;
  std::vector<double> advantages;
};

ScoreResult score_candidates(const ReferenceConcepts& reference,
                             std::span<const std::string> candidates, const Grammar& grammar,
                             const RewardConfig& cfg);

ScoreResult score_candidates(std::string_view gt_text, std::span<const std::string> candidates,
                             const Grammar& grammar, const RewardConfig& cfg);

}  // namespace ludilite
