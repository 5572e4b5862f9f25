#include "ludilite/rewards.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "ludilite/rng.hpp"

namespace ludilite {

void RewardConfig::validate() const {
  const auto require = [](bool ok, const char* message) {
    if (!ok) throw ConfigError(message);
  };
  require(std::isfinite(sigma) && sigma > 0.0, "sigma must be > 0");
  require(std::isfinite(weight_per_item) && weight_per_item >= 0.0,
          "weight_per_item must be >= 0");
  require(std::isfinite(lambda_c) && lambda_c >= 0.0, "lambda_c must be >= 0");
  require(std::isfinite(floor_reward) && floor_reward >= 0.0 && floor_reward <= 1.0,
          "floor_reward must be in [0, 1]");
  require(playouts_gt >= 1, "playouts_gt must be >= 1");
  require(playouts_pred >= 1, "playouts_pred must be >= 1");
  require(max_turns >= 1, "max_turns must be >= 1");
  require(std::isfinite(budget_secs) && budget_secs >= 0.0, "budget_secs must be >= 0");
  require(probe_seeds >= 1, "probe_seeds must be >= 1");
}

double gaussian_penalty(double c_hat, double c, double sigma) {
  const double z = (c_hat - c) / sigma;
  return 1.0 - std::exp(-0.5 * z * z);
}

double concept_reward_from_penalties(std::span<const double> penalties, double weight) {
  double weighted = 0.0;
  for (double p : penalties) weighted += weight * p;
  return std::clamp(1.0 - weighted, 0.0, 1.0);
}

double concept_reward(const PredictedConcepts& pred, const ConceptVector& gt,
                      const RewardConfig& cfg) {
  switch (pred.status) {
    case PredictedConcepts::Status::kNonFunctional: return 0.0;
    case PredictedConcepts::Status::kUncomputable: return cfg.floor_reward;
    case PredictedConcepts::Status::kComputed: break;
  }
  const std::vector<double> predicted = pred.concepts.value().items();
  const std::vector<double> truth = gt.items();
  const std::size_t shared = std::min(predicted.size(), truth.size());
  std::vector<double> penalties(shared);
  for (std::size_t i = 0; i < shared; ++i) {
    penalties[i] = gaussian_penalty(predicted[i], truth[i], cfg.sigma);
  }
  return concept_reward_from_penalties(penalties, cfg.weight_per_item);
}

double combined_reward(double r_g, double r_c, double lambda_c) { return r_g + lambda_c * r_c; }

std::vector<double> group_advantages(std::span<const double> rewards) {
  std::vector<double> advantages(rewards.size(), 0.0);
  if (rewards.size() < 2) return advantages;
  const auto [lo, hi] = std::minmax_element(rewards.begin(), rewards.end());
  if (*lo == *hi) return advantages;

  const double n = static_cast<double>(rewards.size());
  const double mean = std::accumulate(rewards.begin(), rewards.end(), 0.0) / n;
  double residual = 0.0;
  for (std::size_t i = 0; i < rewards.size(); ++i) {
    advantages[i] = rewards[i] - mean;
    residual += advantages[i];
  }
  // Re-center so rounding in `mean` does not leak into the sum.
  residual /= n;
  double sq = 0.0;
  for (double& a : advantages) {
    a -= residual;
    sq += a * a;
  }
  const double stddev = std::sqrt(sq / n);
  for (double& a : advantages) a /= stddev;
  return advantages;
}

const char* to_string(FailureReason reason) {
  switch (reason) {
    case FailureReason::kNone: return "none";
    case FailureReason::kCompileError: return "compile-error";
    case FailureReason::kNonFunctional: return "non-functional";
    case FailureReason::kConceptTimeout: return "concept-timeout";
  }
  return "?";
}

const char* to_string(ReferenceError::Code code) {
  switch (code) {
    case ReferenceError::Code::kNotCompilable: return "reference-not-compilable";
    case ReferenceError::Code::kNotFunctional: return "reference-not-functional";
    case ReferenceError::Code::kUncomputable: return "reference-uncomputable";
  }
  return "?";
}

ReferenceConcepts compute_reference(std::string_view gt_text, const RewardConfig& cfg) {
  cfg.validate();
  CompileResult compiled = compile(gt_text);
  if (!compiled) {
    throw ReferenceError(ReferenceError::Code::kNotCompilable,
                         "reference does not compile: " + compiled.error().describe());
  }
  const GameSpec& spec = compiled.spec();
  const FunctionalityResult functionality =
      check_functionality(spec, cfg.probe_seeds, cfg.max_turns);
  if (!functionality.functional) {
    throw ReferenceError(ReferenceError::Code::kNotFunctional,
                         std::string("reference is not functional: ") +
                             to_string(functionality.reason));
  }
  ReferenceConcepts reference;
  reference.spec = spec;
  reference.base_seed = content_seed(gt_text, cfg.seed);
  const PlayoutStats stats =
      run_playouts(spec, cfg.playouts_gt, reference.base_seed, cfg.max_turns, cfg.budget_secs);
  if (stats.completed_playouts == 0) {
    throw ReferenceError(ReferenceError::Code::kUncomputable,
                         "reference concepts could not be computed within the budget");
  }
  reference.completed_playouts = stats.completed_playouts;
  reference.concepts = extract_concepts(stats, spec);
  return reference;
}

CandidateAnalysis analyze_candidate(std::string_view text, const RewardConfig& cfg) {
  CandidateAnalysis analysis;
  CompileResult compiled = compile(text);
  if (!compiled) {
    analysis.compile_detail = compiled.error().describe();
    analysis.functionality = {false, NonFunctionalReason::kNone};
    analysis.concepts = PredictedConcepts::non_functional();
    return analysis;
  }
  analysis.compilable = true;
  analysis.spec = compiled.spec();
  analysis.functionality = check_functionality(*analysis.spec, cfg.probe_seeds, cfg.max_turns);
  if (!analysis.functionality.functional) {
    analysis.concepts = PredictedConcepts::non_functional();
    return analysis;
  }
  const PlayoutStats stats = run_playouts(*analysis.spec, cfg.playouts_pred,
                                          content_seed(text, cfg.seed), cfg.max_turns,
                                          cfg.budget_secs);
  analysis.concepts = stats.completed_playouts == 0
                          ? PredictedConcepts::uncomputable()
                          : PredictedConcepts::computed(extract_concepts(stats, *analysis.spec));
  return analysis;
}

RewardBreakdown score_candidate(const Grammar& grammar, std::string_view candidate,
                                const ReferenceConcepts& reference, const RewardConfig& cfg) {
  RewardBreakdown out;
  const ValidPrefixResult prefix = recognize(grammar, candidate);
  out.consumed_chars = prefix.consumed_chars;
  out.total_chars = prefix.total_chars;
  out.r_g = prefix.total_chars == 0 ? 0.0
                                    : static_cast<double>(prefix.consumed_chars) /
                                          static_cast<double>(prefix.total_chars);

  CandidateAnalysis analysis = analyze_candidate(candidate, cfg);
  out.compilable = analysis.compilable;
  out.functional = analysis.functionality.functional;
  out.non_functional = analysis.functionality.reason;
  out.detail = std::move(analysis.compile_detail);
  if (!out.compilable) {
    out.failure = FailureReason::kCompileError;
  } else if (!out.functional) {
    out.failure = FailureReason::kNonFunctional;
  } else if (analysis.concepts.status == PredictedConcepts::Status::kUncomputable) {
    out.failure = FailureReason::kConceptTimeout;
  }
  if (analysis.concepts.concepts) {
    out.player_count_mismatch =
        analysis.concepts.concepts->item_count() != reference.concepts.item_count();
  }
  out.r_c = concept_reward(analysis.concepts, reference.concepts, cfg);
  out.concepts = std::move(analysis.concepts.concepts);
  out.r = combined_reward(out.r_g, out.r_c, cfg.lambda_c);
  return out;
}

ScoreResult score_candidates(const ReferenceConcepts& reference,
                             std::span<const std::string> candidates, const Grammar& grammar,
                             const RewardConfig& cfg) {
  cfg.validate();
  ScoreResult result;
  result.reference = reference;
  std::vector<double> rewards;
  rewards.reserve(candidates.size());
  for (const std::string& candidate : candidates) {
    result.breakdowns.push_back(score_candidate(grammar, candidate, reference, cfg));
    rewards.push_back(result.breakdowns.back().r);
  }
  result.advantages = group_advantages(rewards);
  return result;
}

ScoreResult score_candidates(std::string_view gt_text, std::span<const std::string> candidates,
                             const Grammar& grammar, const RewardConfig& cfg) {
  return score_candidates(compute_reference(gt_text, cfg), candidates, grammar, cfg);
}

}  // namespace ludilite
