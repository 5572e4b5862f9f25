#pragma once

#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "ludilite/concepts.hpp"
#include "ludilite/dataset.hpp"
#include "ludilite/grammar.hpp"
#include "ludilite/rewards.hpp"

namespace ludilite {

// Whitespace split after padding ( ) { } with spaces.
std::vector<std::string> rouge_tokens(std::string_view text);

double rouge_l_f1(std::span<const std::string> candidate, std::span<const std::string> reference);

// (1 - cos) / 2 between two equally long vectors; 1 if either has zero norm.
double cosine_distance(std::span<const double> a, std::span<const double> b);

// Cosine distance over the concepts defined for both vectors followed by the
// extended features.
double concept_distance(const ConceptVector& a, const ConceptVector& b);

// Normalized concept distance; 1 for non-functional or uncomputable games.
double ncd(const PredictedConcepts& pred, const ConceptVector& gt);

struct MeanStderr {
  double mean = 0.0;
  double standard_error = 0.0;
};

// Mean of per-group means; standard error is the sample standard deviation of
// the group means over sqrt(group count), 0 for a single group.
MeanStderr mean_stderr(const std::vector<std::vector<double>>& groups);

struct InstanceRow {
  std::string id;
  std::string seed;
  std::optional<std::string> category;
  bool predicted = false;  // false when the prediction file had no entry
  bool compilable = false;
  bool functional = false;
  double r_g = 0.0;
  double rouge_l = 0.0;  // 0..1
  double ncd = 1.0;
};

struct MetricSummary {
  MeanStderr compilability;  // 0..100
  MeanStderr functionality;  // 0..100
  MeanStderr rouge_l;        // 0..100
  MeanStderr ncd;            // 0..1
  int instances = 0;
  int seed_groups = 0;
};

struct EvalReport {
  RewardConfig config;
  MetricSummary overall;
  std::map<std::string, MetricSummary> by_category;
  // Mean ground-truth concept distance from the largest category to each one.
  std::optional<std::string> largest_category;
  std::map<std::string, double> category_distances;
  std::vector<InstanceRow> rows;  // sorted by id, then seed
};

class EvalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

EvalReport evaluate_corpus(std::span<const Instance> instances,
                           std::span<const Prediction> predictions, const Grammar& grammar,
                           const RewardConfig& cfg);

// Mean concept distance over pairs (a, b); pairs with the same id are skipped.
double category_concept_distance(std::span<const Instance> a, std::span<const Instance> b,
                                 const RewardConfig& cfg);

}  // namespace ludilite
