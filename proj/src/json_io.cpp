#include "ludilite/json_io.hpp"

#include <cstdint>
#include <limits>

namespace ludilite {

using nlohmann::json;

namespace {

json optional_number(const std::optional<double>& value) {
  return value ? json(*value) : json(nullptr);
}

}  // namespace

json to_json(const ConceptVector& c) {
  return {
      {"decision_moves", c.decision_moves},
      {"board_coverage_used", c.board_coverage_used},
      {"timeout", c.timeout},
      {"balance", optional_number(c.balance)},
      {"completion", optional_number(c.completion)},
      {"extended", c.extended},
  };
}

json to_json(const RewardConfig& cfg) {
  return {
      {"sigma", cfg.sigma},
      {"weight_per_item", cfg.weight_per_item},
      {"lambda_c", cfg.lambda_c},
      {"floor_reward", cfg.floor_reward},
      {"playouts_gt", cfg.playouts_gt},
      {"playouts_pred", cfg.playouts_pred},
      {"max_turns", cfg.max_turns},
      {"budget_secs", cfg.budget_secs},
      {"probe_seeds", cfg.probe_seeds},
      {"seed", cfg.seed},
  };
}

json to_json(const RewardBreakdown& b) {
  return {
      {"r_g", b.r_g},
      {"r_c", b.r_c},
      {"r", b.r},
      {"consumed_chars", b.consumed_chars},
      {"total_chars", b.total_chars},
      {"compilable", b.compilable},
      {"functional", b.functional},
      {"concepts", b.concepts ? to_json(*b.concepts) : json(nullptr)},
      {"failure_reason", to_string(b.failure)},
      {"non_functional_reason", to_string(b.non_functional)},
      {"detail", b.detail},
      {"player_count_mismatch", b.player_count_mismatch},
  };
}

json to_json(const ValidPrefixResult& prefix) {
  json out = {
      {"consumed_chars", prefix.consumed_chars},
      {"total_chars", prefix.total_chars},
      {"accepted", prefix.accepted},
      {"failure", nullptr},
  };
  if (prefix.failure) {
    out["failure"] = {{"token", prefix.failure->token}, {"offset", prefix.failure->offset}};
  }
  return out;
}

json to_json(const PlayoutTrace& trace) {
  json moves = json::array();
  for (const Move& m : trace.moves) moves.push_back({m.site, m.player});
  return {
      {"seed", trace.seed},
      {"outcome", to_string(trace.outcome)},
      {"stalemate", trace.stalemate},
      {"moves", std::move(moves)},
      {"decision_points", trace.decision_points},
      {"final_touched", trace.final_touched},
  };
}

json to_json(const MeanStderr& value) {
  return {{"mean", value.mean}, {"stderr", value.standard_error}};
}

json to_json(const MetricSummary& s) {
  return {
      {"compilability", to_json(s.compilability)},
      {"functionality", to_json(s.functionality)},
      {"rouge_l", to_json(s.rouge_l)},
      {"ncd", to_json(s.ncd)},
      {"instances", s.instances},
      {"seed_groups", s.seed_groups},
  };
}

json to_json(const EvalReport& report) {
  json categories = json::object();
  for (const auto& [name, summary] : report.by_category) categories[name] = to_json(summary);
  json rows = json::array();
  for (const InstanceRow& row : report.rows) {
    rows.push_back({
        {"id", row.id},
        {"seed", row.seed},
        {"category", row.category ? json(*row.category) : json(nullptr)},
        {"predicted", row.predicted},
        {"compilable", row.compilable},
        {"functional", row.functional},
        {"r_g", row.r_g},
        {"rouge_l", row.rouge_l},
        {"ncd", row.ncd},
    });
  }
  return {
      {"config", to_json(report.config)},
      {"overall", to_json(report.overall)},
      {"categories", std::move(categories)},
      {"largest_category",
       report.largest_category ? json(*report.largest_category) : json(nullptr)},
      {"category_distances", report.category_distances},
      {"rows", std::move(rows)},
  };
}

namespace {

double read_double(const json& value, const std::string& field) {
  if (!value.is_number()) throw ConfigError("config field '" + field + "' must be a number");
  return value.get<double>();
}

int read_int(const json& value, const std::string& field) {
  if (!value.is_number_integer()) {
    throw ConfigError("config field '" + field + "' must be an integer");
  }
  const auto v = value.get<long long>();
  if (v < std::numeric_limits<int>::min() || v > std::numeric_limits<int>::max()) {
    throw ConfigError("config field '" + field + "' is out of range");
  }
  return static_cast<int>(v);
}

}  // namespace

RewardConfig apply_overrides(const RewardConfig& base, const json& overrides) {
  RewardConfig cfg = base;
  if (overrides.is_null()) {
    cfg.validate();
    return cfg;
  }
  if (!overrides.is_object()) throw ConfigError("config overrides must be an object");
  for (const auto& [key, value] : overrides.items()) {
    if (key == "sigma") cfg.sigma = read_double(value, key);
    else if (key == "weight_per_item") cfg.weight_per_item = read_double(value, key);
    else if (key == "lambda_c") cfg.lambda_c = read_double(value, key);
    else if (key == "floor_reward") cfg.floor_reward = read_double(value, key);
    else if (key == "playouts_gt") cfg.playouts_gt = read_int(value, key);
    else if (key == "playouts_pred") cfg.playouts_pred = read_int(value, key);
    else if (key == "max_turns") cfg.max_turns = read_int(value, key);
    else if (key == "budget_secs") cfg.budget_secs = read_double(value, key);
    else if (key == "probe_seeds") cfg.probe_seeds = read_int(value, key);
    else if (key == "seed") {
      if (!value.is_number_integer() || (!value.is_number_unsigned() && value.get<std::int64_t>() < 0)) {
        throw ConfigError("config field 'seed' must be a non-negative integer");
      }
      cfg.seed = value.get<std::uint64_t>();
    } else {
      throw ConfigError("unknown config field '" + key + "'");
    }
  }
  cfg.validate();
  return cfg;
}

}  // namespace ludilite
