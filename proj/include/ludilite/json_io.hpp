#pragma once

#include "json.hpp"
#include "ludilite/concepts.hpp"
#include "ludilite/engine.hpp"
#include "ludilite/grammar.hpp"
#include "ludilite/metrics.hpp"
#include "ludilite/rewards.hpp"

// JSON shapes shared by the CLI report files and the HTTP service. Field
// names are part of the public contract; see README.md.
namespace ludilite {

nlohmann::json to_json(const ConceptVector& concepts);
nlohmann::json to_json(const RewardConfig& cfg);
nlohmann::json to_json(const RewardBreakdown& breakdown);
nlohmann::json to_json(const ValidPrefixResult& prefix);
nlohmann::json to_json(const PlayoutTrace& trace);
nlohmann::json to_json(const MeanStderr& value);
nlohmann::json to_json(const MetricSummary& summary);
nlohmann::json to_json(const EvalReport& report);

// Applies the fields present in `overrides` on top of `base` and validates
// the result. Unknown fields and wrong types throw ConfigError.
RewardConfig apply_overrides(const RewardConfig& base, const nlohmann::json& overrides);

}  // namespace ludilite
