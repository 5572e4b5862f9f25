#include "ludilite/concepts.hpp"

#include <chrono>
#include <cmath>
#include <numeric>

namespace ludilite {

int PlayoutStats::total_wins() const {
  return std::accumulate(wins_per_player.begin(), wins_per_player.end(), 0);
}

PlayoutStats run_playouts(const GameSpec& spec, int n, std::uint64_t base_seed, int max_turns,
                          double budget_secs) {
  using Clock = std::chrono::steady_clock;
  const auto start = Clock::now();
  const auto elapsed = [&] { return std::chrono::duration<double>(Clock::now() - start).count(); };

  PlayoutStats stats;
  stats.requested_playouts = n;
  stats.max_turns = max_turns;
  stats.wins_per_player.assign(static_cast<std::size_t>(spec.num_players), 0);
  stats.traces.reserve(static_cast<std::size_t>(std::max(n, 0)));

  for (int i = 0; i < n; ++i) {
    if (elapsed() >= budget_secs) {
      stats.budget_exceeded = true;
      break;
    }
    PlayoutTrace trace = random_playout(spec, base_seed + static_cast<std::uint64_t>(i), max_turns);
    switch (trace.outcome.kind) {
      case Outcome::Kind::kWin: ++stats.wins_per_player[trace.outcome.winner - 1]; break;
      case Outcome::Kind::kDraw: ++stats.draws; break;
      case Outcome::Kind::kTimeout: ++stats.timeouts; break;
    }
    stats.traces.push_back(std::move(trace));
    ++stats.completed_playouts;
  }
  stats.elapsed_secs = elapsed();
  return stats;
}

std::vector<double> ConceptVector::items() const {
  std::vector<double> out{decision_moves, board_coverage_used, timeout};
  if (balance) out.push_back(*balance);
  if (completion) out.push_back(*completion);
  return out;
}

std::vector<double> ConceptVector::flatten() const {
  std::vector<double> out = items();
  out.insert(out.end(), extended.begin(), extended.end());
  return out;
}

ConceptVector extract_concepts(const PlayoutStats& stats, const GameSpec& spec) {
  if (stats.completed_playouts == 0) {
    throw ConceptError("concept values cannot be computed: no playout completed");
  }
  const double completed = stats.completed_playouts;
  const double sites = spec.site_count();

  double decision_sum = 0.0;
  double coverage_sum = 0.0;
  double length_sum = 0.0;
  double branching_sum = 0.0;
  for (const PlayoutTrace& trace : stats.traces) {
    if (!trace.decision_points.empty()) {
      int multi = 0;
      long long legal = 0;
      for (int count : trace.decision_points) {
        multi += count >= 2 ? 1 : 0;
        legal += count;
      }
      const double turns = static_cast<double>(trace.decision_points.size());
      decision_sum += multi / turns;
      branching_sum += static_cast<double>(legal) / turns;
    }
    coverage_sum += trace.final_touched / sites;
    length_sum += static_cast<double>(trace.moves.size());
  }

  ConceptVector concepts;
  concepts.decision_moves = decision_sum / completed;
  concepts.board_coverage_used = coverage_sum / completed;
  concepts.timeout = stats.timeouts / completed;

  if (spec.num_players >= 2) {
    std::vector<double> rates;
    rates.reserve(stats.wins_per_player.size());
    for (int wins : stats.wins_per_player) rates.push_back(wins / completed);
    double diff_sum = 0.0;
    int pairs = 0;
    for (std::size_t a = 0; a < rates.size(); ++a) {
      for (std::size_t b = a + 1; b < rates.size(); ++b) {
        diff_sum += std::abs(rates[a] - rates[b]);
        ++pairs;
      }
    }
    concepts.balance = 1.0 - diff_sum / pairs;
    concepts.completion = stats.total_wins() / completed;
  }

  concepts.extended = {
      std::min(1.0, length_sum / completed / stats.max_turns),
      std::min(1.0, branching_sum / completed / sites),
  };
  return concepts;
}

}  // namespace ludilite
