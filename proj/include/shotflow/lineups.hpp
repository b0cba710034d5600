#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "shotflow/ingest.hpp"
#include "shotflow/strategies.hpp"

namespace shotflow {

// Five distinct player ids in ascending order.
struct Lineup {
  std::vector<std::string> players;
};

struct BestLineup {
  Lineup lineup;
  double payoff = 0.0;
};

struct GroupSummary {
  GroupCriterion::Kind group = GroupCriterion::Kind::roster;
  long lineup_count = 0;
  long infeasible_lineups = 0;  // lineups the optimal solver rejected outright
  std::map<Strategy, long> per_strategy_feasible_count;
  std::map<Strategy, double> per_strategy_mean_payoff;  // over feasible lineups
  BestLineup best_lineup;
  std::map<Strategy, double> relative_gains;  // (optimal_mean - mean) / mean
};

// All C(n, k) combinations in lexicographic order, each lineup ascending.
inline std::vector<Lineup> enumerate_lineups(const std::set<std::string>& player_ids,
                                             int k = kLineupSize) {
  const int n = static_cast<int>(player_ids.size());
  if (k < 1) throw DomainError("lineup size must be >= 1");
  if (n < k)
    throw TooFewPlayers("need at least " + std::to_string(k) + " players, have " +
                        std::to_string(n));

  std::vector<std::string> ids(player_ids.begin(), player_ids.end());
  std::vector<int> pick(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) pick[static_cast<std::size_t>(i)] = i;

  std::vector<Lineup> out;
  while (true) {
    Lineup lu;
    lu.players.reserve(static_cast<std::size_t>(k));
    for (int i : pick) lu.players.push_back(ids[static_cast<std::size_t>(i)]);
    out.push_back(std::move(lu));

    int j = k - 1;
    while (j >= 0 && pick[static_cast<std::size_t>(j)] == n - k + j) --j;
    if (j < 0) break;
    ++pick[static_cast<std::size_t>(j)];
    for (int i = j + 1; i < k; ++i)
      pick[static_cast<std::size_t>(i)] = pick[static_cast<std::size_t>(i - 1)] + 1;
  }
  return out;
}

namespace detail {

// Order-stable summation so parallel partitions would reduce identically.
inline double pairwise_sum(const std::vector<double>& v, std::size_t lo,
                           std::size_t hi) {
  if (hi - lo <= 8) {
    double s = 0.0;
    for (std::size_t i = lo; i < hi; ++i) s += v[i];
    return s;
  }
  const std::size_t mid = lo + (hi - lo) / 2;
  return pairwise_sum(v, lo, mid) + pairwise_sum(v, mid, hi);
}

inline double pairwise_mean(const std::vector<double>& v) {
  if (v.empty()) return 0.0;
  return pairwise_sum(v, 0, v.size()) / static_cast<double>(v.size());
}

}  // namespace detail

// Runs the full strategy comparison on every five-player combination of the
// group. Means are taken per strategy over the lineups where that strategy's
// report is feasible; lineups the solver rejects are counted, not averaged.
inline GroupSummary evaluate_group(
    const std::map<std::string, ShootingProfile>& profiles,
    const std::set<std::string>& group, GroupCriterion::Kind kind,
    double cap = kDefaultShotCap) {
  for (const auto& id : group)
    if (!profiles.contains(id)) throw MissingProfile(id);

  const auto lineups = enumerate_lineups(group, kLineupSize);

  GroupSummary summary;
  summary.group = kind;
  summary.lineup_count = static_cast<long>(lineups.size());

  std::map<Strategy, std::vector<double>> payoffs;
  std::optional<BestLineup> best;

  for (const auto& lu : lineups) {
    LineupProfiles lp;
    for (int i = 0; i < kLineupSize; ++i)
      lp[static_cast<std::size_t>(i)] = profiles.at(lu.players[static_cast<std::size_t>(i)]);

    CompareResult cmp;
    try {
      cmp = compare_strategies(lp, cap);
    } catch (const InfeasibleLineup&) {
      ++summary.infeasible_lineups;
      continue;
    }
    for (const auto& report : cmp.reports) {
      if (report.strategy == Strategy::optimal &&
          (!best || report.payoff > best->payoff))
        best = BestLineup{lu, report.payoff};
      if (report.feasible) payoffs[report.strategy].push_back(report.payoff);
    }
  }

  for (Strategy s : kAllStrategies) {
    const auto it = payoffs.find(s);
    const long count = it == payoffs.end() ? 0 : static_cast<long>(it->second.size());
    summary.per_strategy_feasible_count[s] = count;
    if (count > 0)
      summary.per_strategy_mean_payoff[s] = detail::pairwise_mean(it->second);
  }
  if (best) summary.best_lineup = *best;

  const auto opt_it = summary.per_strategy_mean_payoff.find(Strategy::optimal);
  if (opt_it != summary.per_strategy_mean_payoff.end()) {
    for (const auto& [s, mean] : summary.per_strategy_mean_payoff) {
      if (s == Strategy::optimal || mean <= detail::kTieTol) continue;
      summary.relative_gains[s] = (opt_it->second - mean) / mean;
    }
  }
  return summary;
}

}  // namespace shotflow
