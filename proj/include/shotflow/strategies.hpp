#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "shotflow/allocator.hpp"
#include "shotflow/behavior.hpp"
#include "shotflow/config.hpp"
#include "shotflow/errors.hpp"

namespace shotflow {

enum class Strategy { optimal, star_feed, equal_shots, equal_utility, nash };

inline constexpr std::array<Strategy, 5> kAllStrategies = {
    Strategy::optimal, Strategy::star_feed, Strategy::equal_shots,
    Strategy::equal_utility, Strategy::nash};

inline std::string to_string(Strategy s) {
  switch (s) {
    case Strategy::optimal: return "optimal";
    case Strategy::star_feed: return "star_feed";
    case Strategy::equal_shots: return "equal_shots";
    case Strategy::equal_utility: return "equal_utility";
    case Strategy::nash: return "nash";
  }
  return "?";
}

struct StrategyReport {
  Strategy strategy = Strategy::optimal;
  Allocation allocation;
  double payoff = 0.0;
  bool feasible = false;
  std::vector<std::string> violated_constraints;
};

// Two parallel routes between the same pair of points: one with a fixed
// travel time, one whose time grows linearly with its load.
struct TwoLinkNetwork {
  int n_agents = 0;
  double constant_cost = 0.0;  // fixed link (highway)
  double linear_coeff = 0.0;   // per-agent time on the load-dependent link
};

struct PoaMetrics {
  double nash_payoff = 0.0;
  double optimal_payoff = 0.0;
  std::optional<double> ratio;  // absent when the equilibrium value is degenerate
  double difference = 0.0;
  bool degenerate_nash = false;
};

namespace detail {

inline StrategyReport make_strategy_report(const LineupProfiles& profiles,
                                           Strategy strategy, Allocation alloc,
                                           double cap) {
  StrategyReport r;
  r.strategy = strategy;
  r.allocation = alloc;
  r.violated_constraints.clear();

  const double sum = allocation_sum(alloc.x);
  if (std::fabs(sum - 1.0) > kSumTol)
    r.violated_constraints.push_back("shot_fractions_sum");
  for (int i = 0; i < kLineupSize; ++i)
    if (alloc.x[i] < 0.0 || alloc.x[i] > cap)
      r.violated_constraints.push_back("shot_cap[" + std::to_string(i) + "]");

  r.payoff = 0.0;
  for (int i = 0; i < kLineupSize; ++i) {
    const double u = utility_at(profiles[i], alloc.x[i]);
    r.payoff += u;
    if (u < -kSumTol)
      r.violated_constraints.push_back("negative_utility[" + std::to_string(i) + "]");
  }
  r.feasible = r.violated_constraints.empty();
  return r;
}

// Smallest x >= 0 with slope*x^2 + intercept*x = u, or nullopt when u is out
// of the player's reach.
inline std::optional<double> usage_for_utility(const ShootingProfile& p, double u) {
  if (u == 0.0) return 0.0;
  if (u < 0.0) return std::nullopt;
  if (p.slope == 0.0) {
    if (p.intercept <= 0.0) return std::nullopt;
    return u / p.intercept;
  }
  const double disc = p.intercept * p.intercept + 4.0 * p.slope * u;
  if (disc < 0.0) {
    if (disc > -1e-12) return -p.intercept / (2.0 * p.slope);  // utility peak
    return std::nullopt;
  }
  const double root = std::sqrt(disc);
  if (p.slope < 0.0) return 2.0 * u / (p.intercept + root);
  // slope > 0: single nonnegative root
  if (p.intercept + root <= 0.0) return std::nullopt;
  return 2.0 * u / (p.intercept + root);
}

// Largest utility reachable with usage in [0, x_max].
inline double max_utility_on(const ShootingProfile& p, double x_max) {
  if (x_max <= 0.0) return 0.0;
  double x = x_max;
  if (p.slope < 0.0) x = std::min(x, -p.intercept / (2.0 * p.slope));
  if (x < 0.0) x = 0.0;
  return utility_at(p, x);
}

}  // namespace detail

// Highest-intercept player takes the full cap; the rest is split evenly.
// Intercept ties go to the smallest player_id.
inline StrategyReport star_feed(const LineupProfiles& profiles,
                                double cap = kDefaultShotCap) {
  int star = 0;
  for (int i = 1; i < kLineupSize; ++i) {
    const bool higher = profiles[i].intercept > profiles[star].intercept;
    const bool tie = profiles[i].intercept == profiles[star].intercept &&
                     profiles[i].player_id < profiles[star].player_id;
    if (higher || tie) star = i;
  }
  Allocation alloc;
  const double rest = (1.0 - cap) / (kLineupSize - 1);
  for (int i = 0; i < kLineupSize; ++i) alloc.x[i] = i == star ? cap : rest;
  return detail::make_strategy_report(profiles, Strategy::star_feed, alloc, cap);
}

inline StrategyReport equal_shots(const LineupProfiles& profiles,
                                  double cap = kDefaultShotCap) {
  Allocation alloc;
  alloc.x.fill(1.0 / kLineupSize);
  return detail::make_strategy_report(profiles, Strategy::equal_shots, alloc, cap);
}

// Finds the common utility level u at which every player contributes exactly
// u using the least usage that achieves it, with the total usage summing to
// one. Total usage is strictly increasing in u, so bisection converges to a
// unique solution when one exists.
inline StrategyReport equal_utility(const LineupProfiles& profiles,
                                    double cap = kDefaultShotCap) {
  std::array<double, kLineupSize> ub{};
  double u_hi = std::numeric_limits<double>::infinity();
  for (int i = 0; i < kLineupSize; ++i) {
    ub[i] = effective_upper_bound(profiles[i], cap);
    u_hi = std::min(u_hi, detail::max_utility_on(profiles[i], ub[i]));
  }

  auto total_usage = [&](double u) {
    double s = 0.0;
    for (int i = 0; i < kLineupSize; ++i) {
      const auto x = detail::usage_for_utility(profiles[i], u);
      if (!x) return std::numeric_limits<double>::quiet_NaN();
      s += std::clamp(*x, 0.0, ub[i]);
    }
    return s;
  };

  constexpr double tol = 1e-10;
  if (!(u_hi > 0.0) || !(total_usage(u_hi) >= 1.0 - tol))
    throw NoEqualUtilitySolution(
        "no common utility level lets the five usable shot fractions sum to 1");

  double lo = 0.0, hi = u_hi, mid = u_hi;
  for (int iter = 0; iter < 300; ++iter) {
    mid = lo + (hi - lo) / 2.0;
    const double s = total_usage(mid);
    if (std::fabs(s - 1.0) <= tol) break;
    if (s < 1.0) lo = mid;
    else hi = mid;
  }

  Allocation alloc;
  for (int i = 0; i < kLineupSize; ++i)
    alloc.x[i] = std::clamp(*detail::usage_for_utility(profiles[i], mid), 0.0, ub[i]);
  return detail::make_strategy_report(profiles, Strategy::equal_utility, alloc, cap);
}

// Selfish allocation: every player with positive usage sees the same
// efficiency mu, clamped at zero and at the cap. Requires strictly negative
// slopes so efficiency actually degrades with load.
inline StrategyReport nash_equal_efficiency(const LineupProfiles& profiles,
                                            double cap = kDefaultShotCap) {
  for (const auto& p : profiles)
    if (p.slope >= 0.0)
      throw NashUndefined("player " + p.player_id +
                          " has non-negative slope; efficiency never equalizes");
  if (kLineupSize * cap < 1.0)
    throw DomainError("shot cap too small for the equilibrium to absorb all shots");

  std::vector<detail::ClampedResponse> terms;
  for (const auto& p : profiles) terms.push_back({p.intercept, p.slope, cap});
  const auto roots = detail::piecewise_roots(terms, {}, 1.0);

  Allocation alloc;
  if (roots.empty()) {
    // only a tolerance artifact of the 5*cap == 1 boundary
    alloc.x.fill(cap);
  } else {
    const double mu = roots.front();
    for (int i = 0; i < kLineupSize; ++i)
      alloc.x[i] = detail::response_value(terms[i], mu);
  }
  return detail::make_strategy_report(profiles, Strategy::nash, alloc, cap);
}

// Equilibrium degradation in the payoff convention: ratio optimal/nash,
// difference optimal - nash. The ratio is omitted when the equilibrium
// payoff is not positive.
inline PoaMetrics price_of_anarchy(const StrategyReport& nash,
                                   const SolveReport& optimal) {
  PoaMetrics m;
  m.nash_payoff = nash.payoff;
  m.optimal_payoff = optimal.payoff;
  m.difference = optimal.payoff - nash.payoff;
  if (nash.payoff > 0.0) m.ratio = optimal.payoff / nash.payoff;
  else m.degenerate_nash = true;
  return m;
}

// Cost convention (routing networks): ratio nash/optimal, difference
// nash - optimal; both measure how much selfish routing loses.
inline PoaMetrics poa_from_costs(double nash_cost, double optimal_cost) {
  PoaMetrics m;
  m.nash_payoff = nash_cost;
  m.optimal_payoff = optimal_cost;
  m.difference = nash_cost - optimal_cost;
  if (optimal_cost > 0.0) m.ratio = nash_cost / optimal_cost;
  else m.degenerate_nash = true;
  return m;
}

struct BraessEquilibrium {
  int sub_lane_count = 0;
  double total_cost = 0.0;
  std::vector<double> per_agent_costs;  // sub-lane agents first
};

struct BraessOptimum {
  int sub_lane_count = 0;
  double total_cost = 0.0;
};

namespace detail {

inline void check_network(const TwoLinkNetwork& net) {
  if (net.n_agents < 1) throw DomainError("network needs at least one agent");
  if (!(net.constant_cost > 0.0)) throw DomainError("constant_cost must be positive");
  if (!(net.linear_coeff > 0.0)) throw DomainError("linear_coeff must be positive");
}

inline double split_total_cost(const TwoLinkNetwork& net, int k) {
  return static_cast<double>(k) * (static_cast<double>(k) * net.linear_coeff) +
         static_cast<double>(net.n_agents - k) * net.constant_cost;
}

}  // namespace detail

// Largest split with k agents on the load-dependent link such that no single
// agent strictly gains by switching. With the cheap link weakly preferred,
// every agent piles onto it.
inline BraessEquilibrium braess_equilibrium(const TwoLinkNetwork& net) {
  detail::check_network(net);
  constexpr double eps = 1e-9;
  int chosen = 0;
  for (int k = net.n_agents; k >= 0; --k) {
    const bool sub_stays =
        k == 0 || static_cast<double>(k) * net.linear_coeff <= net.constant_cost + eps;
    const bool highway_stays =
        k == net.n_agents ||
        static_cast<double>(k + 1) * net.linear_coeff + eps >= net.constant_cost;
    if (sub_stays && highway_stays) {
      chosen = k;
      break;
    }
  }
  BraessEquilibrium eq;
  eq.sub_lane_count = chosen;
  eq.total_cost = detail::split_total_cost(net, chosen);
  eq.per_agent_costs.reserve(static_cast<std::size_t>(net.n_agents));
  for (int i = 0; i < chosen; ++i)
    eq.per_agent_costs.push_back(static_cast<double>(chosen) * net.linear_coeff);
  for (int i = chosen; i < net.n_agents; ++i)
    eq.per_agent_costs.push_back(net.constant_cost);
  return eq;
}

// Coordinated split minimizing total travel time, ties to the smaller count.
inline BraessOptimum braess_optimal(const TwoLinkNetwork& net) {
  detail::check_network(net);
  BraessOptimum best{0, detail::split_total_cost(net, 0)};
  for (int k = 1; k <= net.n_agents; ++k) {
    const double cost = detail::split_total_cost(net, k);
    if (cost < best.total_cost) best = {k, cost};
  }
  return best;
}

struct SkippedStrategy {
  Strategy strategy;
  std::string reason;
};

struct CompareResult {
  std::vector<StrategyReport> reports;  // payoff descending, name-tie ascending
  std::vector<SkippedStrategy> skipped;
  std::optional<PoaMetrics> poa;  // present when nash was computable
};

// Runs all five strategies on one lineup. Strategies without a defined
// answer (nash with a non-negative slope, equal_utility with no common
// level) are skip-marked instead of aborting the comparison. Propagates
// InfeasibleLineup from the optimal solver.
inline CompareResult compare_strategies(const LineupProfiles& profiles,
                                        double cap = kDefaultShotCap) {
  CompareResult result;

  const SolveReport solved = solve_optimal(profiles, cap);
  result.reports.push_back(detail::make_strategy_report(
      profiles, Strategy::optimal, solved.allocation, cap));
  result.reports.push_back(star_feed(profiles, cap));
  result.reports.push_back(equal_shots(profiles, cap));
  try {
    result.reports.push_back(equal_utility(profiles, cap));
  } catch (const NoEqualUtilitySolution& e) {
    result.skipped.push_back({Strategy::equal_utility, e.what()});
  }
  try {
    const StrategyReport nash = nash_equal_efficiency(profiles, cap);
    result.poa = price_of_anarchy(nash, solved);
    result.reports.push_back(nash);
  } catch (const NashUndefined& e) {
    result.skipped.push_back({Strategy::nash, e.what()});
  }

  std::stable_sort(result.reports.begin(), result.reports.end(),
                   [](const StrategyReport& a, const StrategyReport& b) {
                     if (a.payoff != b.payoff) return a.payoff > b.payoff;
                     return to_string(a.strategy) < to_string(b.strategy);
                   });
  return result;
}

}  // namespace shotflow
