#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "shotflow/behavior.hpp"
#include "shotflow/config.hpp"
#include "shotflow/errors.hpp"

namespace shotflow {

using LineupProfiles = std::array<ShootingProfile, kLineupSize>;

// Shot fractions for the five players of a lineup, in lineup order.
struct Allocation {
  std::array<double, kLineupSize> x{};
};

enum class BoundState { interior, lower, upper };

inline std::string to_string(BoundState b) {
  switch (b) {
    case BoundState::lower: return "lower";
    case BoundState::upper: return "upper";
    default: return "interior";
  }
}

enum class SolveStatus { optimal, infeasible };

inline std::string to_string(SolveStatus s) {
  return s == SolveStatus::optimal ? "optimal" : "infeasible";
}

struct SolveReport {
  Allocation allocation;
  double payoff = 0.0;
  std::array<double, kLineupSize> per_player_utility{};
  std::optional<double> multiplier;  // absent for grid searches and vertex solutions
  SolveStatus status = SolveStatus::optimal;
  std::array<BoundState, kLineupSize> active_bounds{};
};

// Largest u in [0, cap] such that x * efficiency(x) >= 0 for every x in [0, u].
// This turns the nonnegative-utility constraint into a box bound.
inline double effective_upper_bound(const ShootingProfile& p,
                                    double cap = kDefaultShotCap) {
  if (p.intercept < 0.0) return 0.0;
  if (p.slope >= 0.0) return cap;
  if (p.intercept == 0.0) return 0.0;
  return std::min(cap, p.intercept / -p.slope);
}

namespace detail {

inline constexpr double kSumTol = 1e-9;
inline constexpr double kTieTol = 1e-12;

inline double allocation_sum(const std::array<double, kLineupSize>& x) {
  double s = 0.0;
  for (double v : x) s += v;
  return s;
}

// One coordinate's response x(t) = clamp((t - p) / q, 0, u), q != 0.
struct ClampedResponse {
  double p;
  double q;
  double u;
};

inline double response_value(const ClampedResponse& r, double t) {
  if (r.u <= 0.0) return 0.0;
  return std::clamp((t - r.p) / r.q, 0.0, r.u);
}

// All t where sum of clamped responses plus sum of unclamped lines
// (t - p) / q equals target. The sum is piecewise linear; each segment is
// solved exactly. Roots come back in ascending segment order.
inline std::vector<double> piecewise_roots(
    const std::vector<ClampedResponse>& clamped,
    const std::vector<std::pair<double, double>>& unclamped, double target) {
  std::vector<double> breaks;
  for (const auto& r : clamped) {
    if (r.u <= 0.0) continue;
    breaks.push_back(r.p);
    breaks.push_back(r.p + r.q * r.u);
  }
  std::sort(breaks.begin(), breaks.end());
  breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());

  constexpr double inf = std::numeric_limits<double>::infinity();
  std::vector<double> roots;
  auto scan_segment = [&](double lo, double hi) {
    double probe;
    if (std::isfinite(lo) && std::isfinite(hi)) probe = lo + (hi - lo) / 2.0;
    else if (std::isfinite(hi)) probe = hi - 1.0;
    else if (std::isfinite(lo)) probe = lo + 1.0;
    else probe = 0.0;

    double alpha = 0.0, beta = 0.0;
    for (const auto& r : clamped) {
      if (r.u <= 0.0) continue;
      const double v = (probe - r.p) / r.q;
      if (v <= 0.0) continue;
      if (v >= r.u) { alpha += r.u; continue; }
      beta += 1.0 / r.q;
      alpha += -r.p / r.q;
    }
    for (const auto& [p, q] : unclamped) {
      beta += 1.0 / q;
      alpha += -p / q;
    }

    if (std::fabs(beta) < 1e-300) {
      if (std::fabs(alpha - target) <= kSumTol) {
        if (std::isfinite(lo)) roots.push_back(lo);
        else if (std::isfinite(hi)) roots.push_back(hi);
        else roots.push_back(0.0);
      }
      return;
    }
    double t = (target - alpha) / beta;
    if (t >= lo - kSumTol && t <= hi + kSumTol) {
      if (std::isfinite(lo)) t = std::max(t, lo);
      if (std::isfinite(hi)) t = std::min(t, hi);
      roots.push_back(t);
    }
  };

  if (breaks.empty()) {
    scan_segment(-inf, inf);
  } else {
    scan_segment(-inf, breaks.front());
    for (std::size_t i = 0; i + 1 < breaks.size(); ++i)
      scan_segment(breaks[i], breaks[i + 1]);
    scan_segment(breaks.back(), inf);
  }

  std::vector<double> unique_roots;
  for (double t : roots) {
    if (unique_roots.empty() ||
        std::fabs(t - unique_roots.back()) > kTieTol * std::max(1.0, std::fabs(t)))
      unique_roots.push_back(t);
  }
  return unique_roots;
}

inline std::array<BoundState, kLineupSize> classify_bounds(
    const std::array<double, kLineupSize>& x,
    const std::array<double, kLineupSize>& ub) {
  std::array<BoundState, kLineupSize> out{};
  for (int i = 0; i < kLineupSize; ++i) {
    if (x[i] <= kTieTol) out[i] = BoundState::lower;
    else if (x[i] >= ub[i] - kTieTol) out[i] = BoundState::upper;
    else out[i] = BoundState::interior;
  }
  return out;
}

}  // namespace detail

// Total payoff of an allocation that already satisfies the simplex and cap
// constraints; the nonnegative-utility condition is not required here.
inline double team_payoff(const LineupProfiles& profiles, const Allocation& alloc,
                          double cap = kDefaultShotCap) {
  const double sum = detail::allocation_sum(alloc.x);
  if (std::fabs(sum - 1.0) > detail::kSumTol)
    throw InvalidAllocation("shot fractions sum to " + std::to_string(sum));
  for (int i = 0; i < kLineupSize; ++i)
    if (alloc.x[i] < 0.0 || alloc.x[i] > cap)
      throw InvalidAllocation("shot fraction " + std::to_string(alloc.x[i]) +
                              " outside [0, " + std::to_string(cap) + "]");
  double total = 0.0;
  for (int i = 0; i < kLineupSize; ++i) total += utility_at(profiles[i], alloc.x[i]);
  return total;
}

// Maximizes sum_i x_i * (slope_i * x_i + intercept_i) on the simplex
// intersected with the per-player boxes [0, effective_upper_bound].
//
// With every slope negative the objective is strictly concave and the unique
// maximizer is found by water-filling: interior coordinates share a common
// marginal value 2*slope*x + intercept = lambda, the rest sit on a bound, and
// lambda is solved exactly on the breakpoint segment that balances the mass.
//
// Coordinates with slope >= 0 break concavity; for those (at most five) the
// solver enumerates {zero, bound, interior} assignments, solves each case
// exactly, and keeps the best payoff, ties going to the lexicographically
// smallest allocation.
inline SolveReport solve_optimal(const LineupProfiles& profiles,
                                 double cap = kDefaultShotCap) {
  std::array<double, kLineupSize> ub{};
  double ub_sum = 0.0;
  for (int i = 0; i < kLineupSize; ++i) {
    ub[i] = effective_upper_bound(profiles[i], cap);
    ub_sum += ub[i];
  }
  if (ub_sum < 1.0 - detail::kTieTol) throw InfeasibleLineup(ub_sum);

  std::vector<int> convex;  // slope >= 0
  for (int i = 0; i < kLineupSize; ++i)
    if (profiles[i].slope >= 0.0) convex.push_back(i);

  std::array<double, kLineupSize> best_x{};
  double best_payoff = -std::numeric_limits<double>::infinity();
  std::optional<double> best_lambda;
  bool found = false;

  auto consider = [&](std::array<double, kLineupSize> x, std::optional<double> lambda) {
    for (int i = 0; i < kLineupSize; ++i) x[i] = std::clamp(x[i], 0.0, ub[i]);
    if (std::fabs(detail::allocation_sum(x) - 1.0) > 1e-7) return;
    double payoff = 0.0;
    for (int i = 0; i < kLineupSize; ++i) payoff += utility_at(profiles[i], x[i]);
    const bool better = payoff > best_payoff + detail::kTieTol;
    const bool tied = std::fabs(payoff - best_payoff) <= detail::kTieTol;
    if (!found || better ||
        (tied && std::lexicographical_compare(x.begin(), x.end(), best_x.begin(),
                                              best_x.end()))) {
      best_x = x;
      best_payoff = payoff;
      best_lambda = lambda;
      found = true;
    }
  };

  if (convex.empty()) {
    std::vector<detail::ClampedResponse> terms;
    for (int i = 0; i < kLineupSize; ++i)
      terms.push_back({profiles[i].intercept, 2.0 * profiles[i].slope, ub[i]});
    const auto roots = detail::piecewise_roots(terms, {}, 1.0);
    if (roots.empty()) {
      // Only reachable when the bounds sum is within tolerance of 1.
      consider(ub, std::nullopt);
    } else {
      const double lambda = roots.front();
      std::array<double, kLineupSize> x{};
      for (int i = 0; i < kLineupSize; ++i) x[i] = detail::response_value(terms[i], lambda);
      consider(x, lambda);
    }
  } else {
    const int k = static_cast<int>(convex.size());
    int cases = 1;
    for (int j = 0; j < k; ++j) cases *= 3;

    std::vector<int> concave;
    for (int i = 0; i < kLineupSize; ++i)
      if (profiles[i].slope < 0.0) concave.push_back(i);
    std::vector<detail::ClampedResponse> concave_terms;
    for (int i : concave)
      concave_terms.push_back({profiles[i].intercept, 2.0 * profiles[i].slope, ub[i]});

    enum { kZero = 0, kBound = 1, kInterior = 2 };
    for (int code = 0; code < cases; ++code) {
      std::array<double, kLineupSize> x{};
      std::vector<int> interior_linear, interior_quad;
      double fixed_mass = 0.0;
      int rem = code;
      for (int j = 0; j < k; ++j) {
        const int i = convex[j];
        const int st = rem % 3;
        rem /= 3;
        if (st == kZero) {
          x[i] = 0.0;
        } else if (st == kBound) {
          x[i] = ub[i];
          fixed_mass += ub[i];
        } else if (profiles[i].slope == 0.0) {
          interior_linear.push_back(i);
        } else {
          interior_quad.push_back(i);
        }
      }
      if (fixed_mass > 1.0 + detail::kSumTol) continue;
      const double budget = 1.0 - fixed_mass;

      if (interior_linear.empty() && interior_quad.empty()) {
        if (concave.empty()) {
          if (std::fabs(budget) <= detail::kSumTol) consider(x, std::nullopt);
          continue;
        }
        const auto roots = detail::piecewise_roots(concave_terms, {}, budget);
        for (double lambda : roots) {
          auto xx = x;
          for (std::size_t c = 0; c < concave.size(); ++c)
            xx[concave[c]] = detail::response_value(concave_terms[c], lambda);
          consider(xx, lambda);
        }
      } else if (!interior_linear.empty()) {
        // A flat coordinate pins the marginal value at its intercept.
        const double lambda = profiles[interior_linear.front()].intercept;
        bool ok = true;
        for (int i : interior_linear)
          if (std::fabs(profiles[i].intercept - lambda) > detail::kTieTol) ok = false;
        if (!ok) continue;
        auto xx = x;
        for (int i : interior_quad) {
          const double v = (lambda - profiles[i].intercept) / (2.0 * profiles[i].slope);
          if (v < -detail::kSumTol || v > ub[i] + detail::kSumTol) { ok = false; break; }
          xx[i] = std::clamp(v, 0.0, ub[i]);
        }
        if (!ok) continue;
        for (std::size_t c = 0; c < concave.size(); ++c)
          xx[concave[c]] = detail::response_value(concave_terms[c], lambda);
        double used = 0.0;
        for (int i = 0; i < kLineupSize; ++i) used += xx[i];
        double leftover = 1.0 - used;
        if (leftover < -detail::kSumTol) continue;
        // Fill flat coordinates from the back so earlier ones stay small.
        for (auto it = interior_linear.rbegin(); it != interior_linear.rend(); ++it) {
          const double take = std::clamp(leftover, 0.0, ub[*it]);
          xx[*it] = take;
          leftover -= take;
        }
        if (leftover > detail::kSumTol) continue;
        consider(xx, lambda);
      } else {
        std::vector<std::pair<double, double>> lines;
        for (int i : interior_quad)
          lines.emplace_back(profiles[i].intercept, 2.0 * profiles[i].slope);
        const auto roots = detail::piecewise_roots(concave_terms, lines, budget);
        for (double lambda : roots) {
          auto xx = x;
          bool ok = true;
          for (int i : interior_quad) {
            const double v = (lambda - profiles[i].intercept) / (2.0 * profiles[i].slope);
            if (v < -detail::kSumTol || v > ub[i] + detail::kSumTol) { ok = false; break; }
            xx[i] = std::clamp(v, 0.0, ub[i]);
          }
          if (!ok) continue;
          for (std::size_t c = 0; c < concave.size(); ++c)
            xx[concave[c]] = detail::response_value(concave_terms[c], lambda);
          consider(xx, lambda);
        }
      }
    }
  }

  if (!found) throw InfeasibleLineup(ub_sum);

  SolveReport report;
  report.allocation.x = best_x;
  report.multiplier = best_lambda;
  report.status = SolveStatus::optimal;
  for (int i = 0; i < kLineupSize; ++i)
    report.per_player_utility[i] = utility_at(profiles[i], best_x[i]);
  report.payoff = 0.0;
  for (double u : report.per_player_utility) report.payoff += u;
  report.active_bounds = detail::classify_bounds(best_x, ub);
  return report;
}

// Exhaustive search over all 5-tuples of multiples of `step` on the
// constrained simplex. Implemented as an exact dynamic program over the
// remaining grid budget, which visits the same feasible set as plain
// enumeration and reproduces its tie-break (lexicographically smallest
// allocation) by scanning each coordinate's grid index upward during
// reconstruction.
inline SolveReport grid_oracle(const LineupProfiles& profiles, double step,
                               double cap = kDefaultShotCap) {
  if (!(step > 0.0) || !(step <= 1.0))
    throw DomainError("grid step must be in (0, 1]");
  const double divisions = 1.0 / step;
  const long n_units = std::llround(divisions);
  if (n_units < 1 || std::fabs(divisions - static_cast<double>(n_units)) > 1e-6)
    throw DomainError("grid step must divide 1 evenly");

  std::array<long, kLineupSize> max_units{};
  double grid_bound_sum = 0.0;
  for (int i = 0; i < kLineupSize; ++i) {
    const double ub = effective_upper_bound(profiles[i], cap);
    max_units[i] = std::min<long>(n_units, static_cast<long>(std::floor(ub / step + 1e-9)));
    grid_bound_sum += static_cast<double>(max_units[i]) * step;
  }

  std::array<std::vector<double>, kLineupSize> util;
  for (int i = 0; i < kLineupSize; ++i) {
    util[i].resize(static_cast<std::size_t>(max_units[i]) + 1);
    for (long u = 0; u <= max_units[i]; ++u)
      util[i][static_cast<std::size_t>(u)] =
          utility_at(profiles[i], static_cast<double>(u) * step);
  }

  constexpr double neg_inf = -std::numeric_limits<double>::infinity();
  // best[i][b]: maximum utility of coordinates i..4 spending exactly b units.
  std::array<std::vector<double>, kLineupSize + 1> best;
  for (auto& row : best) row.assign(static_cast<std::size_t>(n_units) + 1, neg_inf);
  best[kLineupSize][0] = 0.0;
  for (int i = kLineupSize - 1; i >= 0; --i) {
    for (long b = 0; b <= n_units; ++b) {
      double v = neg_inf;
      const long top = std::min(max_units[i], b);
      for (long u = 0; u <= top; ++u) {
        const double rest = best[i + 1][static_cast<std::size_t>(b - u)];
        if (rest == neg_inf) continue;
        const double cand = util[i][static_cast<std::size_t>(u)] + rest;
        if (cand > v) v = cand;
      }
      best[i][static_cast<std::size_t>(b)] = v;
    }
  }
  if (best[0][static_cast<std::size_t>(n_units)] == neg_inf)
    throw InfeasibleLineup(grid_bound_sum);

  SolveReport report;
  long remaining = n_units;
  for (int i = 0; i < kLineupSize; ++i) {
    const long top = std::min(max_units[i], remaining);
    for (long u = 0; u <= top; ++u) {
      const double rest = best[i + 1][static_cast<std::size_t>(remaining - u)];
      if (rest == neg_inf) continue;
      if (util[i][static_cast<std::size_t>(u)] + rest ==
          best[i][static_cast<std::size_t>(remaining)]) {
        report.allocation.x[i] = static_cast<double>(u) * step;
        report.per_player_utility[i] = util[i][static_cast<std::size_t>(u)];
        report.active_bounds[i] = u == 0              ? BoundState::lower
                                  : u == max_units[i] ? BoundState::upper
                                                      : BoundState::interior;
        remaining -= u;
        break;
      }
    }
  }
  report.payoff = 0.0;
  for (double u : report.per_player_utility) report.payoff += u;
  report.multiplier = std::nullopt;
  report.status = SolveStatus::optimal;
  return report;
}

}  // namespace shotflow
