#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "shotflow/config.hpp"
#include "shotflow/errors.hpp"

namespace shotflow {

// One observed (usage, efficiency) point for a player in one game.
struct BehaviorSample {
  double fts;     // fraction of team shots, normalized to a full game
  double ts_pct;  // true shooting percentage in that game
};

// Fitted affine shooting behavior: efficiency(x) = slope * x + intercept.
struct ShootingProfile {
  std::string player_id;
  double slope = 0.0;
  double intercept = 0.0;
  int n_games = 0;
  double r_squared = 0.0;
};

// Ordinary least squares of ts_pct on fts, centered one-pass form.
// Requires at least max(min_games, 2) samples and two distinct fts values.
inline ShootingProfile fit_profile(std::string player_id,
                                   std::span<const BehaviorSample> samples,
                                   int min_games = kDefaultMinGamesFit) {
  const auto n = static_cast<long>(samples.size());
  if (n < min_games || n < 2)
    throw InsufficientSamples("player " + player_id + ": " + std::to_string(n) +
                              " samples, need at least " +
                              std::to_string(std::max<long>(min_games, 2)));

  double min_x = samples[0].fts, max_x = samples[0].fts;
  double mean_x = 0.0, mean_y = 0.0;
  for (const auto& s : samples) {
    min_x = std::min(min_x, s.fts);
    max_x = std::max(max_x, s.fts);
    mean_x += s.fts;
    mean_y += s.ts_pct;
  }
  if (min_x == max_x)
    throw DegenerateFit("player " + player_id + ": all usage values identical");
  mean_x /= static_cast<double>(n);
  mean_y /= static_cast<double>(n);

  double sxx = 0.0, sxy = 0.0;
  for (const auto& s : samples) {
    const double dx = s.fts - mean_x;
    sxx += dx * dx;
    sxy += dx * (s.ts_pct - mean_y);
  }
  if (sxx == 0.0)
    throw DegenerateFit("player " + player_id + ": no usage variation");

  ShootingProfile p;
  p.player_id = std::move(player_id);
  p.slope = sxy / sxx;
  p.intercept = mean_y - p.slope * mean_x;
  p.n_games = static_cast<int>(n);

  double ss_res = 0.0, ss_tot = 0.0;
  for (const auto& s : samples) {
    const double r = s.ts_pct - (p.slope * s.fts + p.intercept);
    ss_res += r * r;
    const double dy = s.ts_pct - mean_y;
    ss_tot += dy * dy;
  }
  p.r_squared = ss_tot == 0.0 ? 1.0 : std::clamp(1.0 - ss_res / ss_tot, 0.0, 1.0);
  return p;
}

inline ShootingProfile fit_profile(std::string player_id,
                                   const std::vector<BehaviorSample>& samples,
                                   int min_games = kDefaultMinGamesFit) {
  return fit_profile(std::move(player_id),
                     std::span<const BehaviorSample>(samples), min_games);
}

// Predicted efficiency at shot fraction x. Not clamped: callers decide what
// to do with negative values.
inline double efficiency_at(const ShootingProfile& p, double x) {
  if (!(x >= 0.0) || !(x <= 1.0))
    throw DomainError("shot fraction outside [0, 1]: " + std::to_string(x));
  return p.slope * x + p.intercept;
}

// Expected scoring contribution x * efficiency(x).
inline double utility_at(const ShootingProfile& p, double x) {
  return x * efficiency_at(p, x);
}

}  // namespace shotflow
