#pragma once

#include <cmath>

#include "shotflow/errors.hpp"

namespace shotflow {

// Number of players on the floor; allocations are always this long.
inline constexpr int kLineupSize = 5;

// Per-player ceiling on the fraction of team shots.
inline constexpr double kDefaultShotCap = 0.40;

// Free-throw weight in the true-shooting denominator.
inline constexpr double kFreeThrowWeight = 0.44;

// Regulation game length used to normalize per-minute usage.
inline constexpr double kRegulationMinutes = 48.0;

inline constexpr int kDefaultMinGamesFit = 10;
inline constexpr int kDefaultStartersThreshold = 30;
inline constexpr int kDefaultRosterThreshold = 10;
inline constexpr double kDefaultGridStep = 0.005;

// Hard sanity cap on minutes in one game (regulation + overtimes).
inline constexpr double kMaxMinutesPerGame = 96.0;

struct RunConfig {
  double shot_cap = kDefaultShotCap;
  double ft_weight = kFreeThrowWeight;
  double regulation_minutes = kRegulationMinutes;
  int min_games_fit = kDefaultMinGamesFit;
  int starters_threshold = kDefaultStartersThreshold;
  int roster_threshold = kDefaultRosterThreshold;
  double grid_step = kDefaultGridStep;

  bool operator==(const RunConfig&) const = default;

  // Throws ConfigError on any out-of-range field.
  void validate() const {
    if (!(shot_cap > 0.0) || !(shot_cap <= 1.0))
      throw ConfigError("shot_cap must be in (0, 1]");
    if (kLineupSize * shot_cap < 1.0)
      throw ConfigError("shot_cap too small: five capped players cannot absorb all shots");
    if (!(ft_weight >= 0.0) || !std::isfinite(ft_weight))
      throw ConfigError("ft_weight must be a non-negative number");
    if (!(regulation_minutes > 0.0) || !std::isfinite(regulation_minutes))
      throw ConfigError("regulation_minutes must be positive");
    if (min_games_fit < 1) throw ConfigError("min_games_fit must be >= 1");
    if (starters_threshold < 1) throw ConfigError("starters_threshold must be >= 1");
    if (roster_threshold < 1) throw ConfigError("roster_threshold must be >= 1");
    if (!(grid_step > 0.0) || !(grid_step <= 1.0))
      throw ConfigError("grid_step must be in (0, 1]");
    double divisions = 1.0 / grid_step;
    if (std::fabs(divisions - std::llround(divisions)) > 1e-6)
      throw ConfigError("grid_step must divide 1 evenly");
  }
};

}  // namespace shotflow
