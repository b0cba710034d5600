#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <istream>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "shotflow/config.hpp"
#include "shotflow/errors.hpp"

namespace shotflow {

inline constexpr std::string_view kGameLogHeader =
    "player_id,game_id,minutes,started,fga,fta,points";

// One player's box-score line for one game.
struct GameLogRow {
  std::string player_id;
  std::string game_id;
  double minutes = 0.0;
  bool started = false;
  long fga = 0;
  long fta = 0;
  long points = 0;
};

// Derived per-game metrics for one row.
struct PlayerGameMetrics {
  std::string player_id;
  std::string game_id;
  double ts_pct = 0.0;
  double fts = 0.0;
  long total_shots = 0;
};

struct GroupCriterion {
  enum class Kind { starters, roster };
  Kind kind = Kind::roster;
  int threshold = kDefaultRosterThreshold;
};

inline std::string to_string(GroupCriterion::Kind k) {
  return k == GroupCriterion::Kind::starters ? "starters" : "roster";
}

namespace detail {

inline bool parse_long(std::string_view field, long& out) {
  const char* first = field.data();
  const char* last = field.data() + field.size();
  auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc() && ptr == last;
}

inline bool parse_double(std::string_view field, double& out) {
  const char* first = field.data();
  const char* last = field.data() + field.size();
  auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc() && ptr == last && std::isfinite(out);
}

inline std::vector<std::string_view> split_csv_line(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      fields.push_back(line.substr(start));
      break;
    }
    fields.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
  return fields;
}

}  // namespace detail

// Strict CSV reader for the game-log schema. Blank lines are ignored; the
// row index reported on errors is 1-based over data records.
inline std::vector<GameLogRow> parse_game_logs(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw MalformedHeader("<empty input>");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kGameLogHeader) throw MalformedHeader(line);

  std::vector<GameLogRow> rows;
  std::set<std::pair<std::string, std::string>> seen;
  std::size_t index = 0;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    ++index;

    const auto fields = detail::split_csv_line(line);
    if (fields.size() != 7)
      throw MalformedRow(index, "expected 7 fields, got " + std::to_string(fields.size()));

    GameLogRow row;
    row.player_id = std::string(fields[0]);
    row.game_id = std::string(fields[1]);
    if (row.player_id.empty()) throw MalformedRow(index, "empty player_id");
    if (row.game_id.empty()) throw MalformedRow(index, "empty game_id");

    if (!detail::parse_double(fields[2], row.minutes) || row.minutes < 0.0)
      throw MalformedRow(index, "bad minutes: \"" + std::string(fields[2]) + "\"");
    if (row.minutes > kMaxMinutesPerGame)
      throw MalformedRow(index, "minutes exceed " + std::to_string(kMaxMinutesPerGame));

    if (fields[3] == "0") row.started = false;
    else if (fields[3] == "1") row.started = true;
    else throw MalformedRow(index, "started must be 0 or 1, got \"" + std::string(fields[3]) + "\"");

    if (!detail::parse_long(fields[4], row.fga) || row.fga < 0)
      throw MalformedRow(index, "bad fga: \"" + std::string(fields[4]) + "\"");
    if (!detail::parse_long(fields[5], row.fta) || row.fta < 0)
      throw MalformedRow(index, "bad fta: \"" + std::string(fields[5]) + "\"");
    if (!detail::parse_long(fields[6], row.points) || row.points < 0)
      throw MalformedRow(index, "bad points: \"" + std::string(fields[6]) + "\"");

    if (!seen.emplace(row.player_id, row.game_id).second)
      throw DuplicatePlayerGame(row.player_id, row.game_id);
    rows.push_back(std::move(row));
  }
  return rows;
}

// 0.5 * points / (fga + ft_weight * fta).
inline double true_shooting_pct(long points, long fga, long fta,
                                double ft_weight = kFreeThrowWeight) {
  const double denom = static_cast<double>(fga) + ft_weight * static_cast<double>(fta);
  if (denom <= 0.0)
    throw UndefinedMetric("true shooting undefined: no weighted shot attempts");
  return 0.5 * static_cast<double>(points) / denom;
}

// (player_shots / team_shots) * (regulation / player_minutes).
inline double fraction_team_shots(long player_shots, long team_shots,
                                  double player_minutes,
                                  double regulation = kRegulationMinutes) {
  if (team_shots <= 0)
    throw UndefinedMetric("usage undefined: team took no shots");
  if (player_minutes <= 0.0)
    throw UndefinedMetric("usage undefined: player logged no minutes");
  return (static_cast<double>(player_shots) / static_cast<double>(team_shots)) *
         (regulation / player_minutes);
}

struct SkippedRow {
  enum class Reason { zero_minutes, undefined_ts };
  std::string player_id;
  std::string game_id;
  Reason reason;
};

inline std::string to_string(SkippedRow::Reason r) {
  return r == SkippedRow::Reason::zero_minutes ? "zero_minutes" : "undefined_ts";
}

struct MetricsResult {
  std::vector<PlayerGameMetrics> metrics;  // sorted by (player_id, game_id)
  std::vector<SkippedRow> skipped;         // same ordering
};

// Team shot totals are taken over every row sharing a game_id, so the input
// must contain one row per rostered player per game. Rows with zero minutes
// or an undefined true-shooting denominator are excluded and reported.
inline MetricsResult compute_metrics(const std::vector<GameLogRow>& rows,
                                     double ft_weight = kFreeThrowWeight,
                                     double regulation = kRegulationMinutes) {
  if (rows.empty()) throw EmptyDataset();

  std::map<std::string, long> team_shots;
  for (const auto& r : rows) team_shots[r.game_id] += r.fga + r.fta;

  std::vector<const GameLogRow*> ordered;
  ordered.reserve(rows.size());
  for (const auto& r : rows) ordered.push_back(&r);
  std::sort(ordered.begin(), ordered.end(), [](const GameLogRow* a, const GameLogRow* b) {
    return std::tie(a->player_id, a->game_id) < std::tie(b->player_id, b->game_id);
  });

  MetricsResult out;
  for (const GameLogRow* r : ordered) {
    if (r->minutes <= 0.0) {
      out.skipped.push_back({r->player_id, r->game_id, SkippedRow::Reason::zero_minutes});
      continue;
    }
    const double denom = static_cast<double>(r->fga) + ft_weight * static_cast<double>(r->fta);
    if (denom <= 0.0) {
      out.skipped.push_back({r->player_id, r->game_id, SkippedRow::Reason::undefined_ts});
      continue;
    }
    PlayerGameMetrics m;
    m.player_id = r->player_id;
    m.game_id = r->game_id;
    m.total_shots = r->fga + r->fta;
    m.ts_pct = true_shooting_pct(r->points, r->fga, r->fta, ft_weight);
    m.fts = fraction_team_shots(m.total_shots, team_shots.at(r->game_id), r->minutes,
                                regulation);
    out.metrics.push_back(std::move(m));
  }
  return out;
}

// starters: count of games started >= threshold.
// roster:   count of games with minutes > 0 >= threshold.
inline std::set<std::string> filter_group(const std::vector<GameLogRow>& rows,
                                          const GroupCriterion& criterion) {
  std::map<std::string, int> counts;
  for (const auto& r : rows) {
    const bool qualifies = criterion.kind == GroupCriterion::Kind::starters
                               ? r.started
                               : r.minutes > 0.0;
    if (qualifies) ++counts[r.player_id];
  }
  std::set<std::string> group;
  for (const auto& [id, n] : counts)
    if (n >= criterion.threshold) group.insert(id);
  return group;
}

}  // namespace shotflow
