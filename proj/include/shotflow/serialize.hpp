#pragma once

#include <cstdio>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "shotflow/allocator.hpp"
#include "shotflow/behavior.hpp"
#include "shotflow/config.hpp"
#include "shotflow/errors.hpp"
#include "shotflow/ingest.hpp"
#include "shotflow/lineups.hpp"
#include "shotflow/strategies.hpp"

// Output is written by hand so every run is byte-identical: keys in fixed
// order and every float printed with exactly six decimal places. Input JSON
// is parsed with nlohmann::json.
namespace shotflow {

inline std::string format_fixed6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  std::string s(buf);
  if (s == "-0.000000") s = "0.000000";
  return s;
}

namespace detail {

inline void append_json_string(std::string& out, const std::string& s) {
  out += '"';
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      case '\t': out += "\\t"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof buf, "\\u%04x", c);
          out += buf;
        } else {
          out += c;
        }
    }
  }
  out += '"';
}

inline std::string json_string(const std::string& s) {
  std::string out;
  append_json_string(out, s);
  return out;
}

inline std::string json_string_array(const std::vector<std::string>& items) {
  std::string out = "[";
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i > 0) out += ",";
    append_json_string(out, items[i]);
  }
  out += "]";
  return out;
}

template <typename Seq>
inline std::string json_fixed6_array(const Seq& values) {
  std::string out = "[";
  bool first = true;
  for (double v : values) {
    if (!first) out += ",";
    out += format_fixed6(v);
    first = false;
  }
  out += "]";
  return out;
}

}  // namespace detail

inline std::string to_json(const PlayerGameMetrics& m) {
  std::string out = "{\"player_id\":" + detail::json_string(m.player_id);
  out += ",\"game_id\":" + detail::json_string(m.game_id);
  out += ",\"ts_pct\":" + format_fixed6(m.ts_pct);
  out += ",\"fts\":" + format_fixed6(m.fts);
  out += ",\"total_shots\":" + std::to_string(m.total_shots);
  out += "}";
  return out;
}

inline std::string to_json(const std::vector<PlayerGameMetrics>& metrics) {
  std::string out = "[";
  for (std::size_t i = 0; i < metrics.size(); ++i) {
    out += i == 0 ? "\n  " : ",\n  ";
    out += to_json(metrics[i]);
  }
  out += "\n]\n";
  return out;
}

inline std::string to_json(const ShootingProfile& p) {
  std::string out = "{\"player_id\":" + detail::json_string(p.player_id);
  out += ",\"slope\":" + format_fixed6(p.slope);
  out += ",\"intercept\":" + format_fixed6(p.intercept);
  out += ",\"n_games\":" + std::to_string(p.n_games);
  out += ",\"r_squared\":" + format_fixed6(p.r_squared);
  out += "}";
  return out;
}

inline std::string to_json(const std::vector<ShootingProfile>& profiles) {
  std::string out = "[";
  for (std::size_t i = 0; i < profiles.size(); ++i) {
    out += i == 0 ? "\n  " : ",\n  ";
    out += to_json(profiles[i]);
  }
  out += "\n]\n";
  return out;
}

inline std::string to_json(const SolveReport& r) {
  std::string out = "{\"allocation\":" + detail::json_fixed6_array(r.allocation.x);
  out += ",\"payoff\":" + format_fixed6(r.payoff);
  out += ",\"per_player_utility\":" + detail::json_fixed6_array(r.per_player_utility);
  out += ",\"multiplier\":" + (r.multiplier ? format_fixed6(*r.multiplier) : "null");
  out += ",\"status\":" + detail::json_string(to_string(r.status));
  out += ",\"active_bounds\":[";
  for (int i = 0; i < kLineupSize; ++i) {
    if (i > 0) out += ",";
    out += detail::json_string(to_string(r.active_bounds[static_cast<std::size_t>(i)]));
  }
  out += "]}";
  return out;
}

inline std::string to_json(const StrategyReport& r) {
  std::string out = "{\"strategy\":" + detail::json_string(to_string(r.strategy));
  out += ",\"allocation\":" + detail::json_fixed6_array(r.allocation.x);
  out += ",\"payoff\":" + format_fixed6(r.payoff);
  out += std::string(",\"feasible\":") + (r.feasible ? "true" : "false");
  out += ",\"violated_constraints\":" + detail::json_string_array(r.violated_constraints);
  out += "}";
  return out;
}

inline std::string to_json(const PoaMetrics& m) {
  std::string out = "{\"nash_payoff\":" + format_fixed6(m.nash_payoff);
  out += ",\"optimal_payoff\":" + format_fixed6(m.optimal_payoff);
  out += ",\"ratio\":" + (m.ratio ? format_fixed6(*m.ratio) : "null");
  out += ",\"difference\":" + format_fixed6(m.difference);
  out += std::string(",\"degenerate_nash\":") + (m.degenerate_nash ? "true" : "false");
  out += "}";
  return out;
}

inline std::string to_json(const CompareResult& cmp,
                           const std::vector<std::string>& lineup_ids) {
  std::string out = "{\"lineup\":" + detail::json_string_array(lineup_ids);
  out += ",\"reports\":[";
  for (std::size_t i = 0; i < cmp.reports.size(); ++i) {
    out += i == 0 ? "\n    " : ",\n    ";
    out += to_json(cmp.reports[i]);
  }
  out += "\n  ]";
  out += ",\"skipped\":[";
  for (std::size_t i = 0; i < cmp.skipped.size(); ++i) {
    if (i > 0) out += ",";
    out += "{\"strategy\":" + detail::json_string(to_string(cmp.skipped[i].strategy));
    out += ",\"reason\":" + detail::json_string(cmp.skipped[i].reason) + "}";
  }
  out += "]";
  out += ",\"poa\":" + (cmp.poa ? to_json(*cmp.poa) : "null");
  out += "}\n";
  return out;
}

inline std::string to_json(const GroupSummary& s) {
  auto strategy_map_fixed6 = [](const std::map<Strategy, double>& m) {
    std::string out = "{";
    bool first = true;
    for (Strategy st : kAllStrategies) {
      const auto it = m.find(st);
      if (it == m.end()) continue;
      if (!first) out += ",";
      out += detail::json_string(to_string(st)) + ":" + format_fixed6(it->second);
      first = false;
    }
    out += "}";
    return out;
  };

  std::string out = "{\"group\":" + detail::json_string(to_string(s.group));
  out += ",\"lineup_count\":" + std::to_string(s.lineup_count);
  out += ",\"infeasible_lineups\":" + std::to_string(s.infeasible_lineups);
  out += ",\"per_strategy_feasible_count\":{";
  bool first = true;
  for (Strategy st : kAllStrategies) {
    const auto it = s.per_strategy_feasible_count.find(st);
    if (it == s.per_strategy_feasible_count.end()) continue;
    if (!first) out += ",";
    out += detail::json_string(to_string(st)) + ":" + std::to_string(it->second);
    first = false;
  }
  out += "}";
  out += ",\"per_strategy_mean_payoff\":" + strategy_map_fixed6(s.per_strategy_mean_payoff);
  out += ",\"best_lineup\":{\"players\":" +
         detail::json_string_array(s.best_lineup.lineup.players);
  out += ",\"payoff\":" + format_fixed6(s.best_lineup.payoff) + "}";
  out += ",\"relative_gains\":" + strategy_map_fixed6(s.relative_gains);
  out += "}\n";
  return out;
}

inline std::string to_json(const RunConfig& c) {
  std::string out = "{\"shot_cap\":" + format_fixed6(c.shot_cap);
  out += ",\"ft_weight\":" + format_fixed6(c.ft_weight);
  out += ",\"regulation_minutes\":" + format_fixed6(c.regulation_minutes);
  out += ",\"min_games_fit\":" + std::to_string(c.min_games_fit);
  out += ",\"starters_threshold\":" + std::to_string(c.starters_threshold);
  out += ",\"roster_threshold\":" + std::to_string(c.roster_threshold);
  out += ",\"grid_step\":" + format_fixed6(c.grid_step);
  out += "}\n";
  return out;
}

// --- CSV emitters -----------------------------------------------------------

namespace detail {

inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += "\"\"";
    else out += c;
  }
  out += "\"";
  return out;
}

}  // namespace detail

inline std::string to_csv(const std::vector<StrategyReport>& reports) {
  std::string out = "strategy,payoff,feasible,x1,x2,x3,x4,x5\n";
  for (const auto& r : reports) {
    out += to_string(r.strategy) + "," + format_fixed6(r.payoff) + ",";
    out += r.feasible ? "true" : "false";
    for (double x : r.allocation.x) out += "," + format_fixed6(x);
    out += "\n";
  }
  return out;
}

// One row per (lineup, strategy); lineup ids joined with '|'.
inline std::string lineup_csv_header() { return "lineup,strategy,payoff,feasible\n"; }

inline std::string lineup_csv_row(const Lineup& lu, const StrategyReport& r) {
  std::string joined;
  for (std::size_t i = 0; i < lu.players.size(); ++i) {
    if (i > 0) joined += "|";
    joined += lu.players[i];
  }
  return detail::csv_field(joined) + "," + to_string(r.strategy) + "," +
         format_fixed6(r.payoff) + "," + (r.feasible ? "true" : "false") + "\n";
}

// --- JSON readers -----------------------------------------------------------

namespace detail {

inline nlohmann::json parse_json(const std::string& text, const std::string& what) {
  auto j = nlohmann::json::parse(text, nullptr, false);
  if (j.is_discarded()) throw ParseError("invalid JSON in " + what);
  return j;
}

}  // namespace detail

inline std::vector<PlayerGameMetrics> metrics_from_json(const std::string& text) {
  const auto j = detail::parse_json(text, "metrics file");
  if (!j.is_array()) throw ParseError("metrics file must be a JSON array");
  std::vector<PlayerGameMetrics> out;
  for (const auto& e : j) {
    if (!e.is_object() || !e.contains("player_id") || !e.contains("game_id") ||
        !e.contains("ts_pct") || !e.contains("fts") || !e.contains("total_shots"))
      throw ParseError("metrics record missing required keys");
    PlayerGameMetrics m;
    m.player_id = e.at("player_id").get<std::string>();
    m.game_id = e.at("game_id").get<std::string>();
    m.ts_pct = e.at("ts_pct").get<double>();
    m.fts = e.at("fts").get<double>();
    m.total_shots = e.at("total_shots").get<long>();
    out.push_back(std::move(m));
  }
  return out;
}

inline std::vector<ShootingProfile> profiles_from_json(const std::string& text) {
  const auto j = detail::parse_json(text, "profiles file");
  if (!j.is_array()) throw ParseError("profiles file must be a JSON array");
  std::vector<ShootingProfile> out;
  for (const auto& e : j) {
    if (!e.is_object() || !e.contains("player_id") || !e.contains("slope") ||
        !e.contains("intercept") || !e.contains("n_games") || !e.contains("r_squared"))
      throw ParseError("profile record missing required keys");
    ShootingProfile p;
    p.player_id = e.at("player_id").get<std::string>();
    p.slope = e.at("slope").get<double>();
    p.intercept = e.at("intercept").get<double>();
    p.n_games = e.at("n_games").get<int>();
    p.r_squared = e.at("r_squared").get<double>();
    out.push_back(std::move(p));
  }
  return out;
}

inline RunConfig config_from_json(const std::string& text) {
  const auto j = detail::parse_json(text, "config file");
  if (!j.is_object()) throw ParseError("config file must be a JSON object");
  RunConfig c;
  for (const auto& [key, value] : j.items()) {
    if (key == "shot_cap") c.shot_cap = value.get<double>();
    else if (key == "ft_weight") c.ft_weight = value.get<double>();
    else if (key == "regulation_minutes") c.regulation_minutes = value.get<double>();
    else if (key == "min_games_fit") c.min_games_fit = value.get<int>();
    else if (key == "starters_threshold") c.starters_threshold = value.get<int>();
    else if (key == "roster_threshold") c.roster_threshold = value.get<int>();
    else if (key == "grid_step") c.grid_step = value.get<double>();
    else throw ParseError("unknown config key: " + key);
  }
  return c;
}

}  // namespace shotflow
