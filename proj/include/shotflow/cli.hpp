#pragma once

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "shotflow/serialize.hpp"

namespace shotflow {

enum class OutputFormat { json, csv };

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(path, "cannot open for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw IoError(path, "read failed");
  return ss.str();
}

inline void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError(path, "cannot open for writing");
  out << content;
  if (!out) throw IoError(path, "write failed");
}

// Writes to the path when given, otherwise to the console stream.
inline void emit(const std::optional<std::string>& out_path, const std::string& content,
                 std::ostream& console) {
  if (out_path) write_file(*out_path, content);
  else console << content;
}

inline constexpr int kExitOk = 0;
inline constexpr int kExitIo = 1;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitInfeasible = 3;

namespace detail {

template <typename Fn>
int run_guarded(std::ostream& err, Fn&& fn) {
  try {
    return fn();
  } catch (const InfeasibleLineup& e) {
    err << "error: " << e.what() << "\n";
    return kExitInfeasible;
  } catch (const IoError& e) {
    err << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitIo;
  }
}

}  // namespace detail

inline int cmd_ingest(const std::string& logs_path,
                      const std::optional<std::string>& out_path,
                      const RunConfig& config, std::ostream& out, std::ostream& err) {
  return detail::run_guarded(err, [&]() {
    const std::string text = read_file(logs_path);
    std::istringstream stream(text);
    const auto rows = parse_game_logs(stream);
    const auto result = compute_metrics(rows, config.ft_weight, config.regulation_minutes);
    emit(out_path, to_json(result.metrics), out);
    for (const auto& s : result.skipped)
      err << "skipped player=" << s.player_id << " game=" << s.game_id
          << " reason=" << to_string(s.reason) << "\n";
    err << "ingest: " << result.metrics.size() << " metric rows, "
        << result.skipped.size() << " skipped\n";
    return kExitOk;
  });
}

inline int cmd_fit(const std::string& metrics_path,
                   const std::optional<std::string>& out_path, const RunConfig& config,
                   std::ostream& out, std::ostream& err) {
  return detail::run_guarded(err, [&]() {
    const auto metrics = metrics_from_json(read_file(metrics_path));

    std::map<std::string, std::vector<BehaviorSample>> by_player;
    for (const auto& m : metrics) by_player[m.player_id].push_back({m.fts, m.ts_pct});

    std::vector<ShootingProfile> profiles;
    for (const auto& [id, samples] : by_player) {
      try {
        ShootingProfile p = fit_profile(id, samples, config.min_games_fit);
        if (p.slope > 0.0)
          err << "note player=" << id << " positive_slope slope=" << format_fixed6(p.slope)
              << "\n";
        profiles.push_back(std::move(p));
      } catch (const InsufficientSamples& e) {
        err << "skipped player=" << id << " reason=insufficient_samples (" << e.what()
            << ")\n";
      } catch (const DegenerateFit& e) {
        err << "skipped player=" << id << " reason=degenerate_fit (" << e.what() << ")\n";
      }
    }
    if (profiles.empty()) {
      err << "error: no player has enough usable games to fit\n";
      return kExitValidation;
    }
    emit(out_path, to_json(profiles), out);
    err << "fit: " << profiles.size() << " profiles from " << by_player.size()
        << " players\n";
    return kExitOk;
  });
}

inline int cmd_compare(const std::string& profiles_path,
                       const std::vector<std::string>& player_ids,
                       const RunConfig& config, OutputFormat format,
                       const std::optional<std::string>& out_path, std::ostream& out,
                       std::ostream& err) {
  return detail::run_guarded(err, [&]() {
    if (player_ids.size() != static_cast<std::size_t>(kLineupSize))
      throw ParseError("compare needs exactly 5 player ids");
    const auto profiles = profiles_from_json(read_file(profiles_path));
    std::map<std::string, ShootingProfile> by_id;
    for (const auto& p : profiles) by_id[p.player_id] = p;

    std::vector<std::string> ids = player_ids;
    std::sort(ids.begin(), ids.end());
    if (std::adjacent_find(ids.begin(), ids.end()) != ids.end())
      throw ParseError("compare needs 5 distinct player ids");
    LineupProfiles lineup;
    for (int i = 0; i < kLineupSize; ++i) {
      const auto it = by_id.find(ids[static_cast<std::size_t>(i)]);
      if (it == by_id.end()) throw MissingProfile(ids[static_cast<std::size_t>(i)]);
      lineup[static_cast<std::size_t>(i)] = it->second;
    }

    const CompareResult cmp = compare_strategies(lineup, config.shot_cap);
    if (format == OutputFormat::json) {
      emit(out_path, to_json(cmp, ids), out);
    } else {
      emit(out_path, to_csv(cmp.reports), out);
      if (cmp.poa)
        err << "poa: ratio=" << (cmp.poa->ratio ? format_fixed6(*cmp.poa->ratio) : "n/a")
            << " difference=" << format_fixed6(cmp.poa->difference) << "\n";
    }
    for (const auto& s : cmp.skipped)
      err << "skipped strategy=" << to_string(s.strategy) << " reason=" << s.reason
          << "\n";
    return kExitOk;
  });
}

inline int cmd_enumerate(const std::string& profiles_path,
                         GroupCriterion::Kind group_kind,
                         const std::optional<std::string>& logs_path,
                         const std::optional<std::string>& lineup_csv_path,
                         const RunConfig& config,
                         const std::optional<std::string>& out_path, std::ostream& out,
                         std::ostream& err) {
  return detail::run_guarded(err, [&]() {
    const auto profile_list = profiles_from_json(read_file(profiles_path));
    std::map<std::string, ShootingProfile> profiles;
    for (const auto& p : profile_list) profiles[p.player_id] = p;

    std::set<std::string> group;
    for (const auto& [id, p] : profiles) group.insert(id);
    if (logs_path) {
      const std::string text = read_file(*logs_path);
      std::istringstream stream(text);
      const auto rows = parse_game_logs(stream);
      GroupCriterion criterion;
      criterion.kind = group_kind;
      criterion.threshold = group_kind == GroupCriterion::Kind::starters
                                ? config.starters_threshold
                                : config.roster_threshold;
      const auto qualified = filter_group(rows, criterion);
      std::set<std::string> with_profiles;
      for (const auto& id : qualified)
        if (profiles.contains(id)) with_profiles.insert(id);
      group = std::move(with_profiles);
    }
    if (group.size() < static_cast<std::size_t>(kLineupSize)) {
      err << "error: group has " << group.size() << " players, need at least "
          << kLineupSize << "\n";
      return kExitValidation;
    }

    const GroupSummary summary = evaluate_group(profiles, group, group_kind,
                                                config.shot_cap);
    emit(out_path, to_json(summary), out);

    if (lineup_csv_path) {
      std::string csv = lineup_csv_header();
      for (const auto& lu : enumerate_lineups(group, kLineupSize)) {
        LineupProfiles lp;
        for (int i = 0; i < kLineupSize; ++i)
          lp[static_cast<std::size_t>(i)] =
              profiles.at(lu.players[static_cast<std::size_t>(i)]);
        try {
          const CompareResult cmp = compare_strategies(lp, config.shot_cap);
          for (const auto& report : cmp.reports) csv += lineup_csv_row(lu, report);
        } catch (const InfeasibleLineup&) {
          continue;
        }
      }
      write_file(*lineup_csv_path, csv);
    }
    return kExitOk;
  });
}

inline int cmd_braess(int n_agents, double constant_cost, double linear_coeff,
                      OutputFormat format, const std::optional<std::string>& out_path,
                      std::ostream& out, std::ostream& err) {
  return detail::run_guarded(err, [&]() {
    const TwoLinkNetwork net{n_agents, constant_cost, linear_coeff};
    const BraessEquilibrium eq = braess_equilibrium(net);
    const BraessOptimum opt = braess_optimal(net);
    const PoaMetrics poa = poa_from_costs(eq.total_cost, opt.total_cost);

    std::string text;
    if (format == OutputFormat::json) {
      text = "{\"n_agents\":" + std::to_string(net.n_agents);
      text += ",\"equilibrium\":{\"sub_lane_count\":" + std::to_string(eq.sub_lane_count);
      text += ",\"total_cost\":" + format_fixed6(eq.total_cost) + "}";
      text += ",\"optimal\":{\"sub_lane_count\":" + std::to_string(opt.sub_lane_count);
      text += ",\"total_cost\":" + format_fixed6(opt.total_cost) + "}";
      text += ",\"poa_ratio\":" + (poa.ratio ? format_fixed6(*poa.ratio) : "null");
      text += ",\"poa_difference\":" + format_fixed6(poa.difference);
      text += "}\n";
    } else {
      text = "key,value\n";
      text += "equilibrium_sub_lane_count," + std::to_string(eq.sub_lane_count) + "\n";
      text += "equilibrium_total_cost," + format_fixed6(eq.total_cost) + "\n";
      text += "optimal_sub_lane_count," + std::to_string(opt.sub_lane_count) + "\n";
      text += "optimal_total_cost," + format_fixed6(opt.total_cost) + "\n";
      text += "poa_ratio," + (poa.ratio ? format_fixed6(*poa.ratio) : "n/a") + "\n";
      text += "poa_difference," + format_fixed6(poa.difference) + "\n";
    }
    emit(out_path, text, out);
    return kExitOk;
  });
}

// Precedence: defaults < config file (--config, else SHOTFLOW_CONFIG) < flags.
// Flag overrides are applied by the caller after this resolves the file layer.
inline RunConfig load_config_layer(const std::optional<std::string>& config_path) {
  if (config_path) return config_from_json(read_file(*config_path));
  if (const char* env = std::getenv("SHOTFLOW_CONFIG"))
    if (*env != '\0') return config_from_json(read_file(env));
  return RunConfig{};
}

}  // namespace shotflow
