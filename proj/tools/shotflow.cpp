#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "shotflow/shotflow.hpp"

namespace {

struct GlobalOptions {
  std::optional<std::string> config_path;
  std::optional<std::string> out_path;
  std::optional<std::string> emit_config_path;
  std::string format = "json";

  // RunConfig overrides; only applied when set on the command line.
  std::optional<double> shot_cap;
  std::optional<double> ft_weight;
  std::optional<double> regulation_minutes;
  std::optional<int> min_games_fit;
  std::optional<int> starters_threshold;
  std::optional<int> roster_threshold;
  std::optional<double> grid_step;
};

shotflow::RunConfig resolve_config(const GlobalOptions& g) {
  shotflow::RunConfig c = shotflow::load_config_layer(g.config_path);
  if (g.shot_cap) c.shot_cap = *g.shot_cap;
  if (g.ft_weight) c.ft_weight = *g.ft_weight;
  if (g.regulation_minutes) c.regulation_minutes = *g.regulation_minutes;
  if (g.min_games_fit) c.min_games_fit = *g.min_games_fit;
  if (g.starters_threshold) c.starters_threshold = *g.starters_threshold;
  if (g.roster_threshold) c.roster_threshold = *g.roster_threshold;
  if (g.grid_step) c.grid_step = *g.grid_step;
  c.validate();
  return c;
}

shotflow::OutputFormat parse_format(const std::string& f) {
  return f == "csv" ? shotflow::OutputFormat::csv : shotflow::OutputFormat::json;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"shot allocation modeling from basketball game logs"};
  app.require_subcommand(1);
  app.fallthrough();

  GlobalOptions g;
  app.add_option("--config", g.config_path, "config file (JSON); SHOTFLOW_CONFIG is the fallback");
  app.add_option("--format", g.format, "output format: json or csv")
      ->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--out", g.out_path, "write primary output to this path instead of stdout");
  app.add_option("--emit-config", g.emit_config_path, "write the effective config to this path");
  app.add_option("--shot-cap", g.shot_cap, "per-player cap on fraction of team shots");
  app.add_option("--ft-weight", g.ft_weight, "free-throw weight in the true-shooting denominator");
  app.add_option("--regulation-minutes", g.regulation_minutes, "regulation game length in minutes");
  app.add_option("--min-games-fit", g.min_games_fit, "minimum games required to fit a profile");
  app.add_option("--starters-threshold", g.starters_threshold, "games started for the starters group");
  app.add_option("--roster-threshold", g.roster_threshold, "games played for the roster group");
  app.add_option("--grid-step", g.grid_step, "grid resolution for verification search");

  std::string logs_path, metrics_path, profiles_path;
  std::vector<std::string> player_ids;
  std::string group_name = "roster";
  std::optional<std::string> enum_logs_path, lineup_csv_path;
  bool verify = false;
  int braess_agents = 0;
  double braess_constant = 0.0, braess_coeff = 0.0;

  auto* ingest = app.add_subcommand("ingest", "parse game logs CSV into per-game metrics JSON");
  ingest->add_option("logs", logs_path, "game logs CSV")->required();

  auto* fit = app.add_subcommand("fit", "fit per-player shooting profiles from metrics JSON");
  fit->add_option("metrics", metrics_path, "metrics JSON from ingest")->required();

  auto* compare = app.add_subcommand("compare", "compare allocation strategies for one lineup");
  compare->add_option("profiles", profiles_path, "profiles JSON from fit")->required();
  compare->add_option("players", player_ids, "five player ids")->expected(5);
  compare->add_flag("--verify", verify, "cross-check the optimal payoff with a grid search");

  auto* enumerate = app.add_subcommand("enumerate", "evaluate every five-player combination of a group");
  enumerate->add_option("profiles", profiles_path, "profiles JSON from fit")->required();
  enumerate->add_option("--group", group_name, "group label / criterion: starters or roster")
      ->check(CLI::IsMember({"starters", "roster"}));
  enumerate->add_option("--logs", enum_logs_path,
                        "game logs CSV; membership is derived with the group criterion "
                        "instead of taking every profile");
  enumerate->add_option("--lineup-csv", lineup_csv_path, "also write per-lineup rows to this CSV");

  auto* braess = app.add_subcommand("braess", "two-link routing demo: selfish vs coordinated");
  braess->add_option("agents", braess_agents, "number of cars")->required();
  braess->add_option("constant_cost", braess_constant, "fixed-link travel time")->required();
  braess->add_option("linear_coeff", braess_coeff, "per-car time on the load-dependent link")->required();

  CLI11_PARSE(app, argc, argv);

  shotflow::RunConfig config;
  try {
    config = resolve_config(g);
  } catch (const shotflow::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return shotflow::kExitValidation;
  }
  if (g.emit_config_path) {
    try {
      shotflow::write_file(*g.emit_config_path, shotflow::to_json(config));
    } catch (const shotflow::IoError& e) {
      std::cerr << "error: " << e.what() << "\n";
      return shotflow::kExitIo;
    }
  }
  const shotflow::OutputFormat format = parse_format(g.format);

  if (ingest->parsed())
    return shotflow::cmd_ingest(logs_path, g.out_path, config, std::cout, std::cerr);
  if (fit->parsed())
    return shotflow::cmd_fit(metrics_path, g.out_path, config, std::cout, std::cerr);
  if (compare->parsed()) {
    const int rc = shotflow::cmd_compare(profiles_path, player_ids, config, format,
                                         g.out_path, std::cout, std::cerr);
    if (rc == shotflow::kExitOk && verify) {
      try {
        const auto profiles = shotflow::profiles_from_json(shotflow::read_file(profiles_path));
        std::map<std::string, shotflow::ShootingProfile> by_id;
        for (const auto& p : profiles) by_id[p.player_id] = p;
        std::vector<std::string> ids = player_ids;
        std::sort(ids.begin(), ids.end());
        shotflow::LineupProfiles lineup;
        for (int i = 0; i < shotflow::kLineupSize; ++i) lineup[i] = by_id.at(ids[i]);
        const auto exact = shotflow::solve_optimal(lineup, config.shot_cap);
        const auto grid = shotflow::grid_oracle(lineup, config.grid_step, config.shot_cap);
        std::cerr << "verify: solver_payoff=" << shotflow::format_fixed6(exact.payoff)
                  << " grid_payoff=" << shotflow::format_fixed6(grid.payoff)
                  << " step=" << shotflow::format_fixed6(config.grid_step) << "\n";
      } catch (const shotflow::Error& e) {
        std::cerr << "verify failed: " << e.what() << "\n";
      }
    }
    return rc;
  }
  if (enumerate->parsed()) {
    const auto kind = group_name == "starters" ? shotflow::GroupCriterion::Kind::starters
                                               : shotflow::GroupCriterion::Kind::roster;
    return shotflow::cmd_enumerate(profiles_path, kind, enum_logs_path, lineup_csv_path,
                                   config, g.out_path, std::cout, std::cerr);
  }
  if (braess->parsed()) {
    if (braess_agents < 1 || !(braess_constant > 0.0) || !(braess_coeff > 0.0)) {
      std::cerr << "error: braess needs agents >= 1 and positive costs\n";
      return shotflow::kExitValidation;
    }
    return shotflow::cmd_braess(braess_agents, braess_constant, braess_coeff, format,
                                g.out_path, std::cout, std::cerr);
  }
  return shotflow::kExitValidation;
}
