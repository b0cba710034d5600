#include "shotflow/cli.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "shotflow/shotflow.hpp"

namespace fs = std::filesystem;

using shotflow::OutputFormat;
using shotflow::RunConfig;

namespace {

const std::string kFixtureLogs = std::string(SHOTFLOW_FIXTURE_DIR) + "/game_logs.csv";

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("shotflow_test_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) +
            "_" + ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  fs::path dir_;
  std::ostringstream out_;
  std::ostringstream err_;
};

}  // namespace

TEST_F(CliTest, IngestFitEnumeratePipeline) {
  RunConfig config;
  ASSERT_EQ(shotflow::cmd_ingest(kFixtureLogs, path("metrics.json"), config, out_, err_), 0);
  EXPECT_NE(err_.str().find("skipped player=p14"), std::string::npos);

  ASSERT_EQ(shotflow::cmd_fit(path("metrics.json"), path("profiles.json"), config, out_, err_), 0);
  const auto profiles = shotflow::profiles_from_json(shotflow::read_file(path("profiles.json")));
  EXPECT_EQ(profiles.size(), 14u);
  for (const auto& p : profiles) EXPECT_LT(p.slope, 0.0);

  ASSERT_EQ(shotflow::cmd_enumerate(path("profiles.json"), shotflow::GroupCriterion::Kind::roster,
                                    std::nullopt, path("lineups.csv"), config,
                                    path("summary.json"), out_, err_), 0);
  const std::string summary = shotflow::read_file(path("summary.json"));
  EXPECT_NE(summary.find("\"lineup_count\":2002"), std::string::npos);
  EXPECT_NE(summary.find("\"infeasible_lineups\":0"), std::string::npos);

  const auto parsed = nlohmann::json::parse(summary);
  const double opt_mean = parsed["per_strategy_mean_payoff"]["optimal"].get<double>();
  for (const auto& [name, mean] : parsed["per_strategy_mean_payoff"].items())
    EXPECT_LE(mean.get<double>(), opt_mean + 1e-9) << name;
  for (const auto& [name, count] : parsed["per_strategy_feasible_count"].items())
    EXPECT_EQ(count.get<long>(), 2002) << name;

  const std::string lineup_csv = shotflow::read_file(path("lineups.csv"));
  EXPECT_EQ(lineup_csv.substr(0, lineup_csv.find('\n')), "lineup,strategy,payoff,feasible");
  // one row per strategy per lineup, plus the header
  EXPECT_EQ(static_cast<long>(std::count(lineup_csv.begin(), lineup_csv.end(), '\n')),
            2002L * 5 + 1);
}

TEST_F(CliTest, EnumerateStartersGroupFromLogs) {
  RunConfig config;
  ASSERT_EQ(shotflow::cmd_ingest(kFixtureLogs, path("metrics.json"), config, out_, err_), 0);
  ASSERT_EQ(shotflow::cmd_fit(path("metrics.json"), path("profiles.json"), config, out_, err_), 0);
  ASSERT_EQ(shotflow::cmd_enumerate(path("profiles.json"),
                                    shotflow::GroupCriterion::Kind::starters, kFixtureLogs,
                                    std::nullopt, config, path("summary.json"), out_, err_), 0);
  const std::string summary = shotflow::read_file(path("summary.json"));
  EXPECT_NE(summary.find("\"group\":\"starters\""), std::string::npos);
  EXPECT_NE(summary.find("\"lineup_count\":21"), std::string::npos);
}

TEST_F(CliTest, IngestMissingFileIsIoError) {
  EXPECT_EQ(shotflow::cmd_ingest(path("absent.csv"), std::nullopt, RunConfig{}, out_, err_), 1);
  EXPECT_NE(err_.str().find("absent.csv"), std::string::npos);
}

TEST_F(CliTest, IngestMalformedRowIsValidationError) {
  shotflow::write_file(path("bad.csv"),
                       "player_id,game_id,minutes,started,fga,fta,points\n"
                       "p1,g1,24.0,1,20,5,30\n"
                       "p2,g1,-3.0,0,10,2,12\n");
  EXPECT_EQ(shotflow::cmd_ingest(path("bad.csv"), std::nullopt, RunConfig{}, out_, err_), 2);
  EXPECT_NE(err_.str().find("row 2"), std::string::npos);
}

TEST_F(CliTest, FitRejectsAllPlayersBelowMinimum) {
  shotflow::write_file(path("logs.csv"),
                       "player_id,game_id,minutes,started,fga,fta,points\n"
                       "p1,g1,24.0,1,20,5,30\n"
                       "p2,g1,30.0,1,15,5,20\n");
  ASSERT_EQ(shotflow::cmd_ingest(path("logs.csv"), path("metrics.json"), RunConfig{}, out_, err_), 0);
  EXPECT_EQ(shotflow::cmd_fit(path("metrics.json"), path("profiles.json"), RunConfig{}, out_, err_), 2);
}

TEST_F(CliTest, FitSkipsDegenerateUsagePlayer) {
  // constant team totals and constant minutes give p2 the identical usage in
  // every game, so it cannot be fit
  std::string csv = "player_id,game_id,minutes,started,fga,fta,points\n";
  for (int g = 1; g <= 12; ++g) {
    csv += "p1,g" + std::to_string(g) + "," + std::to_string(20 + g) + ".0,1,12,2," +
           std::to_string(12 + g % 7) + "\n";
    csv += "p2,g" + std::to_string(g) + ",24.0,0,10,0,11\n";
  }
  shotflow::write_file(path("logs.csv"), csv);
  ASSERT_EQ(shotflow::cmd_ingest(path("logs.csv"), path("metrics.json"), RunConfig{}, out_, err_), 0);
  err_.str("");
  ASSERT_EQ(shotflow::cmd_fit(path("metrics.json"), path("profiles.json"), RunConfig{},
                              out_, err_), 0);
  EXPECT_NE(err_.str().find("p2"), std::string::npos);
  EXPECT_NE(err_.str().find("degenerate"), std::string::npos);
  const auto profiles = shotflow::profiles_from_json(shotflow::read_file(path("profiles.json")));
  ASSERT_EQ(profiles.size(), 1u);
  EXPECT_EQ(profiles[0].player_id, "p1");
}

TEST_F(CliTest, CompareHappyPathAndErrors) {
  std::vector<shotflow::ShootingProfile> profiles;
  for (int i = 1; i <= 6; ++i) {
    shotflow::ShootingProfile p;
    p.player_id = "p" + std::to_string(i);
    p.slope = -0.5 - 0.02 * i;
    p.intercept = 0.55 + 0.01 * i;
    p.n_games = 20;
    p.r_squared = 0.9;
    profiles.push_back(p);
  }
  shotflow::write_file(path("profiles.json"), shotflow::to_json(profiles));

  const std::vector<std::string> ids = {"p1", "p2", "p3", "p4", "p5"};
  ASSERT_EQ(shotflow::cmd_compare(path("profiles.json"), ids, RunConfig{}, OutputFormat::json,
                                  path("cmp.json"), out_, err_), 0);
  const std::string cmp = shotflow::read_file(path("cmp.json"));
  EXPECT_NE(cmp.find("\"strategy\":\"optimal\""), std::string::npos);
  EXPECT_NE(cmp.find("\"poa\":{"), std::string::npos);

  // csv format emits the strategy table
  ASSERT_EQ(shotflow::cmd_compare(path("profiles.json"), ids, RunConfig{}, OutputFormat::csv,
                                  path("cmp.csv"), out_, err_), 0);
  const std::string table = shotflow::read_file(path("cmp.csv"));
  EXPECT_EQ(table.substr(0, table.find('\n')), "strategy,payoff,feasible,x1,x2,x3,x4,x5");

  // unknown player id
  EXPECT_EQ(shotflow::cmd_compare(path("profiles.json"), {"p1", "p2", "p3", "p4", "nope"},
                                  RunConfig{}, OutputFormat::json, std::nullopt, out_, err_), 2);
  // duplicate player id
  EXPECT_EQ(shotflow::cmd_compare(path("profiles.json"), {"p1", "p1", "p2", "p3", "p4"},
                                  RunConfig{}, OutputFormat::json, std::nullopt, out_, err_), 2);
}

TEST_F(CliTest, SolveReportJsonGolden) {
  shotflow::SolveReport r;
  r.allocation.x = {0.2, 0.2, 0.2, 0.2, 0.2};
  r.payoff = 0.5;
  r.per_player_utility = {0.1, 0.1, 0.1, 0.1, 0.1};
  r.multiplier = 0.4;
  r.status = shotflow::SolveStatus::optimal;
  r.active_bounds.fill(shotflow::BoundState::interior);
  EXPECT_EQ(shotflow::to_json(r),
            "{\"allocation\":[0.200000,0.200000,0.200000,0.200000,0.200000],"
            "\"payoff\":0.500000,"
            "\"per_player_utility\":[0.100000,0.100000,0.100000,0.100000,0.100000],"
            "\"multiplier\":0.400000,\"status\":\"optimal\","
            "\"active_bounds\":[\"interior\",\"interior\",\"interior\",\"interior\","
            "\"interior\"]}");
  r.multiplier.reset();
  EXPECT_NE(shotflow::to_json(r).find("\"multiplier\":null"), std::string::npos);
}

TEST_F(CliTest, CompareInfeasibleLineupExitsThree) {
  std::vector<shotflow::ShootingProfile> profiles;
  for (int i = 1; i <= 5; ++i) {
    shotflow::ShootingProfile p;
    p.player_id = "p" + std::to_string(i);
    p.slope = -0.5;
    p.intercept = 0.0;  // unusable at any positive fraction
    p.n_games = 20;
    p.r_squared = 0.9;
    profiles.push_back(p);
  }
  shotflow::write_file(path("profiles.json"), shotflow::to_json(profiles));
  EXPECT_EQ(shotflow::cmd_compare(path("profiles.json"), {"p1", "p2", "p3", "p4", "p5"},
                                  RunConfig{}, OutputFormat::json, std::nullopt, out_, err_), 3);
}

TEST_F(CliTest, EnumerateTooFewProfilesExitsTwo) {
  std::vector<shotflow::ShootingProfile> profiles;
  for (int i = 1; i <= 4; ++i) {
    shotflow::ShootingProfile p;
    p.player_id = "p" + std::to_string(i);
    p.slope = -0.5;
    p.intercept = 0.6;
    p.n_games = 20;
    profiles.push_back(p);
  }
  shotflow::write_file(path("profiles.json"), shotflow::to_json(profiles));
  EXPECT_EQ(shotflow::cmd_enumerate(path("profiles.json"), shotflow::GroupCriterion::Kind::roster,
                                    std::nullopt, std::nullopt, RunConfig{}, std::nullopt,
                                    out_, err_), 2);
}

TEST_F(CliTest, BraessOutputs) {
  ASSERT_EQ(shotflow::cmd_braess(10, 10.0, 1.0, OutputFormat::json, std::nullopt, out_, err_), 0);
  const std::string text = out_.str();
  EXPECT_NE(text.find("\"poa_ratio\":1.333333"), std::string::npos);
  EXPECT_NE(text.find("\"equilibrium\":{\"sub_lane_count\":10,\"total_cost\":100.000000}"),
            std::string::npos);
  EXPECT_NE(text.find("\"optimal\":{\"sub_lane_count\":5,\"total_cost\":75.000000}"),
            std::string::npos);
}

TEST_F(CliTest, ConfigRoundTrip) {
  RunConfig c;
  c.shot_cap = 0.35;
  c.grid_step = 0.01;
  c.starters_threshold = 25;
  shotflow::write_file(path("config.json"), shotflow::to_json(c));
  const RunConfig parsed = shotflow::config_from_json(shotflow::read_file(path("config.json")));
  EXPECT_EQ(parsed, c);
}

TEST_F(CliTest, ConfigEnvFallback) {
  RunConfig c;
  c.roster_threshold = 12;
  shotflow::write_file(path("config.json"), shotflow::to_json(c));
  ::setenv("SHOTFLOW_CONFIG", path("config.json").c_str(), 1);
  const RunConfig loaded = shotflow::load_config_layer(std::nullopt);
  ::unsetenv("SHOTFLOW_CONFIG");
  EXPECT_EQ(loaded.roster_threshold, 12);
  // explicit path wins over the environment
  RunConfig c2;
  c2.roster_threshold = 15;
  shotflow::write_file(path("config2.json"), shotflow::to_json(c2));
  ::setenv("SHOTFLOW_CONFIG", path("config.json").c_str(), 1);
  EXPECT_EQ(shotflow::load_config_layer(path("config2.json")).roster_threshold, 15);
  ::unsetenv("SHOTFLOW_CONFIG");
}

TEST_F(CliTest, ConfigValidation) {
  RunConfig c;
  c.shot_cap = 0.15;  // five players cannot absorb all shots
  EXPECT_THROW(c.validate(), shotflow::ConfigError);
  c = RunConfig{};
  c.grid_step = 0.3;
  EXPECT_THROW(c.validate(), shotflow::ConfigError);
  c = RunConfig{};
  c.min_games_fit = 0;
  EXPECT_THROW(c.validate(), shotflow::ConfigError);
  EXPECT_NO_THROW(RunConfig{}.validate());
}

TEST_F(CliTest, UnknownConfigKeyRejected) {
  shotflow::write_file(path("config.json"), "{\"shot_capp\":0.4}\n");
  EXPECT_THROW(shotflow::config_from_json(shotflow::read_file(path("config.json"))),
               shotflow::ParseError);
}

TEST_F(CliTest, FixedWidthFloatFormatting) {
  EXPECT_EQ(shotflow::format_fixed6(0.5), "0.500000");
  EXPECT_EQ(shotflow::format_fixed6(4.0 / 3.0), "1.333333");
  EXPECT_EQ(shotflow::format_fixed6(-1e-9), "0.000000");  // negative zero normalized
  EXPECT_EQ(shotflow::format_fixed6(15.0 / 22.2), "0.675676");
}

TEST_F(CliTest, JsonStringEscaping) {
  shotflow::PlayerGameMetrics m;
  m.player_id = "we\"ird\\id";
  m.game_id = "g\n1";
  m.ts_pct = 0.5;
  m.fts = 0.25;
  m.total_shots = 10;
  const std::string json = shotflow::to_json(m);
  EXPECT_NE(json.find("we\\\"ird\\\\id"), std::string::npos);
  EXPECT_NE(json.find("g\\n1"), std::string::npos);
}

TEST_F(CliTest, MetricsJsonGolden) {
  std::vector<shotflow::PlayerGameMetrics> metrics(1);
  metrics[0].player_id = "p1";
  metrics[0].game_id = "g1";
  metrics[0].ts_pct = 15.0 / 22.2;
  metrics[0].fts = 0.625;
  metrics[0].total_shots = 25;
  EXPECT_EQ(shotflow::to_json(metrics),
            "[\n  {\"player_id\":\"p1\",\"game_id\":\"g1\",\"ts_pct\":0.675676,"
            "\"fts\":0.625000,\"total_shots\":25}\n]\n");
}
