#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <string>

#include "doctest.h"
#include "v2xsim/config.hpp"

using namespace v2xsim;

TEST_CASE("an empty config yields the canonical defaults") {
  auto cfg = parse_config("");
  CHECK(cfg.grid.bandwidth_mhz == 10.0);
  CHECK(cfg.grid.rbs_per_subframe == 50);
  CHECK(cfg.grid.subchannels_per_subframe == 2);
  CHECK(cfg.grid.rbs_per_subchannel == 25);
  CHECK(cfg.grid.selection_window_subframes == 100);
  CHECK(cfg.grid.reservation_period_ms == 100);
  CHECK(cfg.sps.th_sps_dbm == -110.0);
  CHECK(cfg.sps.th_step_db == 3.0);
  CHECK(cfg.sps.shortlist_fraction == 0.20);
  CHECK(cfg.sps.rc_min == 5);
  CHECK(cfg.sps.rc_max == 15);
  CHECK(cfg.sps.prob_keep == 0.0);
  CHECK(cfg.dcc.itt_min_ms == 100.0);
  CHECK(cfg.dcc.itt_max_ms == 600.0);
  CHECK(cfg.dcc.density_coeff == 25.0);
  CHECK(cfg.dcc.density_radius_m == 100.0);
  CHECK(cfg.dcc.smoothing_lambda == 0.05);
  CHECK(cfg.dcc.pte_threshold_m == 0.5);
  CHECK(cfg.dcc.p_min_dbm == 10.0);
  CHECK(cfg.dcc.p_max_dbm == 23.0);
  CHECK(cfg.dcc.cbp_min == 0.50);
  CHECK(cfg.dcc.cbp_max == 0.80);
  CHECK(cfg.dcc.cbp_busy_threshold_dbm == -94.0);
  CHECK(cfg.dcc.cbp_window_ms == 100);
  CHECK(cfg.channel.pl0_db == 47.86);
  CHECK(cfg.channel.n1 == 2.0);
  CHECK(cfg.channel.n2 == 4.0);
  CHECK(cfg.channel.breakpoint_m == 200.0);
  CHECK(cfg.channel.shadow_sigma_db == 3.0);
  CHECK(cfg.channel.noise_figure_db == 9.0);
  CHECK(cfg.channel.carrier_mhz == 5860.0);
  CHECK(cfg.channel.sinr_threshold_db == 2.8);
  CHECK(cfg.scenario.name == "freeway-high");
  CHECK(cfg.scenario.road_length_m == 3600.0);
  CHECK(cfg.scenario.lanes == 12);
  CHECK(cfg.scenario.lane_width_m == 3.5);
  CHECK(cfg.sim.duration_ms == 120000);
  CHECK(cfg.sim.seed == 1);
  CHECK(!cfg.sim.dcc_enabled);
  CHECK(cfg.sim.control_tick_ms == 100);
}

TEST_CASE("keys override defaults and tolerate comments and spacing") {
  auto cfg = parse_config(
      "# run setup\n"
      "[sim]\n"
      "seed = 42   ; inline comment\n"
      "dcc_enabled = on\n"
      "\n"
      "[sps]\n"
      "  prob_keep =0.4\n"
      "[channel]\n"
      "shadow_sigma_db = 0\n");
  CHECK(cfg.sim.seed == 42);
  CHECK(cfg.sim.dcc_enabled);
  CHECK(cfg.sps.prob_keep == 0.4);
  CHECK(cfg.channel.shadow_sigma_db == 0.0);
}

TEST_CASE("a named preset fills the scenario before explicit keys apply") {
  auto cfg = parse_config("[scenario]\nname = urban-medium\n");
  CHECK(cfg.scenario.vehicle_count == 1200);
  CHECK(cfg.scenario.density_per_km_lane == 28.0);
  CHECK(cfg.scenario.speed_kmh == 15.0);

  // Explicit keys win regardless of their position relative to the name.
  auto tweaked = parse_config(
      "[scenario]\n"
      "vehicle_count = 1212\n"
      "name = urban-medium\n");
  CHECK(tweaked.scenario.vehicle_count == 1212);
  CHECK(tweaked.scenario.density_per_km_lane == 28.0);

  CHECK_THROWS_AS(parse_config("[scenario]\nname = rural\n"), ConfigError);
}

TEST_CASE("unknown keys, bad types and misplaced keys are rejected with location") {
  try {
    parse_config("[sps]\nrc_minimum = 5\n");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("line 2") != std::string::npos);
    CHECK(std::string(e.what()).find("rc_minimum") != std::string::npos);
  }
  CHECK_THROWS_AS(parse_config("[sps]\nrc_min = soon\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("[sim]\ndcc_enabled = maybe\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("rc_min = 5\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("[sps\nrc_min = 5\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("[sps]\n= 5\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("[sps]\nrc_min\n"), ConfigError);
}

TEST_CASE("cross-field validation runs after parsing") {
  CHECK_THROWS_AS(parse_config("[dcc]\nitt_max_ms = 50\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("[sps]\nprob_keep = 0.9\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("[grid]\nrbs_per_subchannel = 30\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("[scenario]\nvehicle_count = 290\n"), ConfigError);
}

TEST_CASE("serialize and parse round-trip to identical text") {
  FullConfig cfg;
  cfg.sim.seed = 99;
  cfg.sim.dcc_enabled = true;
  cfg.sps.prob_keep = 0.45;
  cfg.channel.shadow_sigma_db = 1.25;
  cfg.scenario = scenario_preset("urban-high");
  std::string text = serialize_config(cfg);
  auto parsed = parse_config(text);
  CHECK(serialize_config(parsed) == text);
  CHECK(parsed.sim.seed == 99);
  CHECK(parsed.sim.dcc_enabled);
  CHECK(parsed.sps.prob_keep == 0.45);
  CHECK(parsed.scenario.vehicle_count == 2400);

  // Defaults round-trip too.
  std::string defaults = serialize_config(FullConfig{});
  CHECK(serialize_config(parse_config(defaults)) == defaults);
}
