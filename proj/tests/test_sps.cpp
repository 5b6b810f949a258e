#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "v2xsim/sps.hpp"

using namespace v2xsim;

namespace {

std::vector<CsrId> window_candidates(std::int64_t now, const GridConfig& grid) {
  std::vector<CsrId> out;
  for (int sf = 0; sf < grid.selection_window_subframes; ++sf) {
    for (int sc = 0; sc < grid.subchannels_per_subframe; ++sc) {
      out.push_back({now + sf, sc});
    }
  }
  return out;
}

// Reference exclusion: direct per-candidate scan over the raw history.
std::vector<CsrId> brute_force_exclusion(const std::vector<CsrId>& candidates,
                                         const SensingWindow& w, double th_dbm,
                                         std::int64_t now, const GridConfig& grid) {
  std::vector<CsrId> kept;
  const auto own = w.unmonitored_subframes(now);
  for (const CsrId& c : candidates) {
    bool excluded = false;
    for (std::int64_t s : own) {
      if ((c.subframe - s) % grid.reservation_period_ms == 0) {
        excluded = true;
      }
    }
    for (const auto& d : w.decoded_reservations()) {
      if (d.subframe < now - w.span_ms() || d.subframe >= now) continue;
      if (d.subchannel != c.subchannel) continue;
      if ((c.subframe - d.subframe) % d.period_ms != 0) continue;
      if (d.rsrp_dbm > th_dbm) {
        excluded = true;
      }
    }
    if (!excluded) {
      kept.push_back(c);
    }
  }
  return kept;
}

}  // namespace

TEST_CASE("sensing window stores and ages out observations") {
  SensingWindow w(1000, 2);
  w.record_observation(5, 0, -90.0);
  CHECK(w.s_rssi_dbm(5, 0, 6) == doctest::Approx(-90.0));
  CHECK(!w.s_rssi_dbm(5, 1, 6).has_value());
  CHECK(w.observation_count(6) == 1);

  for (std::int64_t t = 0; t <= 1000; ++t) {
    w.record_observation(t, 0, -95.0);
  }
  // 1001 subframes recorded but the window only spans 1000.
  CHECK(w.observation_count(1001) == 1000);
  CHECK(!w.s_rssi_dbm(0, 0, 1001).has_value());
  CHECK(w.s_rssi_dbm(1, 0, 1001).has_value());
  CHECK(w.s_rssi_dbm(1000, 0, 1001).has_value());
}

TEST_CASE("decoded reservations pass through and are pruned with the window") {
  SensingWindow w(1000, 2);
  w.record_observation(5, 1, -80.0, DecodedInfo{-81.0, 100});
  REQUIRE(w.decoded_reservations().size() == 1);
  CHECK(w.decoded_reservations().front().subframe == 5);
  CHECK(w.decoded_reservations().front().subchannel == 1);
  CHECK(w.decoded_reservations().front().rsrp_dbm == doctest::Approx(-81.0));
  w.record_observation(1006, 0, -90.0);
  CHECK(w.decoded_reservations().empty());
}

TEST_CASE("own transmissions make subframes unmonitored") {
  SensingWindow w(1000, 2);
  w.record_observation(500, 0, -70.0);
  w.record_own_transmission(500);
  CHECK(w.is_unmonitored(500, 600));
  CHECK(!w.s_rssi_dbm(500, 0, 600).has_value());
  CHECK_THROWS_AS(w.record_observation(500, 1, -80.0), std::logic_error);
  CHECK(w.unmonitored_subframes(600) == std::vector<std::int64_t>{500});
}

TEST_CASE("exclusion with an empty history keeps every candidate") {
  SensingWindow w(1000, 2);
  GridConfig grid;
  auto cands = window_candidates(1000, grid);
  auto kept = exclusion_step(cands, w, -110.0, 1000, grid);
  CHECK(kept == cands);
}

TEST_CASE("a decoded reservation excludes exactly its projected CSR") {
  SensingWindow w(1000, 2);
  GridConfig grid;
  w.record_observation(950, 1, -80.0, DecodedInfo{-80.0, 100});
  auto kept = exclusion_step(window_candidates(1000, grid), w, -110.0, 1000, grid);
  CHECK(static_cast<int>(kept.size()) == 199);
  for (const CsrId& c : kept) {
    CHECK(!(c.subframe == 1050 && c.subchannel == 1));
  }
  // Below the threshold the projection is ignored.
  SensingWindow quiet(1000, 2);
  quiet.record_observation(950, 1, -115.0, DecodedInfo{-115.0, 100});
  kept = exclusion_step(window_candidates(1000, grid), quiet, -110.0, 1000, grid);
  CHECK(static_cast<int>(kept.size()) == 200);
}

TEST_CASE("own transmissions block the whole congruence class on both subchannels") {
  SensingWindow w(1000, 2);
  GridConfig grid;
  w.record_own_transmission(950);
  auto kept = exclusion_step(window_candidates(1000, grid), w, -110.0, 1000, grid);
  CHECK(static_cast<int>(kept.size()) == 198);
  for (const CsrId& c : kept) {
    CHECK(c.subframe != 1050);
  }
}

TEST_CASE("exclusion matches the brute-force oracle on random micro-instances") {
  GridConfig grid;
  grid.selection_window_subframes = 5;
  grid.reservation_period_ms = 10;
  grid.validate();
  std::mt19937_64 rng(2024);
  const std::int64_t now = 100;
  const int span = 40;
  for (int trial = 0; trial < 100; ++trial) {
    SensingWindow w(span, 2);
    // Own transmissions on even offsets, decoded reservations on odd ones so
    // the two record kinds never touch the same subframe.
    int own = static_cast<int>(rng() % 3);
    for (int i = 0; i < own; ++i) {
      w.record_own_transmission(now - 2 - 2 * static_cast<std::int64_t>(rng() % 19));
    }
    int decoded = static_cast<int>(rng() % 4);
    const int periods[4] = {2, 5, 10, 20};
    for (int i = 0; i < decoded; ++i) {
      std::int64_t sf = now - 1 - 2 * static_cast<std::int64_t>(rng() % 20);
      int sc = static_cast<int>(rng() % 2);
      double rsrp = -120.0 + static_cast<double>(rng() % 61);
      w.record_observation(sf, sc, rsrp, DecodedInfo{rsrp, periods[rng() % 4]});
    }
    auto cands = window_candidates(now, grid);
    for (double th : {-110.0, -104.0, -80.0}) {
      CHECK(exclusion_step(cands, w, th, now, grid) ==
            brute_force_exclusion(cands, w, th, now, grid));
    }
  }
}

TEST_CASE("cold-start selection shortlists 20% and draws a counter in range") {
  SensingWindow w(1000, 2);
  GridConfig grid;
  SpsConfig cfg;
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 200; ++trial) {
    auto res = select_resource(5000, w, cfg, grid, rng);
    CHECK(res.candidate_total == 200);
    CHECK(res.shortlist_size == 40);
    CHECK(res.relaxation_rounds == 0);
    CHECK(res.final_threshold_dbm == doctest::Approx(-110.0));
    CHECK(res.reservation.next_subframe >= 5000);
    CHECK(res.reservation.next_subframe < 5100);
    CHECK(res.reservation.subchannel >= 0);
    CHECK(res.reservation.subchannel < 2);
    CHECK(res.reservation.period_ms == 100);
    CHECK(res.reservation.rc >= 5);
    CHECK(res.reservation.rc <= 15);
    // With no history every metric ties at -inf, so the shortlist is the 40
    // lowest linear indices: the first 20 subframes of the window.
    CHECK(res.reservation.next_subframe < 5020);
  }
}

TEST_CASE("threshold relaxes in 3 dB steps until a fifth of the pool survives") {
  SensingWindow w(1000, 2);
  GridConfig grid;
  SpsConfig cfg;
  const std::int64_t now = 1000;
  // 95 of 100 congruence classes carry a decoded reservation at -80 dBm on
  // both subchannels: only 10 CSRs survive at -110 dBm, forcing relaxation.
  for (int off = 0; off < 95; ++off) {
    w.record_observation(900 + off, 0, -80.0, DecodedInfo{-80.0, 100});
    w.record_observation(900 + off, 1, -80.0, DecodedInfo{-80.0, 100});
  }
  std::mt19937_64 rng(4);
  auto res = select_resource(now, w, cfg, grid, rng);
  // -110 -> -80 in 3 dB steps is exactly 10 rounds.
  CHECK(res.relaxation_rounds == 10);
  CHECK(res.final_threshold_dbm == doctest::Approx(-80.0));
  CHECK(res.shortlist_size == 40);
  CHECK(res.candidate_total == 200);
}

TEST_CASE("ranking prefers the lowest mean S-RSSI over aligned subframes") {
  GridConfig grid;
  SpsConfig cfg;
  cfg.shortlist_fraction = 0.005;  // shortlist of one reveals the ranking order
  const std::int64_t now = 1000;
  SensingWindow w(1000, 2);
  // Block every congruence class except offsets 10 and 20.
  for (int k = 0; k < 100; ++k) {
    if (k == 10 || k == 20) continue;
    w.record_own_transmission(900 + k);
  }
  w.record_observation(910, 0, -90.0);
  w.record_observation(810, 0, -80.0);  // candidate (1010, 0): mean -85
  w.record_observation(910, 1, -86.0);  // candidate (1010, 1): mean -86
  w.record_observation(920, 0, -100.0); // candidate (1020, 0): mean -100
  w.record_observation(920, 1, -99.0);  // candidate (1020, 1): mean -99
  std::mt19937_64 rng(1);
  for (int trial = 0; trial < 20; ++trial) {
    auto res = select_resource(now, w, cfg, grid, rng);
    CHECK(res.shortlist_size == 1);
    CHECK(res.reservation.next_subframe == 1020);
    CHECK(res.reservation.subchannel == 0);
  }
}

TEST_CASE("half-duplex exclusions never relax") {
  GridConfig grid;
  SpsConfig cfg;
  const std::int64_t now = 1000;
  SensingWindow w(1000, 2);
  // 99 classes blocked by own transmissions; the free class carries a loud
  // decoded reservation on subchannel 0.
  for (int k = 1; k < 100; ++k) {
    w.record_own_transmission(900 + k);
  }
  w.record_observation(900, 0, -50.0, DecodedInfo{-50.0, 100});
  std::mt19937_64 rng(6);
  auto res = select_resource(now, w, cfg, grid, rng);
  // Relaxation lifts the RSRP exclusion but can never free blocked classes.
  CHECK(res.relaxation_rounds == 20);
  CHECK(res.final_threshold_dbm == doctest::Approx(-50.0));
  CHECK(res.shortlist_size == 2);
  CHECK(res.reservation.next_subframe == 1000);

  // With every class blocked nothing can be selected at all.
  w.record_own_transmission(900);
  CHECK_THROWS_AS(select_resource(now, w, cfg, grid, rng), std::logic_error);
}

TEST_CASE("a transmit opportunity advances the reservation by one period") {
  SpsConfig cfg;
  std::mt19937_64 rng(8);
  Reservation r{200, 1, 100, 5};
  auto out = on_transmit_opportunity(r, 200, cfg, rng);
  CHECK(out.reservation.rc == 4);
  CHECK(out.reservation.next_subframe == 300);
  CHECK(out.reservation.subchannel == 1);
  CHECK(!out.reselect);
  CHECK(!out.kept);
}

TEST_CASE("an expiring counter triggers reselection when the keep lottery fails") {
  SpsConfig cfg;  // prob_keep = 0
  std::mt19937_64 rng(8);
  Reservation r{200, 0, 100, 1};
  auto out = on_transmit_opportunity(r, 200, cfg, rng);
  CHECK(out.reservation.rc == 0);
  CHECK(out.reselect);
  CHECK(!out.kept);
}

TEST_CASE("off-schedule and expired opportunities are rejected") {
  SpsConfig cfg;
  std::mt19937_64 rng(8);
  Reservation r{200, 0, 100, 5};
  CHECK_THROWS_AS(on_transmit_opportunity(r, 201, cfg, rng), std::logic_error);
  r.rc = 0;
  CHECK_THROWS_AS(on_transmit_opportunity(r, 200, cfg, rng), std::logic_error);
}

TEST_CASE("reselection counter draws are uniform over [rc_min, rc_max]") {
  SpsConfig cfg;
  std::mt19937_64 rng(123);
  const int n = 100000;
  std::vector<int> counts(cfg.rc_max + 1, 0);
  for (int i = 0; i < n; ++i) {
    int rc = draw_reselection_counter(cfg, rng);
    REQUIRE(rc >= cfg.rc_min);
    REQUIRE(rc <= cfg.rc_max);
    counts[rc] += 1;
  }
  const int bins = cfg.rc_max - cfg.rc_min + 1;
  const double expected = static_cast<double>(n) / bins;
  double chi2 = 0.0;
  for (int rc = cfg.rc_min; rc <= cfg.rc_max; ++rc) {
    const double d = counts[rc] - expected;
    chi2 += d * d / expected;
  }
  // 99th percentile of chi-square with 10 degrees of freedom.
  CHECK(chi2 < 23.209);
}

TEST_CASE("the keep probability is honored to within one percent") {
  SpsConfig cfg;
  cfg.prob_keep = 0.8;
  std::mt19937_64 rng(77);
  const int n = 100000;
  int kept = 0;
  for (int i = 0; i < n; ++i) {
    Reservation r{0, 0, 100, 1};
    auto out = on_transmit_opportunity(r, 0, cfg, rng);
    CHECK((out.kept != out.reselect));
    if (out.kept) {
      kept += 1;
      CHECK(out.reservation.rc >= cfg.rc_min);
      CHECK(out.reservation.rc <= cfg.rc_max);
    }
  }
  CHECK(static_cast<double>(kept) / n == doctest::Approx(0.8).epsilon(0.0125));
}

TEST_CASE("sps validation rejects out-of-range parameters") {
  SpsConfig cfg;
  cfg.prob_keep = 0.9;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = SpsConfig{};
  cfg.rc_min = 0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = SpsConfig{};
  cfg.rc_min = 16;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = SpsConfig{};
  cfg.shortlist_fraction = 0.0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = SpsConfig{};
  cfg.th_step_db = 0.0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}
