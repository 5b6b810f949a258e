#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "v2xsim/metrics.hpp"

using namespace v2xsim;

namespace {

std::vector<std::vector<double>> distance_matrix(std::size_t n, double d) {
  std::vector<std::vector<double>> m(n, std::vector<double>(n, d));
  for (std::size_t i = 0; i < n; ++i) m[i][i] = 0.0;
  return m;
}

}  // namespace

TEST_CASE("three co-CSR transmitters produce all three pairwise conflicts") {
  std::vector<TaggedTransmission> txs{
      {0, {10, 0}, 0.0}, {1, {10, 0}, 0.0}, {2, {10, 0}, 0.0}};
  auto events = conflicts_in_subframe(txs, distance_matrix(3, 100.0), 10);
  CHECK(events.size() == 3);
  for (const auto& e : events) {
    CHECK(e.time_ms == 10);
    CHECK(e.distance_m == doctest::Approx(100.0));
    CHECK(e.csr == CsrId{10, 0});
    CHECK(e.ue_a < e.ue_b);
  }
}

TEST_CASE("distinct CSRs yield no conflicts") {
  std::vector<TaggedTransmission> txs{{0, {10, 0}, 0.0}, {1, {10, 1}, 0.0}};
  CHECK(conflicts_in_subframe(txs, distance_matrix(2, 10.0), 10).empty());
}

TEST_CASE("a conflicting pair at 50 m is recorded once with its distance") {
  std::vector<TaggedTransmission> txs{{3, {7, 1}, 0.0}, {9, {7, 1}, 50.0}};
  auto events = conflicts_in_subframe(txs, distance_matrix(2, 50.0), 7);
  REQUIRE(events.size() == 1);
  CHECK(events[0].ue_a == 3);
  CHECK(events[0].ue_b == 9);
  CHECK(events[0].distance_m == doctest::Approx(50.0));
}

TEST_CASE("conflicts_in_subframe rejects a malformed distance matrix") {
  std::vector<TaggedTransmission> txs{{0, {1, 0}, 0.0}, {1, {1, 0}, 0.0}};
  std::vector<std::vector<double>> bad(1, std::vector<double>(2, 0.0));
  CHECK_THROWS_AS(conflicts_in_subframe(txs, bad, 1), std::invalid_argument);
}

TEST_CASE("distance histogram ratios conflicts to exposure per bin") {
  DistanceHistogram h(50.0, 2000.0);
  CHECK(h.bins() == 40);
  for (int i = 0; i < 10; ++i) h.add_exposure(25.0);
  h.add_conflict(25.0);
  CHECK(h.probability(0) == doctest::Approx(0.1));
  // No exposure recorded in bin 1.
  CHECK(!h.probability(1).has_value());
  CHECK_THROWS_AS(h.probability(40), std::out_of_range);
  CHECK(h.total_conflicts() == 1);
}

TEST_CASE("distances at or beyond the maximum are ignored") {
  DistanceHistogram h(50.0, 2000.0);
  h.add_exposure(2000.0);
  h.add_conflict(2500.0);
  CHECK(h.total_conflicts() == 0);
  for (int b = 0; b < h.bins(); ++b) {
    CHECK(h.exposure_in_bin(b) == 0);
  }
  // The last representable bin is [1950, 2000).
  h.add_exposure(1999.99);
  CHECK(h.exposure_in_bin(39) == 1);
}

TEST_CASE("pooled probability aggregates over a distance range") {
  DistanceHistogram h(50.0, 2000.0);
  for (int i = 0; i < 10; ++i) h.add_exposure(25.0);
  for (int i = 0; i < 10; ++i) h.add_exposure(75.0);
  h.add_conflict(25.0);
  h.add_conflict(75.0);
  h.add_conflict(75.0);
  CHECK(h.pooled_probability(0.0, 100.0) == doctest::Approx(0.15));
  CHECK(h.pooled_probability(0.0, 50.0) == doctest::Approx(0.1));
  CHECK(!h.pooled_probability(1000.0, 2000.0).has_value());
}

TEST_CASE("conflict fraction below a distance counts whole bins") {
  DistanceHistogram h(50.0, 2000.0);
  h.add_exposure(25.0);
  h.add_exposure(525.0);
  h.add_conflict(25.0);
  h.add_conflict(525.0);
  h.add_conflict(525.0);
  h.add_conflict(1525.0);
  CHECK(h.conflict_fraction_below(500.0) == doctest::Approx(0.25));
  CHECK(h.conflict_fraction_below(2000.0) == doctest::Approx(1.0));
}

TEST_CASE("occupancy distribution counts distinct UEs per CSR including idle ones") {
  GridConfig grid;
  std::vector<TaggedTransmission> txs;
  // 3 UEs on one CSR, 2 on another, 1 alone; one UE repeated on the same CSR
  // must count once.
  txs.push_back({0, {100, 0}, 0.0});
  txs.push_back({1, {100, 0}, 0.0});
  txs.push_back({2, {100, 0}, 0.0});
  txs.push_back({2, {100, 0}, 0.0});
  txs.push_back({3, {105, 1}, 0.0});
  txs.push_back({4, {105, 1}, 0.0});
  txs.push_back({5, {199, 0}, 0.0});
  auto w = rb_occupancy_distribution(txs, 100, grid);
  CHECK(w.window_start_ms == 100);
  CHECK(w.unutilized == 197);
  CHECK(w.histogram[0] == 197);
  CHECK(w.histogram[1] == 1);
  CHECK(w.histogram[2] == 1);
  CHECK(w.histogram[3] == 1);
  CHECK(w.max_occupancy == 3);
  CHECK(w.mean_occupancy == doctest::Approx(6.0 / 200.0));
  int total = 0;
  for (int c : w.histogram) total += c;
  CHECK(total == grid.csrs_per_window());
}

TEST_CASE("more transmitters than CSRs forces multi-occupancy by pigeonhole") {
  GridConfig grid;
  std::vector<TaggedTransmission> txs;
  for (int i = 0; i < 300; ++i) {
    txs.push_back({static_cast<std::uint32_t>(i),
                   {static_cast<std::int64_t>(i * 7 % 100), (i / 100) % 2},
                   0.0});
  }
  auto w = rb_occupancy_distribution(txs, 0, grid);
  CHECK(w.max_occupancy >= 2);
}

TEST_CASE("occupancy quantile pools CSR counts across windows") {
  GridConfig grid;
  std::vector<OccupancyWindow> windows;
  // One window: 199 idle CSRs and one with 4 UEs.
  std::vector<TaggedTransmission> txs;
  for (std::uint32_t u = 0; u < 4; ++u) txs.push_back({u, {5, 0}, 0.0});
  windows.push_back(rb_occupancy_distribution(txs, 0, grid));
  CHECK(occupancy_quantile(windows, 0.5) == doctest::Approx(0.0));
  CHECK(occupancy_quantile(windows, 1.0) == doctest::Approx(4.0));
  // 199/200 CSRs are idle, so p99 still lands on 0 but p99.9 reaches 4.
  CHECK(occupancy_quantile(windows, 0.999) == doctest::Approx(4.0));
  CHECK_THROWS_AS(occupancy_quantile({}, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(occupancy_quantile(windows, 1.5), std::invalid_argument);
}

TEST_CASE("collision distance timeseries summarizes per window") {
  std::vector<CollisionEvent> events;
  for (int i = 0; i < 100; ++i) {
    events.push_back({i * 5, {0, 0}, 0, 1, 500.0});
  }
  auto stats = collision_distance_timeseries(events, 500);
  REQUIRE(stats.size() == 1);
  CHECK(stats[0].t_ms == 0);
  CHECK(stats[0].count == 100);
  CHECK(stats[0].mean_m == doctest::Approx(500.0));
  CHECK(stats[0].median_m == doctest::Approx(500.0));
  CHECK(stats[0].p5_m == doctest::Approx(500.0));
  CHECK(stats[0].p95_m == doctest::Approx(500.0));
  CHECK_THROWS_AS(collision_distance_timeseries(events, 0), std::invalid_argument);
}

TEST_CASE("timeseries windows are keyed by event time and gaps are omitted") {
  std::vector<CollisionEvent> events{
      {100, {0, 0}, 0, 1, 100.0},
      {2600, {0, 0}, 0, 1, 900.0},
      {2700, {0, 0}, 2, 3, 1100.0},
  };
  auto stats = collision_distance_timeseries(events, 500);
  REQUIRE(stats.size() == 2);
  CHECK(stats[0].t_ms == 0);
  CHECK(stats[0].count == 1);
  CHECK(stats[1].t_ms == 2500);
  CHECK(stats[1].count == 2);
  CHECK(stats[1].mean_m == doctest::Approx(1000.0));
  CHECK(stats[1].median_m == doctest::Approx(1000.0));
  // Interpolated tail quantiles of {900, 1100}.
  CHECK(stats[1].p5_m == doctest::Approx(910.0));
  CHECK(stats[1].p95_m == doctest::Approx(1090.0));
}

TEST_CASE("delay and inter-transmit series follow from packet records") {
  std::vector<PacketRecord> records{
      {0, 5, 40, {40, 0}, 190},
      {1, 17, 20, {20, 1}, 190},
      {0, 105, 140, {140, 0}, 190},
      {0, 205, 240, {240, 0}, 190},
      {1, 317, 340, {340, 1}, 190},
  };
  auto s = mac_delay_and_itt_phy(records);
  REQUIRE(s.delay_ms.size() == 5);
  CHECK(s.delay_ms[0].value == doctest::Approx(35.0));
  CHECK(s.delay_ms[0].t_ms == 40);
  CHECK(s.delay_ms[1].value == doctest::Approx(3.0));
  // Gap series start at each UE's second packet: 2 gaps for UE0, 1 for UE1.
  REQUIRE(s.itt_ms.size() == 3);
  REQUIRE(s.itt_phy_ms.size() == 3);
  CHECK(s.itt_ms[0].value == doctest::Approx(100.0));
  CHECK(s.itt_ms[1].value == doctest::Approx(100.0));
  CHECK(s.itt_ms[2].value == doctest::Approx(300.0));
  CHECK(s.itt_phy_ms[0].value == doctest::Approx(100.0));
  CHECK(s.itt_phy_ms[1].value == doctest::Approx(100.0));
  CHECK(s.itt_phy_ms[2].value == doctest::Approx(320.0));

  std::vector<PacketRecord> disordered{
      {0, 100, 140, {140, 0}, 190},
      {0, 90, 120, {120, 0}, 190},
  };
  CHECK_THROWS_AS(mac_delay_and_itt_phy(disordered), std::invalid_argument);
}

TEST_CASE("a constant series settles immediately") {
  std::vector<TimeSeriesPoint> series;
  for (int i = 0; i <= 20; ++i) series.push_back({i * 500, 100.0});
  auto settled = settling_time(series, 0.10, 2000);
  REQUIRE(settled.has_value());
  CHECK(*settled == 0);
}

TEST_CASE("a step series settles at the step") {
  std::vector<TimeSeriesPoint> series;
  for (int i = 0; i <= 20; ++i) {
    series.push_back({i * 500, i * 500 < 3000 ? 0.0 : 100.0});
  }
  // Reference is the mean over [5000, 10000]: all samples there are 100.
  auto settled = settling_time(series, 0.10, 2000);
  REQUIRE(settled.has_value());
  CHECK(*settled == 3000);
}

TEST_CASE("a series oscillating beyond the band never settles") {
  std::vector<TimeSeriesPoint> series;
  for (int i = 0; i <= 20; ++i) {
    series.push_back({i * 500, i % 2 == 0 ? 50.0 : 150.0});
  }
  CHECK(!settling_time(series, 0.10, 2000).has_value());
}

TEST_CASE("settling rejects series shorter than the hold") {
  std::vector<TimeSeriesPoint> series{{0, 1.0}, {500, 1.0}};
  CHECK_THROWS_AS(settling_time(series, 0.10, 2000), std::invalid_argument);
  CHECK_THROWS_AS(settling_time({}, 0.10, 2000), std::invalid_argument);
  std::vector<TimeSeriesPoint> ok{{0, 1.0}, {2500, 1.0}};
  CHECK_THROWS_AS(settling_time(ok, 0.0, 2000), std::invalid_argument);
}

TEST_CASE("widening the band never delays settling") {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> noise(-20.0, 20.0);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<TimeSeriesPoint> series;
    for (int i = 0; i <= 40; ++i) {
      double base = i * 250 < 4000 ? noise(rng) * 10 : 100.0 + noise(rng) * 0.05;
      series.push_back({i * 250, base});
    }
    auto narrow = settling_time(series, 0.10, 2000);
    auto wide = settling_time(series, 0.30, 2000);
    if (narrow.has_value()) {
      REQUIRE(wide.has_value());
      CHECK(*wide <= *narrow);
    }
  }
}

TEST_CASE("dcc timeseries re-aggregates tick means") {
  std::vector<DccTickStats> ticks;
  for (int i = 0; i < 10; ++i) {
    ticks.push_back({i * 100, 0.5, 100.0 + i * 10, 10.0, 23.0, 30.0});
  }
  auto agg = dcc_timeseries(ticks, 500);
  REQUIRE(agg.size() == 2);
  CHECK(agg[0].t_ms == 0);
  CHECK(agg[0].mean_itt_ms == doctest::Approx(120.0));
  CHECK(agg[1].t_ms == 500);
  CHECK(agg[1].mean_itt_ms == doctest::Approx(170.0));
  CHECK(agg[0].mean_cbp == doctest::Approx(0.5));
}

TEST_CASE("failure taxonomy totals its categories") {
  FailureTaxonomy t{10, 4, 3, 2};
  CHECK(t.total() == 19);
}
