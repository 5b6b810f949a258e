#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "v2xsim/resource_grid.hpp"

namespace v2xsim {

// Every quantity the simulator reports: conflict-distance statistics,
// resource occupancy, DCC traces, MAC delay and PHY inter-transmit times,
// and settling time of windowed series.

struct CollisionEvent {
  std::int64_t time_ms = 0;
  CsrId csr;
  std::uint32_t ue_a = 0;
  std::uint32_t ue_b = 0;
  double distance_m = 0.0;
};

struct TimeSeriesPoint {
  std::int64_t t_ms = 0;
  double value = 0.0;
};

struct PacketRecord {
  std::uint32_t ue_id = 0;
  std::int64_t generation_ms = 0;
  std::int64_t transmission_ms = 0;
  CsrId csr;
  int payload_bytes = 190;
};

// One transmission tagged with everything the collectors need.
struct TaggedTransmission {
  std::uint32_t ue_id = 0;
  CsrId csr;
  double position_x_m = 0.0;  // used only for reporting; distances come in precomputed
};

// A same-CSR conflict per unordered transmitting pair. Distances must be
// supplied by the caller (they depend on the road geometry).
std::vector<CollisionEvent> conflicts_in_subframe(
    const std::vector<TaggedTransmission>& transmissions,
    const std::vector<std::vector<double>>& pair_distances, std::int64_t time_ms);

// Conflict probability vs distance: conflicts normalized by pair-subframe
// exposure (a pair counts once per subframe in which both transmit).
class DistanceHistogram {
 public:
  DistanceHistogram(double bin_width_m = 50.0, double max_distance_m = 2000.0);

  void add_exposure(double distance_m, std::uint64_t count = 1);
  void add_conflict(double distance_m, std::uint64_t count = 1);

  int bins() const { return static_cast<int>(conflicts_.size()); }
  double bin_width() const { return bin_width_m_; }
  std::uint64_t conflicts_in_bin(int bin) const { return conflicts_[bin]; }
  std::uint64_t exposure_in_bin(int bin) const { return exposure_[bin]; }
  std::uint64_t total_conflicts() const;

  // conflicts/exposure per bin; empty-exposure bins are missing.
  std::optional<double> probability(int bin) const;
  // Pooled probability over distances in [lo, hi).
  std::optional<double> pooled_probability(double lo_m, double hi_m) const;
  // Fraction of all conflicts that happened below the given distance.
  double conflict_fraction_below(double distance_m) const;

 private:
  int bin_for(double distance_m) const;
  double bin_width_m_;
  std::vector<std::uint64_t> conflicts_;
  std::vector<std::uint64_t> exposure_;
};

// Occupancy of the resource pool over one reservation-period window:
// distinct transmitting UEs per CSR, including unutilized CSRs.
struct OccupancyWindow {
  std::int64_t window_start_ms = 0;
  std::vector<int> histogram;  // histogram[k] = CSRs occupied by exactly k UEs
  int max_occupancy = 0;
  int unutilized = 0;
  double mean_occupancy = 0.0;
};

OccupancyWindow rb_occupancy_distribution(
    const std::vector<TaggedTransmission>& window_transmissions,
    std::int64_t window_start_ms, const GridConfig& grid);

// Pools per-CSR occupancy counts across windows and returns the q-quantile
// (nearest-rank).
double occupancy_quantile(const std::vector<OccupancyWindow>& windows, double q);

struct DistanceWindowStats {
  std::int64_t t_ms = 0;  // window start
  int count = 0;
  double mean_m = 0.0;
  double median_m = 0.0;
  double p5_m = 0.0;
  double p95_m = 0.0;
};

// Windowed summary statistics of conflict distances. Windows with no events
// are omitted.
std::vector<DistanceWindowStats> collision_distance_timeseries(
    const std::vector<CollisionEvent>& events, std::int64_t window_ms);

struct DccTickStats {
  std::int64_t t_ms = 0;
  double mean_cbp = 0.0;
  double mean_itt_ms = 0.0;
  double mean_rate_hz = 0.0;
  double mean_power_dbm = 0.0;
  double mean_density = 0.0;
};

// Re-aggregates per-tick fleet means into coarser windows.
std::vector<DccTickStats> dcc_timeseries(const std::vector<DccTickStats>& ticks,
                                         std::int64_t window_ms);

struct PacketDelaySeries {
  std::vector<TimeSeriesPoint> delay_ms;    // transmission - generation
  std::vector<TimeSeriesPoint> itt_ms;      // gap between consecutive generations
  std::vector<TimeSeriesPoint> itt_phy_ms;  // gap between consecutive transmissions
};

// Per-UE delay/ITT/ITT_PHY series from transmitted-packet records (ordered
// per UE); gap series start from each UE's second packet.
PacketDelaySeries mac_delay_and_itt_phy(const std::vector<PacketRecord>& records);

// Earliest window start from which the series stays within
// +-band_fraction * |steady-state reference| for hold_ms continuously. The
// reference is the mean over the final half of the run. Returns nullopt when
// the series never settles; throws when the series is shorter than hold_ms.
std::optional<std::int64_t> settling_time(const std::vector<TimeSeriesPoint>& series,
                                          double band_fraction, std::int64_t hold_ms);

struct FailureTaxonomy {
  std::uint64_t decoded = 0;
  std::uint64_t propagation = 0;
  std::uint64_t collision = 0;
  std::uint64_t half_duplex = 0;

  std::uint64_t total() const { return decoded + propagation + collision + half_duplex; }
};

}  // namespace v2xsim
