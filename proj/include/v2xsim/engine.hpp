#pragma once

#include <cstdint>
#include <vector>

#include "v2xsim/channel.hpp"
#include "v2xsim/dcc.hpp"
#include "v2xsim/metrics.hpp"
#include "v2xsim/mobility.hpp"
#include "v2xsim/resource_grid.hpp"
#include "v2xsim/sps.hpp"

namespace v2xsim {

// Deterministic subframe-granular event loop binding BSM generation, DCC,
// SPS scheduling, PHY transmission, channel reception and sensing.
//
// Per-subframe ordering: control tick (mobility, DCC updates) first, then
// application-layer generation, then MAC/PHY transmission, then channel
// reception and sensing, then metrics collection. A packet generated at a
// subframe that is also its reservation's opportunity transmits immediately
// (MAC delay 0).

struct SimConfig {
  std::int64_t duration_ms = 120000;
  std::uint64_t seed = 1;
  bool dcc_enabled = false;
  std::int64_t control_tick_ms = 100;  // mobility + DCC update cadence
  // > 0 pins the DCC ITT to a fixed value (rate-control experiments where a
  // specific ITT such as 250 ms is under study); ignored with DCC off.
  std::int64_t itt_override_ms = 0;
  // Sensing-only lead-in added to every UE's randomized first generation.
  std::int64_t warmup_ms = 0;

  void validate() const;
};

struct RunResult {
  std::vector<PacketRecord> packets;  // transmitted packets, time-ordered
  std::vector<CollisionEvent> conflicts;
  FailureTaxonomy taxonomy;
  std::vector<OccupancyWindow> occupancy;      // one per complete 100 ms window
  std::vector<DccTickStats> dcc_trace;         // fleet means per control tick
  DistanceHistogram histogram_subframe;        // pair-subframe exposure estimator
  DistanceHistogram histogram_window;          // pair-window exposure estimator

  // Conservation counters: generated = transmitted + superseded + pending_at_end.
  std::uint64_t generated = 0;
  std::uint64_t transmitted = 0;
  std::uint64_t superseded = 0;
  std::uint64_t pending_at_end = 0;

  std::uint64_t selections = 0;            // select_resource invocations
  std::uint64_t relaxed_selections = 0;    // selections needing threshold relaxation

  RunResult() : histogram_subframe(50.0, 2000.0), histogram_window(50.0, 2000.0) {}
};

// First reserved opportunity at or after the generation time.
std::int64_t mac_enqueue(std::int64_t generation_ms, const Reservation& r);

// Builds the fleet from the scenario and simulates. All randomness derives
// from sim.seed via named substreams, so identical inputs give identical
// results regardless of platform scheduling.
RunResult run(const ScenarioConfig& scenario, const GridConfig& grid, const SpsConfig& sps,
              const DccConfig& dcc, const ChannelConfig& channel, const SimConfig& sim);

// Same loop over a caller-supplied fleet (fixtures with exact geometries).
// `geometry` supplies the road frame; fleet vehicle ids must be 0..N-1.
RunResult run_with_fleet(std::vector<VehicleState> fleet, const ScenarioConfig& geometry,
                         const GridConfig& grid, const SpsConfig& sps, const DccConfig& dcc,
                         const ChannelConfig& channel, const SimConfig& sim);

}  // namespace v2xsim
