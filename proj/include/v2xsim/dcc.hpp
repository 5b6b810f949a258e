#pragma once

#include <cstdint>
#include <optional>
#include <span>

namespace v2xsim {

// Distributed congestion control: density-driven inter-transmit time (rate
// control), position-tracking-error override, channel-busy-percentage
// estimation, and a CBP-to-power map (range control).

struct DccConfig {
  double itt_min_ms = 100.0;
  double itt_max_ms = 600.0;
  double density_coeff = 25.0;      // vehicles at which ITT starts to stretch
  double density_radius_m = 100.0;
  double smoothing_lambda = 0.05;   // EWMA factor, applied once per control tick
  double pte_threshold_m = 0.5;
  double p_min_dbm = 10.0;
  double p_max_dbm = 23.0;
  double cbp_min = 0.50;
  double cbp_max = 0.80;
  double cbp_busy_threshold_dbm = -94.0;
  int cbp_window_ms = 100;

  void validate() const;
};

// Position and kinematics advertised in the UE's most recent transmission;
// what neighbors dead-reckon this vehicle from.
struct TxSnapshot {
  double x_m = 0.0;
  double y_m = 0.0;
  double vx_mps = 0.0;
  double vy_mps = 0.0;
  std::int64_t timestamp_ms = 0;
};

struct DccState {
  double smoothed_density = 0.0;
  double current_itt_ms = 100.0;
  double cbp = 0.0;
  double tx_power_dbm = 23.0;
  std::optional<TxSnapshot> last_tx_snapshot;
};

struct NeighborObservation {
  double distance_m = 0.0;
  std::int64_t last_heard_ms = 0;
};

// One EWMA update of the smoothed density: neighbors closer than
// density_radius_m and heard within the last second count.
double estimate_density(std::span<const NeighborObservation> neighbors,
                        std::int64_t now_ms, double prev_smoothed,
                        const DccConfig& cfg);

// Linear rate control law, clamped to [itt_min, itt_max].
double compute_itt(double smoothed_density, const DccConfig& cfg);

struct PteResult {
  double pte_m = 0.0;
  bool force_tx = false;
};

// Distance between the true position and the position neighbors would
// dead-reckon from the last transmitted snapshot. With no snapshot yet the
// error is infinite and a transmission is forced. road_length_m > 0 wraps
// the longitudinal coordinate.
PteResult update_pte(const DccState& state, double true_x_m, double true_y_m,
                     std::int64_t now_ms, const DccConfig& cfg,
                     double road_length_m = 0.0);

// Busy fraction over the trailing CBP window; holds the previous value when
// nothing was monitored.
double update_cbp(int busy_subframes, int total_monitored, double previous_cbp);

// CBP-to-power map: full power up to cbp_min, minimum power beyond cbp_max,
// linear in dB between.
double compute_tx_power(double cbp, const DccConfig& cfg);

// Next application-layer generation time; a PTE override generates now.
std::int64_t next_generation_time(std::int64_t last_gen_ms, double itt_ms,
                                  bool force_tx, std::int64_t now_ms);

}  // namespace v2xsim
