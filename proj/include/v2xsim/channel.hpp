#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "v2xsim/resource_grid.hpp"

namespace v2xsim {

// Parametric propagation and reception model: dual-slope log-distance path
// loss with log-normal shadowing, SINR-threshold decoding, and half-duplex
// reception.

struct ChannelConfig {
  double pl0_db = 47.86;        // reference loss at 1 m
  double n1 = 2.0;              // path-loss exponent below the breakpoint
  double n2 = 4.0;              // path-loss exponent beyond the breakpoint
  double breakpoint_m = 200.0;
  double shadow_sigma_db = 3.0;
  double noise_figure_db = 9.0;
  double carrier_mhz = 5860.0;
  double sinr_threshold_db = 2.8;

  void validate() const;
};

enum class FailureCause { none, propagation, collision, half_duplex };

struct RxOutcome {
  bool decoded = false;
  FailureCause cause = FailureCause::none;
  double sinr_db = 0.0;
};

// One transmission arriving at a given receiver in the current subframe.
struct ArrivingTransmission {
  std::uint32_t tx_id = 0;
  CsrId csr;
  double rx_power_dbm = 0.0;
};

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double lin) { return 10.0 * std::log10(lin); }

// Dual-slope log-distance loss; distances below 1 m clamp to 1 m.
double path_loss_db(double d_m, const ChannelConfig& cfg);

// -174 dBm/Hz thermal floor plus bandwidth and receiver noise figure.
double noise_floor_dbm(double bandwidth_hz, const ChannelConfig& cfg);

double received_power_dbm(double tx_power_dbm, double d_m, double shadow_sample_db,
                          const ChannelConfig& cfg);

// Per-transmission outcomes at one receiver for one subframe. Interference
// is summed over co-CSR transmissions only (same subframe and subchannel).
// A failed reception is a collision when it would have decoded with the
// interferers removed, otherwise a propagation loss. A receiver that is
// transmitting in this subframe decodes nothing (half duplex).
std::vector<RxOutcome> receive(const std::vector<ArrivingTransmission>& transmissions,
                               std::uint32_t receiver_id, bool receiver_transmitting,
                               double noise_dbm, const ChannelConfig& cfg);

}  // namespace v2xsim
