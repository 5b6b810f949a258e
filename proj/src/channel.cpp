#include "v2xsim/channel.hpp"

#include <algorithm>
#include <stdexcept>

namespace v2xsim {

void ChannelConfig::validate() const {
  if (n1 <= 0 || n2 < n1) {
    throw std::invalid_argument("channel: exponents must satisfy n2 >= n1 > 0");
  }
  if (shadow_sigma_db < 0) {
    throw std::invalid_argument("channel: shadow_sigma_db must be >= 0");
  }
  if (breakpoint_m < 1.0) {
    throw std::invalid_argument("channel: breakpoint_m must be >= 1 m");
  }
  if (carrier_mhz <= 0) {
    throw std::invalid_argument("channel: carrier_mhz must be positive");
  }
}

double path_loss_db(double d_m, const ChannelConfig& cfg) {
  const double d = std::max(d_m, 1.0);
  if (d <= cfg.breakpoint_m) {
    return cfg.pl0_db + 10.0 * cfg.n1 * std::log10(d);
  }
  return cfg.pl0_db + 10.0 * cfg.n1 * std::log10(cfg.breakpoint_m) +
         10.0 * cfg.n2 * std::log10(d / cfg.breakpoint_m);
}

double noise_floor_dbm(double bandwidth_hz, const ChannelConfig& cfg) {
  if (bandwidth_hz <= 0) {
    throw std::invalid_argument("noise_floor_dbm: bandwidth must be positive");
  }
  return -174.0 + 10.0 * std::log10(bandwidth_hz) + cfg.noise_figure_db;
}

double received_power_dbm(double tx_power_dbm, double d_m, double shadow_sample_db,
                          const ChannelConfig& cfg) {
  return tx_power_dbm - path_loss_db(d_m, cfg) + shadow_sample_db;
}

std::vector<RxOutcome> receive(const std::vector<ArrivingTransmission>& transmissions,
                               std::uint32_t receiver_id, bool receiver_transmitting,
                               double noise_dbm, const ChannelConfig& cfg) {
  std::vector<RxOutcome> outcomes(transmissions.size());
  if (receiver_transmitting) {
    for (auto& o : outcomes) {
      o.decoded = false;
      o.cause = FailureCause::half_duplex;
      o.sinr_db = 0.0;
    }
    return outcomes;
  }

  const double noise_lin = db_to_linear(noise_dbm);
  // Total arriving power per subchannel; all transmissions share one subframe.
  std::vector<double> subchannel_sum;
  for (const auto& tx : transmissions) {
    if (tx.csr.subchannel >= static_cast<int>(subchannel_sum.size())) {
      subchannel_sum.resize(tx.csr.subchannel + 1, 0.0);
    }
    if (tx.tx_id == receiver_id) {
      continue;
    }
    subchannel_sum[tx.csr.subchannel] += db_to_linear(tx.rx_power_dbm);
  }

  for (std::size_t i = 0; i < transmissions.size(); ++i) {
    const auto& tx = transmissions[i];
    auto& o = outcomes[i];
    if (tx.tx_id == receiver_id) {
      o.decoded = false;
      o.cause = FailureCause::half_duplex;
      continue;
    }
    const double signal = db_to_linear(tx.rx_power_dbm);
    const double interference = subchannel_sum[tx.csr.subchannel] - signal;
    const double sinr = signal / (noise_lin + interference);
    o.sinr_db = linear_to_db(sinr);
    if (o.sinr_db >= cfg.sinr_threshold_db) {
      o.decoded = true;
      o.cause = FailureCause::none;
    } else {
      o.decoded = false;
      const double snr_db = linear_to_db(signal / noise_lin);
      o.cause = snr_db >= cfg.sinr_threshold_db ? FailureCause::collision
                                                : FailureCause::propagation;
    }
  }
  return outcomes;
}

}  // namespace v2xsim
