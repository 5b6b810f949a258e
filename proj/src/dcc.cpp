#include "v2xsim/dcc.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace v2xsim {

void DccConfig::validate() const {
  if (itt_min_ms <= 0 || itt_min_ms > itt_max_ms) {
    throw std::invalid_argument("dcc: need 0 < itt_min_ms <= itt_max_ms");
  }
  if (p_min_dbm > p_max_dbm) {
    throw std::invalid_argument("dcc: need p_min_dbm <= p_max_dbm");
  }
  if (cbp_min < 0 || cbp_min >= cbp_max || cbp_max > 1) {
    throw std::invalid_argument("dcc: need 0 <= cbp_min < cbp_max <= 1");
  }
  if (smoothing_lambda <= 0 || smoothing_lambda > 1) {
    throw std::invalid_argument("dcc: smoothing_lambda must be in (0, 1]");
  }
  if (density_coeff <= 0 || density_radius_m <= 0) {
    throw std::invalid_argument("dcc: density_coeff and density_radius_m must be positive");
  }
  if (pte_threshold_m < 0 || cbp_window_ms <= 0) {
    throw std::invalid_argument("dcc: pte_threshold_m >= 0 and cbp_window_ms > 0 required");
  }
}

double estimate_density(std::span<const NeighborObservation> neighbors,
                        std::int64_t now_ms, double prev_smoothed,
                        const DccConfig& cfg) {
  int instantaneous = 0;
  for (const NeighborObservation& n : neighbors) {
    if (n.distance_m < 0) {
      throw std::invalid_argument("estimate_density: negative distance");
    }
    if (n.distance_m <= cfg.density_radius_m && now_ms - n.last_heard_ms <= 1000) {
      ++instantaneous;
    }
  }
  return (1.0 - cfg.smoothing_lambda) * prev_smoothed +
         cfg.smoothing_lambda * instantaneous;
}

double compute_itt(double smoothed_density, const DccConfig& cfg) {
  if (smoothed_density < 0) {
    throw std::invalid_argument("compute_itt: density must be >= 0");
  }
  const double itt = cfg.itt_min_ms * smoothed_density / cfg.density_coeff;
  return std::clamp(itt, cfg.itt_min_ms, cfg.itt_max_ms);
}

PteResult update_pte(const DccState& state, double true_x_m, double true_y_m,
                     std::int64_t now_ms, const DccConfig& cfg,
                     double road_length_m) {
  if (!state.last_tx_snapshot) {
    return {std::numeric_limits<double>::infinity(), true};
  }
  const TxSnapshot& snap = *state.last_tx_snapshot;
  const double dt_s = (now_ms - snap.timestamp_ms) / 1000.0;
  double pred_x = snap.x_m + snap.vx_mps * dt_s;
  const double pred_y = snap.y_m + snap.vy_mps * dt_s;
  double dx = true_x_m - pred_x;
  if (road_length_m > 0) {
    dx = std::remainder(dx, road_length_m);
  }
  const double pte = std::hypot(dx, true_y_m - pred_y);
  return {pte, pte > cfg.pte_threshold_m};
}

double update_cbp(int busy_subframes, int total_monitored, double previous_cbp) {
  if (busy_subframes < 0 || busy_subframes > total_monitored) {
    throw std::invalid_argument("update_cbp: need 0 <= busy <= total");
  }
  if (total_monitored == 0) {
    return previous_cbp;
  }
  return static_cast<double>(busy_subframes) / total_monitored;
}

double compute_tx_power(double cbp, const DccConfig& cfg) {
  if (cbp < 0 || cbp > 1) {
    throw std::invalid_argument("compute_tx_power: cbp must be in [0, 1]");
  }
  if (cbp <= cfg.cbp_min) {
    return cfg.p_max_dbm;
  }
  if (cbp >= cfg.cbp_max) {
    return cfg.p_min_dbm;
  }
  const double t = (cbp - cfg.cbp_min) / (cfg.cbp_max - cfg.cbp_min);
  return cfg.p_max_dbm + t * (cfg.p_min_dbm - cfg.p_max_dbm);
}

std::int64_t next_generation_time(std::int64_t last_gen_ms, double itt_ms,
                                  bool force_tx, std::int64_t now_ms) {
  if (force_tx) {
    return now_ms;
  }
  return last_gen_ms + static_cast<std::int64_t>(std::llround(itt_ms));
}

}  // namespace v2xsim
