#include "v2xsim/engine.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <unordered_map>

#include "v2xsim/rng.hpp"

namespace v2xsim {

void SimConfig::validate() const {
  if (duration_ms <= 0) throw std::invalid_argument("sim.duration_ms must be positive");
  if (control_tick_ms <= 0) {
    throw std::invalid_argument("sim.control_tick_ms must be positive");
  }
  if (itt_override_ms < 0) {
    throw std::invalid_argument("sim.itt_override_ms must be non-negative");
  }
  if (warmup_ms < 0) throw std::invalid_argument("sim.warmup_ms must be non-negative");
}

std::int64_t mac_enqueue(std::int64_t generation_ms, const Reservation& r) {
  if (r.period_ms <= 0) throw std::invalid_argument("reservation period must be positive");
  std::int64_t tx = r.next_subframe;
  if (tx < generation_ms) {
    std::int64_t gap = generation_ms - tx;
    std::int64_t periods = (gap + r.period_ms - 1) / r.period_ms;
    tx += periods * r.period_ms;
  }
  return tx;
}

namespace {

struct Neighbor {
  double x_m = 0.0;
  double y_m = 0.0;
  std::int64_t heard_ms = 0;
};

struct UeContext {
  SensingWindow sensing;
  std::optional<Reservation> reservation;
  DccState dcc;
  bool has_pending = false;
  std::int64_t pending_generation_ms = 0;
  std::int64_t next_generation_ms = 0;
  std::mt19937_64 select_rng;
  std::unordered_map<std::uint32_t, Neighbor> neighbors;
  std::vector<std::int8_t> cbp_ring;  // per subframe: 1 busy, 0 idle, -1 own tx
  bool transmitting_now = false;

  UeContext(int sensing_span_ms, int subchannels, int cbp_window_ms)
      : sensing(sensing_span_ms, subchannels),
        cbp_ring(static_cast<std::size_t>(cbp_window_ms), 0) {}
};

double ring_distance(double ax, double ay, double bx, double by, double road_length_m) {
  double dx = std::abs(ax - bx);
  if (road_length_m > 0) dx = std::min(dx, road_length_m - dx);
  return std::hypot(dx, ay - by);
}

struct TxEntry {
  std::uint32_t ue = 0;
  CsrId csr;
  double power_dbm = 0.0;
};

class Simulation {
 public:
  Simulation(std::vector<VehicleState> fleet, const ScenarioConfig& scenario,
             const GridConfig& grid, const SpsConfig& sps, const DccConfig& dcc,
             const ChannelConfig& channel, const SimConfig& sim)
      : fleet_(std::move(fleet)),
        scenario_(scenario),
        grid_(grid),
        sps_(sps),
        dcc_(dcc),
        channel_(channel),
        sim_(sim),
        noise_dbm_(noise_floor_dbm(grid.subchannel_bandwidth_hz(), channel)),
        noise_lin_(db_to_linear(noise_dbm_)),
        busy_thr_lin_(db_to_linear(dcc.cbp_busy_threshold_dbm)) {
    grid_.validate();
    sps_.validate();
    dcc_.validate();
    channel_.validate();
    sim_.validate();
    scenario_.validate();
    if (sim_.itt_override_ms > 0 &&
        (sim_.itt_override_ms < dcc_.itt_min_ms || sim_.itt_override_ms > dcc_.itt_max_ms)) {
      throw std::invalid_argument("sim.itt_override_ms outside [dcc.itt_min, dcc.itt_max]");
    }
    for (std::size_t i = 0; i < fleet_.size(); ++i) {
      if (fleet_[i].id != i) {
        throw std::invalid_argument("fleet vehicle ids must be 0..N-1 in order");
      }
    }
    if (scenario_.speed_jitter_sigma_mps > 0) {
      jitter_rng_ = make_stream(sim_.seed, StreamPurpose::speed_jitter, 0);
    }

    contexts_.reserve(fleet_.size());
    int sensing_span = 1000;
    for (std::size_t i = 0; i < fleet_.size(); ++i) {
      auto& ctx = contexts_.emplace_back(sensing_span, grid_.subchannels_per_subframe,
                                         dcc_.cbp_window_ms);
      ctx.select_rng = make_stream(sim_.seed, StreamPurpose::resource_select, i);
      auto offset_rng = make_stream(sim_.seed, StreamPurpose::generation_offset, i);
      ctx.next_generation_ms =
          sim_.warmup_ms +
          static_cast<std::int64_t>(offset_rng() % static_cast<std::uint64_t>(
                                                       grid_.reservation_period_ms));
      ctx.dcc.current_itt_ms = dcc_.itt_min_ms;
      ctx.dcc.tx_power_dbm = dcc_.p_max_dbm;
    }
  }

  RunResult run() {
    for (std::int64_t t = 0; t < sim_.duration_ms; ++t) {
      if (t % sim_.control_tick_ms == 0) control_tick(t);
      generate(t);
      transmit(t);
      propagate(t);
      close_window_if_needed(t);
    }
    for (const auto& ctx : contexts_) {
      if (ctx.has_pending) ++result_.pending_at_end;
    }
    return std::move(result_);
  }

 private:
  void control_tick(std::int64_t t) {
    if (t > 0) {
      step(fleet_, static_cast<double>(sim_.control_tick_ms), scenario_,
           jitter_rng_ ? &*jitter_rng_ : nullptr);
    }

    DccTickStats tick;
    tick.t_ms = t;
    std::vector<NeighborObservation> scratch;
    for (std::size_t i = 0; i < contexts_.size(); ++i) {
      auto& ctx = contexts_[i];
      const auto& v = fleet_[i];
      double x = v.position_m;
      double y = lateral_position_m(v, scenario_);

      int busy = 0;
      int monitored = 0;
      std::int64_t window = std::min<std::int64_t>(t, dcc_.cbp_window_ms);
      for (std::int64_t k = t - window; k < t; ++k) {
        auto flag = ctx.cbp_ring[static_cast<std::size_t>(k % dcc_.cbp_window_ms)];
        if (flag < 0) continue;
        ++monitored;
        busy += flag;
      }
      ctx.dcc.cbp = update_cbp(busy, monitored, ctx.dcc.cbp);

      if (sim_.dcc_enabled) {
        scratch.clear();
        for (auto it = ctx.neighbors.begin(); it != ctx.neighbors.end();) {
          if (t - it->second.heard_ms > 1000) {
            it = ctx.neighbors.erase(it);
            continue;
          }
          scratch.push_back({ring_distance(x, y, it->second.x_m, it->second.y_m,
                                           scenario_.road_length_m),
                             it->second.heard_ms});
          ++it;
        }
        ctx.dcc.smoothed_density =
            estimate_density(scratch, t, ctx.dcc.smoothed_density, dcc_);
        ctx.dcc.current_itt_ms = sim_.itt_override_ms > 0
                                     ? static_cast<double>(sim_.itt_override_ms)
                                     : compute_itt(ctx.dcc.smoothed_density, dcc_);
        ctx.dcc.tx_power_dbm = compute_tx_power(ctx.dcc.cbp, dcc_);

        // PTE override: only meaningful once neighbors hold a snapshot to
        // dead-reckon from; before the first transmission the randomized
        // start offset governs.
        if (ctx.dcc.last_tx_snapshot) {
          auto pte = update_pte(ctx.dcc, x, y, t, dcc_, scenario_.road_length_m);
          if (pte.force_tx) ctx.next_generation_ms = t;
        }
      } else {
        ctx.dcc.current_itt_ms = dcc_.itt_min_ms;
        ctx.dcc.tx_power_dbm = dcc_.p_max_dbm;
      }

      tick.mean_cbp += ctx.dcc.cbp;
      tick.mean_itt_ms += ctx.dcc.current_itt_ms;
      tick.mean_rate_hz += 1000.0 / ctx.dcc.current_itt_ms;
      tick.mean_power_dbm += ctx.dcc.tx_power_dbm;
      tick.mean_density += ctx.dcc.smoothed_density;
    }
    auto n = static_cast<double>(contexts_.size());
    tick.mean_cbp /= n;
    tick.mean_itt_ms /= n;
    tick.mean_rate_hz /= n;
    tick.mean_power_dbm /= n;
    tick.mean_density /= n;
    result_.dcc_trace.push_back(tick);
  }

  void generate(std::int64_t t) {
    for (std::size_t i = 0; i < contexts_.size(); ++i) {
      auto& ctx = contexts_[i];
      if (t != ctx.next_generation_ms) continue;
      if (ctx.has_pending) ++result_.superseded;
      ctx.has_pending = true;
      ctx.pending_generation_ms = t;
      ++result_.generated;

      if (!ctx.reservation) {
        ctx.sensing.advance_to(t);
        auto sel = select_resource(t, ctx.sensing, sps_, grid_, ctx.select_rng);
        ctx.reservation = sel.reservation;
        ++result_.selections;
        if (sel.relaxation_rounds > 0) ++result_.relaxed_selections;
      }

      double itt = sim_.dcc_enabled ? ctx.dcc.current_itt_ms : dcc_.itt_min_ms;
      ctx.next_generation_ms = next_generation_time(t, itt, false, t);
    }
  }

  void transmit(std::int64_t t) {
    txs_.clear();
    for (std::size_t i = 0; i < contexts_.size(); ++i) {
      auto& ctx = contexts_[i];
      ctx.transmitting_now = false;
      if (!ctx.reservation || ctx.reservation->next_subframe != t) continue;

      if (ctx.has_pending) {
        CsrId csr{t, ctx.reservation->subchannel};
        txs_.push_back({static_cast<std::uint32_t>(i), csr, ctx.dcc.tx_power_dbm});
        result_.packets.push_back({static_cast<std::uint32_t>(i),
                                   ctx.pending_generation_ms, t, csr, payload_bytes_});
        ++result_.transmitted;
        ctx.has_pending = false;
        ctx.transmitting_now = true;
        ctx.sensing.record_own_transmission(t);
        const auto& v = fleet_[i];
        // Kinematics advance only at control ticks, so the broadcast state is
        // the one sampled at the last tick; timestamping it with the transmit
        // subframe would make receivers dead-reckon from a stale position.
        std::int64_t sampled_ms = t - (t % sim_.control_tick_ms);
        ctx.dcc.last_tx_snapshot = TxSnapshot{v.position_m, lateral_position_m(v, scenario_),
                                              v.velocity_mps, 0.0, sampled_ms};
      }

      auto outcome = on_transmit_opportunity(*ctx.reservation, t, sps_, ctx.select_rng);
      if (outcome.reselect) {
        ctx.reservation.reset();
      } else {
        ctx.reservation = outcome.reservation;
      }
    }
  }

  void propagate(std::int64_t t) {
    // Conflicts and pair-subframe exposure among this subframe's transmitters.
    for (std::size_t a = 0; a < txs_.size(); ++a) {
      for (std::size_t b = a + 1; b < txs_.size(); ++b) {
        double d = pair_distance(fleet_[txs_[a].ue], fleet_[txs_[b].ue], scenario_);
        result_.histogram_subframe.add_exposure(d);
        if (txs_[a].csr == txs_[b].csr) {
          result_.histogram_subframe.add_conflict(d);
          result_.histogram_window.add_conflict(d);
          result_.conflicts.push_back({t, txs_[a].csr, txs_[a].ue, txs_[b].ue, d});
        }
      }
    }
    for (const auto& tx : txs_) {
      window_txs_.push_back({tx.ue, tx.csr, fleet_[tx.ue].position_m});
      window_participants_.try_emplace(
          tx.ue, std::pair{fleet_[tx.ue].position_m,
                           lateral_position_m(fleet_[tx.ue], scenario_)});
    }

    int subch = grid_.subchannels_per_subframe;
    for (std::size_t r = 0; r < contexts_.size(); ++r) {
      auto& ctx = contexts_[r];
      auto rid = static_cast<std::uint32_t>(r);

      arrivals_.clear();
      for (const auto& tx : txs_) {
        if (tx.ue == rid) continue;
        double d = pair_distance(fleet_[tx.ue], fleet_[rid], scenario_);
        double shadow =
            link_shadow_normal(sim_.seed, tx.ue, rid, t) * channel_.shadow_sigma_db;
        arrivals_.push_back(
            {tx.ue, tx.csr, received_power_dbm(tx.power_dbm, d, shadow, channel_)});
      }

      if (ctx.transmitting_now) {
        result_.taxonomy.half_duplex += arrivals_.size();
        ctx.cbp_ring[static_cast<std::size_t>(t % dcc_.cbp_window_ms)] = -1;
        continue;
      }

      rssi_lin_.assign(static_cast<std::size_t>(subch), noise_lin_);
      decoded_on_.assign(static_cast<std::size_t>(subch), std::nullopt);
      auto outcomes = receive(arrivals_, rid, false, noise_dbm_, channel_);
      for (std::size_t k = 0; k < arrivals_.size(); ++k) {
        const auto& a = arrivals_[k];
        rssi_lin_[static_cast<std::size_t>(a.csr.subchannel)] +=
            db_to_linear(a.rx_power_dbm);
        switch (outcomes[k].cause) {
          case FailureCause::none:
            ++result_.taxonomy.decoded;
            decoded_on_[static_cast<std::size_t>(a.csr.subchannel)] =
                DecodedInfo{a.rx_power_dbm, grid_.reservation_period_ms};
            ctx.neighbors[a.tx_id] = {fleet_[a.tx_id].position_m,
                                      lateral_position_m(fleet_[a.tx_id], scenario_), t};
            break;
          case FailureCause::propagation:
            ++result_.taxonomy.propagation;
            break;
          case FailureCause::collision:
            ++result_.taxonomy.collision;
            break;
          case FailureCause::half_duplex:
            ++result_.taxonomy.half_duplex;
            break;
        }
      }

      double max_lin = 0.0;
      for (int sc = 0; sc < subch; ++sc) {
        auto s = static_cast<std::size_t>(sc);
        ctx.sensing.record_observation(t, sc, linear_to_db(rssi_lin_[s]), decoded_on_[s]);
        max_lin = std::max(max_lin, rssi_lin_[s]);
      }
      ctx.cbp_ring[static_cast<std::size_t>(t % dcc_.cbp_window_ms)] =
          max_lin > busy_thr_lin_ ? 1 : 0;
    }
  }

  void close_window_if_needed(std::int64_t t) {
    std::int64_t window = grid_.reservation_period_ms;
    if ((t + 1) % window != 0) return;
    std::int64_t start = t + 1 - window;
    result_.occupancy.push_back(rb_occupancy_distribution(window_txs_, start, grid_));

    std::vector<std::pair<double, double>> positions;
    positions.reserve(window_participants_.size());
    for (std::uint32_t ue = 0; ue < fleet_.size(); ++ue) {
      auto it = window_participants_.find(ue);
      if (it != window_participants_.end()) positions.push_back(it->second);
    }
    for (std::size_t a = 0; a < positions.size(); ++a) {
      for (std::size_t b = a + 1; b < positions.size(); ++b) {
        result_.histogram_window.add_exposure(
            ring_distance(positions[a].first, positions[a].second, positions[b].first,
                          positions[b].second, scenario_.road_length_m));
      }
    }
    window_txs_.clear();
    window_participants_.clear();
  }

  std::vector<VehicleState> fleet_;
  ScenarioConfig scenario_;
  GridConfig grid_;
  SpsConfig sps_;
  DccConfig dcc_;
  ChannelConfig channel_;
  SimConfig sim_;
  double noise_dbm_;
  double noise_lin_;
  double busy_thr_lin_;
  static constexpr int payload_bytes_ = 190;

  std::vector<UeContext> contexts_;
  std::optional<std::mt19937_64> jitter_rng_;
  RunResult result_;

  std::vector<TxEntry> txs_;
  std::vector<ArrivingTransmission> arrivals_;
  std::vector<double> rssi_lin_;
  std::vector<std::optional<DecodedInfo>> decoded_on_;
  std::vector<TaggedTransmission> window_txs_;
  std::unordered_map<std::uint32_t, std::pair<double, double>> window_participants_;
};

}  // namespace

RunResult run(const ScenarioConfig& scenario, const GridConfig& grid, const SpsConfig& sps,
              const DccConfig& dcc, const ChannelConfig& channel, const SimConfig& sim) {
  scenario.validate();
  auto fleet = build_scenario(scenario, sim.seed);
  return Simulation(std::move(fleet), scenario, grid, sps, dcc, channel, sim).run();
}

RunResult run_with_fleet(std::vector<VehicleState> fleet, const ScenarioConfig& geometry,
                         const GridConfig& grid, const SpsConfig& sps, const DccConfig& dcc,
                         const ChannelConfig& channel, const SimConfig& sim) {
  return Simulation(std::move(fleet), geometry, grid, sps, dcc, channel, sim).run();
}

}  // namespace v2xsim
