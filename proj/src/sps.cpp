#include "v2xsim/sps.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "v2xsim/channel.hpp"

namespace v2xsim {

void SpsConfig::validate() const {
  if (shortlist_fraction <= 0 || shortlist_fraction > 1) {
    throw std::invalid_argument("sps: shortlist_fraction must be in (0, 1]");
  }
  if (prob_keep < 0 || prob_keep > 0.8) {
    throw std::invalid_argument("sps: prob_keep must be in [0, 0.8]");
  }
  if (rc_min < 1 || rc_min > rc_max) {
    throw std::invalid_argument("sps: need 1 <= rc_min <= rc_max");
  }
  if (th_step_db <= 0) {
    throw std::invalid_argument("sps: th_step_db must be positive");
  }
}

SensingWindow::SensingWindow(int span_ms, int subchannels)
    : span_ms_(span_ms), subchannels_(subchannels) {
  if (span_ms <= 0 || subchannels <= 0) {
    throw std::invalid_argument("sensing window: span and subchannels must be positive");
  }
  slots_.resize(span_ms);
  rssi_.assign(static_cast<std::size_t>(span_ms) * subchannels,
               std::numeric_limits<float>::quiet_NaN());
}

SensingWindow::Slot& SensingWindow::slot_for(std::int64_t subframe) {
  Slot& s = slots_[static_cast<std::size_t>(subframe % span_ms_)];
  if (s.subframe != subframe) {
    s.subframe = subframe;
    s.unmonitored = false;
    float* row = &rssi_[static_cast<std::size_t>(subframe % span_ms_) * subchannels_];
    std::fill(row, row + subchannels_, std::numeric_limits<float>::quiet_NaN());
  }
  return s;
}

void SensingWindow::record_observation(std::int64_t subframe, int subchannel,
                                       double s_rssi_dbm,
                                       const std::optional<DecodedInfo>& decoded) {
  if (subchannel < 0 || subchannel >= subchannels_) {
    throw std::out_of_range("sensing window: subchannel out of range");
  }
  Slot& s = slot_for(subframe);
  if (s.unmonitored) {
    throw std::logic_error("sensing window: observation in an unmonitored subframe");
  }
  rssi_[static_cast<std::size_t>(subframe % span_ms_) * subchannels_ + subchannel] =
      static_cast<float>(s_rssi_dbm);
  if (decoded) {
    decoded_.push_back({subframe, subchannel, decoded->rsrp_dbm, decoded->period_ms});
  }
  latest_ = std::max(latest_, subframe);
  advance_to(latest_ + 1);
}

void SensingWindow::record_own_transmission(std::int64_t subframe) {
  Slot& s = slot_for(subframe);
  s.unmonitored = true;
  float* row = &rssi_[static_cast<std::size_t>(subframe % span_ms_) * subchannels_];
  std::fill(row, row + subchannels_, std::numeric_limits<float>::quiet_NaN());
  latest_ = std::max(latest_, subframe);
}

void SensingWindow::advance_to(std::int64_t now) {
  while (!decoded_.empty() && decoded_.front().subframe < now - span_ms_) {
    decoded_.pop_front();
  }
}

std::optional<double> SensingWindow::s_rssi_dbm(std::int64_t subframe, int subchannel,
                                                std::int64_t now) const {
  if (subframe < now - span_ms_ || subframe >= now) {
    return std::nullopt;
  }
  const Slot& s = slots_[static_cast<std::size_t>(subframe % span_ms_)];
  if (s.subframe != subframe || s.unmonitored) {
    return std::nullopt;
  }
  const float v =
      rssi_[static_cast<std::size_t>(subframe % span_ms_) * subchannels_ + subchannel];
  if (std::isnan(v)) {
    return std::nullopt;
  }
  return static_cast<double>(v);
}

bool SensingWindow::is_unmonitored(std::int64_t subframe, std::int64_t now) const {
  if (subframe < now - span_ms_ || subframe >= now) {
    return false;
  }
  const Slot& s = slots_[static_cast<std::size_t>(subframe % span_ms_)];
  return s.subframe == subframe && s.unmonitored;
}

std::vector<std::int64_t> SensingWindow::unmonitored_subframes(std::int64_t now) const {
  std::vector<std::int64_t> out;
  for (const Slot& s : slots_) {
    if (s.subframe >= now - span_ms_ && s.subframe < now && s.unmonitored) {
      out.push_back(s.subframe);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

int SensingWindow::observation_count(std::int64_t now) const {
  int count = 0;
  for (const Slot& s : slots_) {
    if (s.subframe < 0 || s.subframe < now - span_ms_ || s.subframe >= now ||
        s.unmonitored) {
      continue;
    }
    const float* row = &rssi_[static_cast<std::size_t>(s.subframe % span_ms_) * subchannels_];
    for (int c = 0; c < subchannels_; ++c) {
      if (!std::isnan(row[c])) {
        ++count;
      }
    }
  }
  return count;
}

namespace {

// Exclusion works on congruence classes: a reservation decoded at subframe s
// with period p projects onto every future subframe congruent to s mod p.
// A per-period table of strongest projected RSRP makes candidate checks O(1);
// in practice all decoded reservations share the grid period, so there is
// one table.
struct PeriodTable {
  int period = 100;
  std::vector<double> max_rsrp;  // (residue, subchannel) -> strongest projection
};

struct ExclusionIndex {
  std::vector<PeriodTable> tables;
  std::vector<char> half_duplex;  // residue mod grid period -> own tx present
  int grid_period = 100;
  int subchannels = 2;

  double rsrp_at(std::int64_t subframe, int subchannel) const {
    double best = -std::numeric_limits<double>::infinity();
    for (const PeriodTable& t : tables) {
      const auto r =
          static_cast<std::size_t>(subframe % t.period) * subchannels + subchannel;
      best = std::max(best, t.max_rsrp[r]);
    }
    return best;
  }
  bool blocked(std::int64_t subframe) const {
    return half_duplex[static_cast<std::size_t>(subframe % grid_period)] != 0;
  }
};

ExclusionIndex build_exclusion_index(const SensingWindow& w, std::int64_t now,
                                     const GridConfig& grid) {
  ExclusionIndex idx;
  idx.grid_period = grid.reservation_period_ms;
  idx.subchannels = w.subchannels();
  idx.half_duplex.assign(idx.grid_period, 0);

  for (const DecodedReservation& d : w.decoded_reservations()) {
    if (d.subframe < now - w.span_ms() || d.subframe >= now || d.period_ms <= 0) {
      continue;
    }
    PeriodTable* table = nullptr;
    for (PeriodTable& t : idx.tables) {
      if (t.period == d.period_ms) {
        table = &t;
        break;
      }
    }
    if (table == nullptr) {
      idx.tables.push_back({d.period_ms,
                            std::vector<double>(static_cast<std::size_t>(d.period_ms) *
                                                    idx.subchannels,
                                                -std::numeric_limits<double>::infinity())});
      table = &idx.tables.back();
    }
    auto& cell = table->max_rsrp[static_cast<std::size_t>(d.subframe % d.period_ms) *
                                     idx.subchannels +
                                 d.subchannel];
    cell = std::max(cell, d.rsrp_dbm);
  }
  for (std::int64_t s : w.unmonitored_subframes(now)) {
    idx.half_duplex[static_cast<std::size_t>(s % idx.grid_period)] = 1;
  }
  return idx;
}

}  // namespace

std::vector<CsrId> exclusion_step(const std::vector<CsrId>& candidates,
                                  const SensingWindow& window, double th_dbm,
                                  std::int64_t now, const GridConfig& grid) {
  const ExclusionIndex idx = build_exclusion_index(window, now, grid);
  std::vector<CsrId> kept;
  kept.reserve(candidates.size());
  for (const CsrId& c : candidates) {
    if (idx.blocked(c.subframe)) {
      continue;
    }
    if (idx.rsrp_at(c.subframe, c.subchannel) > th_dbm) {
      continue;
    }
    kept.push_back(c);
  }
  return kept;
}

int draw_reselection_counter(const SpsConfig& cfg, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> dist(cfg.rc_min, cfg.rc_max);
  return dist(rng);
}

SelectionResult select_resource(std::int64_t now, const SensingWindow& window,
                                const SpsConfig& cfg, const GridConfig& grid,
                                std::mt19937_64& rng) {
  const int window_subframes = grid.selection_window_subframes;
  const int subchannels = grid.subchannels_per_subframe;

  std::vector<CsrId> candidates;
  candidates.reserve(static_cast<std::size_t>(window_subframes) * subchannels);
  for (int sf = 0; sf < window_subframes; ++sf) {
    for (int sc = 0; sc < subchannels; ++sc) {
      candidates.push_back({now + sf, sc});
    }
  }
  const int total = static_cast<int>(candidates.size());
  const int shortlist_target =
      static_cast<int>(std::ceil(cfg.shortlist_fraction * total));

  const ExclusionIndex idx = build_exclusion_index(window, now, grid);

  double th = cfg.th_sps_dbm;
  int rounds = 0;
  std::vector<CsrId> remaining;
  for (;;) {
    remaining.clear();
    bool rsrp_excluded_any = false;
    for (const CsrId& c : candidates) {
      if (idx.blocked(c.subframe)) {
        continue;
      }
      if (idx.rsrp_at(c.subframe, c.subchannel) > th) {
        rsrp_excluded_any = true;
        continue;
      }
      remaining.push_back(c);
    }
    if (static_cast<int>(remaining.size()) >= shortlist_target || !rsrp_excluded_any) {
      break;
    }
    th += cfg.th_step_db;
    ++rounds;
  }

  // Rank by mean S-RSSI over the period-aligned sensed subframes; resources
  // never sensed rank best. Ties break toward the lower linear index.
  struct Ranked {
    double metric;
    int linear;
    CsrId csr;
  };
  std::vector<Ranked> ranked;
  ranked.reserve(remaining.size());
  for (const CsrId& c : remaining) {
    double sum = 0;
    int n = 0;
    for (std::int64_t s : period_aligned_subframes(c.subframe, window.span_ms(),
                                                   grid.reservation_period_ms)) {
      if (auto v = window.s_rssi_dbm(s, c.subchannel, now)) {
        sum += *v;
        ++n;
      }
    }
    const double metric = n > 0 ? sum / n : -std::numeric_limits<double>::infinity();
    ranked.push_back({metric, csr_linear_index(c, now, grid), c});
  }
  std::sort(ranked.begin(), ranked.end(), [](const Ranked& a, const Ranked& b) {
    if (a.metric != b.metric) {
      return a.metric < b.metric;
    }
    return a.linear < b.linear;
  });

  const int shortlist_size = std::min<int>(shortlist_target, ranked.size());
  if (shortlist_size == 0) {
    throw std::logic_error("select_resource: no candidate survived exclusion");
  }
  std::uniform_int_distribution<int> pick(0, shortlist_size - 1);
  const CsrId chosen = ranked[pick(rng)].csr;

  SelectionResult result;
  result.reservation.next_subframe = chosen.subframe;
  result.reservation.subchannel = chosen.subchannel;
  result.reservation.period_ms = grid.reservation_period_ms;
  result.reservation.rc = draw_reselection_counter(cfg, rng);
  result.candidate_total = total;
  result.shortlist_size = shortlist_size;
  result.final_threshold_dbm = th;
  result.relaxation_rounds = rounds;
  return result;
}

OpportunityOutcome on_transmit_opportunity(const Reservation& r, std::int64_t now,
                                           const SpsConfig& cfg, std::mt19937_64& rng) {
  if (now != r.next_subframe) {
    throw std::logic_error("on_transmit_opportunity: called off-schedule");
  }
  if (r.rc <= 0) {
    throw std::logic_error("on_transmit_opportunity: reservation already expired");
  }
  OpportunityOutcome out;
  out.reservation = r;
  out.reservation.rc -= 1;
  out.reservation.next_subframe += r.period_ms;
  if (out.reservation.rc == 0) {
    std::bernoulli_distribution keep(cfg.prob_keep);
    if (keep(rng)) {
      out.reservation.rc = draw_reselection_counter(cfg, rng);
      out.kept = true;
    } else {
      out.reselect = true;
    }
  }
  return out;
}

}  // namespace v2xsim
