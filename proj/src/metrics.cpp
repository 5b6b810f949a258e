#include "v2xsim/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <unordered_map>

namespace v2xsim {

std::vector<CollisionEvent> conflicts_in_subframe(
    const std::vector<TaggedTransmission>& transmissions,
    const std::vector<std::vector<double>>& pair_distances, std::int64_t time_ms) {
  if (pair_distances.size() != transmissions.size()) {
    throw std::invalid_argument("pair_distances must be square over transmissions");
  }
  std::vector<CollisionEvent> events;
  for (std::size_t i = 0; i < transmissions.size(); ++i) {
    if (pair_distances[i].size() != transmissions.size()) {
      throw std::invalid_argument("pair_distances must be square over transmissions");
    }
    for (std::size_t j = i + 1; j < transmissions.size(); ++j) {
      if (transmissions[i].csr == transmissions[j].csr) {
        events.push_back({time_ms, transmissions[i].csr, transmissions[i].ue_id,
                          transmissions[j].ue_id, pair_distances[i][j]});
      }
    }
  }
  return events;
}

DistanceHistogram::DistanceHistogram(double bin_width_m, double max_distance_m)
    : bin_width_m_(bin_width_m) {
  if (bin_width_m <= 0 || max_distance_m <= bin_width_m) {
    throw std::invalid_argument("invalid distance histogram geometry");
  }
  auto n = static_cast<std::size_t>(std::ceil(max_distance_m / bin_width_m));
  conflicts_.assign(n, 0);
  exposure_.assign(n, 0);
}

int DistanceHistogram::bin_for(double distance_m) const {
  if (distance_m < 0) return -1;
  auto bin = static_cast<int>(distance_m / bin_width_m_);
  if (bin >= static_cast<int>(conflicts_.size())) return -1;
  return bin;
}

void DistanceHistogram::add_exposure(double distance_m, std::uint64_t count) {
  int bin = bin_for(distance_m);
  if (bin >= 0) exposure_[static_cast<std::size_t>(bin)] += count;
}

void DistanceHistogram::add_conflict(double distance_m, std::uint64_t count) {
  int bin = bin_for(distance_m);
  if (bin >= 0) conflicts_[static_cast<std::size_t>(bin)] += count;
}

std::uint64_t DistanceHistogram::total_conflicts() const {
  std::uint64_t total = 0;
  for (auto c : conflicts_) total += c;
  return total;
}

std::optional<double> DistanceHistogram::probability(int bin) const {
  if (bin < 0 || bin >= bins()) throw std::out_of_range("histogram bin");
  auto b = static_cast<std::size_t>(bin);
  if (exposure_[b] == 0) return std::nullopt;
  return static_cast<double>(conflicts_[b]) / static_cast<double>(exposure_[b]);
}

std::optional<double> DistanceHistogram::pooled_probability(double lo_m, double hi_m) const {
  std::uint64_t c = 0;
  std::uint64_t e = 0;
  for (int b = 0; b < bins(); ++b) {
    double bin_lo = b * bin_width_m_;
    if (bin_lo >= lo_m && bin_lo < hi_m) {
      c += conflicts_[static_cast<std::size_t>(b)];
      e += exposure_[static_cast<std::size_t>(b)];
    }
  }
  if (e == 0) return std::nullopt;
  return static_cast<double>(c) / static_cast<double>(e);
}

double DistanceHistogram::conflict_fraction_below(double distance_m) const {
  std::uint64_t total = total_conflicts();
  if (total == 0) return 0.0;
  std::uint64_t below = 0;
  for (int b = 0; b < bins(); ++b) {
    if ((b + 1) * bin_width_m_ <= distance_m) {
      below += conflicts_[static_cast<std::size_t>(b)];
    }
  }
  return static_cast<double>(below) / static_cast<double>(total);
}

OccupancyWindow rb_occupancy_distribution(
    const std::vector<TaggedTransmission>& window_transmissions,
    std::int64_t window_start_ms, const GridConfig& grid) {
  // Distinct UEs per CSR; a retransmitting UE on the same CSR counts once.
  std::map<CsrId, std::vector<std::uint32_t>> per_csr;
  for (const auto& tx : window_transmissions) {
    auto& ues = per_csr[tx.csr];
    if (std::find(ues.begin(), ues.end(), tx.ue_id) == ues.end()) {
      ues.push_back(tx.ue_id);
    }
  }

  OccupancyWindow out;
  out.window_start_ms = window_start_ms;
  int total_csrs = grid.csrs_per_window();
  for (const auto& [csr, ues] : per_csr) {
    auto k = static_cast<int>(ues.size());
    out.max_occupancy = std::max(out.max_occupancy, k);
    if (static_cast<int>(out.histogram.size()) <= k) out.histogram.resize(k + 1, 0);
    ++out.histogram[static_cast<std::size_t>(k)];
  }
  if (out.histogram.empty()) out.histogram.resize(1, 0);
  out.unutilized = total_csrs - static_cast<int>(per_csr.size());
  out.histogram[0] = out.unutilized;

  std::int64_t occupant_sum = 0;
  for (std::size_t k = 0; k < out.histogram.size(); ++k) {
    occupant_sum += static_cast<std::int64_t>(k) * out.histogram[k];
  }
  out.mean_occupancy = static_cast<double>(occupant_sum) / total_csrs;
  return out;
}

double occupancy_quantile(const std::vector<OccupancyWindow>& windows, double q) {
  if (q < 0.0 || q > 1.0) throw std::invalid_argument("quantile out of range");
  std::vector<int> pooled;
  for (const auto& w : windows) {
    for (std::size_t k = 0; k < w.histogram.size(); ++k) {
      pooled.insert(pooled.end(), static_cast<std::size_t>(w.histogram[k]),
                    static_cast<int>(k));
    }
  }
  if (pooled.empty()) throw std::invalid_argument("no occupancy windows");
  std::sort(pooled.begin(), pooled.end());
  auto rank = static_cast<std::size_t>(std::ceil(q * pooled.size()));
  if (rank > 0) --rank;
  return pooled[rank];
}

namespace {

double quantile_sorted(const std::vector<double>& sorted, double q) {
  if (sorted.empty()) return 0.0;
  if (sorted.size() == 1) return sorted[0];
  double pos = q * (sorted.size() - 1);
  auto lo = static_cast<std::size_t>(pos);
  double frac = pos - lo;
  if (lo + 1 >= sorted.size()) return sorted.back();
  return sorted[lo] * (1.0 - frac) + sorted[lo + 1] * frac;
}

}  // namespace

std::vector<DistanceWindowStats> collision_distance_timeseries(
    const std::vector<CollisionEvent>& events, std::int64_t window_ms) {
  if (window_ms <= 0) throw std::invalid_argument("window_ms must be positive");
  std::map<std::int64_t, std::vector<double>> grouped;
  for (const auto& e : events) {
    grouped[(e.time_ms / window_ms) * window_ms].push_back(e.distance_m);
  }
  std::vector<DistanceWindowStats> out;
  for (auto& [start, distances] : grouped) {
    std::sort(distances.begin(), distances.end());
    DistanceWindowStats s;
    s.t_ms = start;
    s.count = static_cast<int>(distances.size());
    double sum = 0.0;
    for (double d : distances) sum += d;
    s.mean_m = sum / distances.size();
    s.median_m = quantile_sorted(distances, 0.5);
    s.p5_m = quantile_sorted(distances, 0.05);
    s.p95_m = quantile_sorted(distances, 0.95);
    out.push_back(s);
  }
  return out;
}

std::vector<DccTickStats> dcc_timeseries(const std::vector<DccTickStats>& ticks,
                                         std::int64_t window_ms) {
  if (window_ms <= 0) throw std::invalid_argument("window_ms must be positive");
  std::map<std::int64_t, std::vector<const DccTickStats*>> grouped;
  for (const auto& t : ticks) {
    grouped[(t.t_ms / window_ms) * window_ms].push_back(&t);
  }
  std::vector<DccTickStats> out;
  for (const auto& [start, members] : grouped) {
    DccTickStats agg;
    agg.t_ms = start;
    for (const auto* m : members) {
      agg.mean_cbp += m->mean_cbp;
      agg.mean_itt_ms += m->mean_itt_ms;
      agg.mean_rate_hz += m->mean_rate_hz;
      agg.mean_power_dbm += m->mean_power_dbm;
      agg.mean_density += m->mean_density;
    }
    auto n = static_cast<double>(members.size());
    agg.mean_cbp /= n;
    agg.mean_itt_ms /= n;
    agg.mean_rate_hz /= n;
    agg.mean_power_dbm /= n;
    agg.mean_density /= n;
    out.push_back(agg);
  }
  return out;
}

PacketDelaySeries mac_delay_and_itt_phy(const std::vector<PacketRecord>& records) {
  PacketDelaySeries out;
  struct Last {
    std::int64_t generation_ms = 0;
    std::int64_t transmission_ms = 0;
    bool seen = false;
  };
  std::unordered_map<std::uint32_t, Last> last;
  for (const auto& r : records) {
    out.delay_ms.push_back(
        {r.transmission_ms, static_cast<double>(r.transmission_ms - r.generation_ms)});
    auto& l = last[r.ue_id];
    if (l.seen) {
      if (r.generation_ms < l.generation_ms || r.transmission_ms < l.transmission_ms) {
        throw std::invalid_argument("packet records must be time-ordered per UE");
      }
      out.itt_ms.push_back(
          {r.generation_ms, static_cast<double>(r.generation_ms - l.generation_ms)});
      out.itt_phy_ms.push_back(
          {r.transmission_ms, static_cast<double>(r.transmission_ms - l.transmission_ms)});
    }
    l.generation_ms = r.generation_ms;
    l.transmission_ms = r.transmission_ms;
    l.seen = true;
  }
  return out;
}

std::optional<std::int64_t> settling_time(const std::vector<TimeSeriesPoint>& series,
                                          double band_fraction, std::int64_t hold_ms) {
  if (series.empty()) throw std::invalid_argument("empty series");
  if (band_fraction <= 0) throw std::invalid_argument("band_fraction must be positive");
  std::int64_t t0 = series.front().t_ms;
  std::int64_t t1 = series.back().t_ms;
  if (t1 - t0 < hold_ms) throw std::invalid_argument("series shorter than hold window");

  // Steady-state reference: mean over the final half of the run.
  std::int64_t half = t0 + (t1 - t0) / 2;
  double ref_sum = 0.0;
  int ref_n = 0;
  for (const auto& p : series) {
    if (p.t_ms >= half) {
      ref_sum += p.value;
      ++ref_n;
    }
  }
  double reference = ref_sum / ref_n;
  double band = band_fraction * std::abs(reference);

  auto in_band = [&](double v) { return std::abs(v - reference) <= band; };

  // First index from which every sample within [t, t+hold_ms] is in band and
  // the series never leaves the band afterwards up to t+hold_ms.
  for (std::size_t i = 0; i < series.size(); ++i) {
    if (!in_band(series[i].value)) continue;
    std::int64_t start = series[i].t_ms;
    if (start + hold_ms > t1) break;
    bool ok = true;
    for (std::size_t j = i; j < series.size() && series[j].t_ms <= start + hold_ms; ++j) {
      if (!in_band(series[j].value)) {
        ok = false;
        break;
      }
    }
    if (ok) return start;
  }
  return std::nullopt;
}

}  // namespace v2xsim
