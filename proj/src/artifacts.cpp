#include "v2xsim/artifacts.hpp"

#include <cmath>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <optional>

#include "json.hpp"
#include "v2xsim/digest.hpp"
#include "v2xsim/metrics.hpp"

namespace v2xsim {

namespace {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << content;
  if (!out) throw std::runtime_error("write failed: " + path);
}

std::string fig1_csv(const RunResult& r) {
  std::string out =
      "bin_lo_m,bin_hi_m,conflicts,pair_subframe_exposure,probability,"
      "pair_window_exposure,probability_window\n";
  const auto& hs = r.histogram_subframe;
  const auto& hw = r.histogram_window;
  for (int b = 0; b < hs.bins(); ++b) {
    double lo = b * hs.bin_width();
    out += fmt(lo) + "," + fmt(lo + hs.bin_width()) + ",";
    out += std::to_string(hs.conflicts_in_bin(b)) + ",";
    out += std::to_string(hs.exposure_in_bin(b)) + ",";
    auto p = hs.probability(b);
    out += p ? fmt(*p) : std::string("");
    out += "," + std::to_string(hw.exposure_in_bin(b)) + ",";
    auto pw = hw.probability(b);
    out += pw ? fmt(*pw) : std::string("");
    out += "\n";
  }
  return out;
}

std::string fig3_csv(const RunResult& r) {
  std::string out = "window_start_ms,occupancy,csr_count\n";
  for (const auto& w : r.occupancy) {
    for (std::size_t k = 0; k < w.histogram.size(); ++k) {
      out += std::to_string(w.window_start_ms) + "," + std::to_string(k) + "," +
             std::to_string(w.histogram[k]) + "\n";
    }
  }
  return out;
}

std::string fig4_csv(const std::vector<DistanceWindowStats>& series) {
  std::string out = "window_start_ms,count,mean_m,median_m,p5_m,p95_m\n";
  for (const auto& s : series) {
    out += std::to_string(s.t_ms) + "," + std::to_string(s.count) + "," + fmt(s.mean_m) +
           "," + fmt(s.median_m) + "," + fmt(s.p5_m) + "," + fmt(s.p95_m) + "\n";
  }
  return out;
}

std::string fig5_csv(const std::vector<DistanceWindowStats>& series,
                     const std::optional<std::int64_t>& settled_at, double reference,
                     double band) {
  std::string out = "window_start_ms,mean_m,reference_m,band_lo_m,band_hi_m,settled\n";
  for (const auto& s : series) {
    bool settled = settled_at && s.t_ms >= *settled_at;
    out += std::to_string(s.t_ms) + "," + fmt(s.mean_m) + "," + fmt(reference) + "," +
           fmt(reference - band) + "," + fmt(reference + band) + "," +
           (settled ? "1" : "0") + "\n";
  }
  return out;
}

std::string fig6_csv(const RunResult& r) {
  std::string out = "t_ms,mean_cbp,mean_itt_ms,mean_rate_hz,mean_power_dbm,mean_density\n";
  for (const auto& p : r.dcc_trace) {
    out += std::to_string(p.t_ms) + "," + fmt(p.mean_cbp) + "," + fmt(p.mean_itt_ms) + "," +
           fmt(p.mean_rate_hz) + "," + fmt(p.mean_power_dbm) + "," + fmt(p.mean_density) +
           "\n";
  }
  return out;
}

std::string fig7_csv(const PacketDelaySeries& series) {
  std::string out = "series,t_ms,value_ms\n";
  auto emit = [&out](const char* name, const std::vector<TimeSeriesPoint>& pts) {
    for (const auto& p : pts) {
      out += std::string(name) + "," + std::to_string(p.t_ms) + "," + fmt(p.value) + "\n";
    }
  };
  emit("delay", series.delay_ms);
  emit("itt", series.itt_ms);
  emit("itt_phy", series.itt_phy_ms);
  return out;
}

std::string packets_csv(const RunResult& r) {
  std::string out = "ue_id,generation_ms,transmission_ms,subframe,subchannel,payload_bytes\n";
  for (const auto& p : r.packets) {
    out += std::to_string(p.ue_id) + "," + std::to_string(p.generation_ms) + "," +
           std::to_string(p.transmission_ms) + "," + std::to_string(p.csr.subframe) + "," +
           std::to_string(p.csr.subchannel) + "," + std::to_string(p.payload_bytes) + "\n";
  }
  return out;
}

std::string conflicts_csv(const RunResult& r) {
  std::string out = "time_ms,subframe,subchannel,ue_a,ue_b,distance_m\n";
  for (const auto& c : r.conflicts) {
    out += std::to_string(c.time_ms) + "," + std::to_string(c.csr.subframe) + "," +
           std::to_string(c.csr.subchannel) + "," + std::to_string(c.ue_a) + "," +
           std::to_string(c.ue_b) + "," + fmt(c.distance_m) + "\n";
  }
  return out;
}

json summary_json(const FullConfig& cfg, const RunResult& r,
                  const std::optional<std::int64_t>& settled_at) {
  json j;
  j["scenario"] = cfg.scenario.name;
  j["seed"] = cfg.sim.seed;
  j["dcc_enabled"] = cfg.sim.dcc_enabled;
  j["duration_ms"] = cfg.sim.duration_ms;
  j["vehicle_count"] = cfg.scenario.vehicle_count;

  j["packets"]["generated"] = r.generated;
  j["packets"]["transmitted"] = r.transmitted;
  j["packets"]["superseded"] = r.superseded;
  j["packets"]["pending_at_end"] = r.pending_at_end;

  j["receptions"]["decoded"] = r.taxonomy.decoded;
  j["receptions"]["propagation"] = r.taxonomy.propagation;
  j["receptions"]["collision"] = r.taxonomy.collision;
  j["receptions"]["half_duplex"] = r.taxonomy.half_duplex;

  j["conflicts"]["total"] = r.histogram_subframe.total_conflicts();
  j["conflicts"]["fraction_below_500m"] = r.histogram_subframe.conflict_fraction_below(500);
  j["conflicts"]["settling_ms"] =
      settled_at ? json(*settled_at) : json(nullptr);

  if (!r.occupancy.empty()) {
    j["occupancy"]["p99"] = occupancy_quantile(r.occupancy, 0.99);
    j["occupancy"]["windows"] = r.occupancy.size();
  }

  if (!r.dcc_trace.empty()) {
    const auto& last = r.dcc_trace.back();
    j["dcc_final"]["mean_cbp"] = last.mean_cbp;
    j["dcc_final"]["mean_itt_ms"] = last.mean_itt_ms;
    j["dcc_final"]["mean_rate_hz"] = last.mean_rate_hz;
    j["dcc_final"]["mean_power_dbm"] = last.mean_power_dbm;
    j["dcc_final"]["mean_density"] = last.mean_density;
  }

  j["selections"]["total"] = r.selections;
  j["selections"]["with_relaxation"] = r.relaxed_selections;

  j["estimators"]["probability"] =
      "conflicts / pair-subframe exposure; a pair is exposed once per subframe in "
      "which both UEs transmit, binned by their distance in that subframe";
  j["estimators"]["probability_window"] =
      "conflicts / pair-window exposure; a pair is exposed once per 100 ms window in "
      "which both UEs transmit at least once";
  j["estimators"]["settling"] =
      "windowed mean conflict distance (500 ms windows), band 10% of the mean over "
      "the final half of the run, hold 2000 ms";
  return j;
}

}  // namespace

std::string utc_timestamp() {
  std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::vector<std::string> write_run_artifacts(const std::string& out_dir,
                                             const FullConfig& cfg, const RunResult& result,
                                             const std::string& started_utc,
                                             const std::string& finished_utc) {
  fs::create_directories(out_dir);
  std::vector<std::string> written;
  auto cleanup = [&] {
    for (const auto& name : written) {
      std::error_code ec;
      fs::remove(fs::path(out_dir) / name, ec);
    }
  };

  try {
    auto distance_series = collision_distance_timeseries(result.conflicts, 500);
    std::vector<TimeSeriesPoint> mean_series;
    mean_series.reserve(distance_series.size());
    for (const auto& s : distance_series) mean_series.push_back({s.t_ms, s.mean_m});

    std::optional<std::int64_t> settled_at;
    double reference = 0.0;
    if (!mean_series.empty() &&
        mean_series.back().t_ms - mean_series.front().t_ms >= 2000) {
      settled_at = settling_time(mean_series, 0.10, 2000);
      std::int64_t half =
          mean_series.front().t_ms +
          (mean_series.back().t_ms - mean_series.front().t_ms) / 2;
      int n = 0;
      for (const auto& p : mean_series) {
        if (p.t_ms >= half) {
          reference += p.value;
          ++n;
        }
      }
      if (n > 0) reference /= n;
    }

    auto delay_series = mac_delay_and_itt_phy(result.packets);

    auto emit = [&](const std::string& name, const std::string& content) {
      write_file((fs::path(out_dir) / name).string(), content);
      written.push_back(name);
    };

    emit("config.ini", serialize_config(cfg));
    emit("fig1_conflict_probability.csv", fig1_csv(result));
    emit("fig3_rb_occupancy.csv", fig3_csv(result));
    emit("fig4_conflict_distance.csv", fig4_csv(distance_series));
    emit("fig5_settling.csv",
         fig5_csv(distance_series, settled_at, reference, 0.10 * std::abs(reference)));
    emit("fig6_dcc_trace.csv", fig6_csv(result));
    emit("fig7_mac_delay.csv", fig7_csv(delay_series));
    emit("packets.csv", packets_csv(result));
    emit("conflicts.csv", conflicts_csv(result));

    json summary = summary_json(cfg, result, settled_at);
    emit("summary.json", summary.dump(2) + "\n");

    json manifest;
    manifest["tool"] = "v2xsim";
    manifest["version"] = kToolVersion;
    manifest["seed"] = cfg.sim.seed;
    manifest["started_utc"] = started_utc;
    manifest["finished_utc"] = finished_utc;
    manifest["config"] = serialize_config(cfg);
    manifest["files"] = json::object();
    for (const auto& name : written) {
      manifest["files"][name] = sha256_file_hex((fs::path(out_dir) / name).string());
    }
    emit("manifest.json", manifest.dump(2) + "\n");
  } catch (...) {
    cleanup();
    throw;
  }
  return written;
}

}  // namespace v2xsim
