#include "v2xsim/mobility.hpp"

#include <cmath>
#include <stdexcept>

#include "v2xsim/rng.hpp"

namespace v2xsim {

void ScenarioConfig::validate() const {
  if (vehicle_count <= 0) {
    throw std::invalid_argument("scenario: vehicle_count must be positive");
  }
  if (road_length_m <= 0 || lanes <= 0 || lanes % 2 != 0) {
    throw std::invalid_argument("scenario: road_length_m > 0 and an even lane count required");
  }
  if (lane_width_m < 0 || speed_kmh < 0 || speed_jitter_sigma_mps < 0) {
    throw std::invalid_argument("scenario: widths, speeds and jitter must be >= 0");
  }
  if (density_per_km_lane > 0) {
    const double implied = density_per_km_lane * (road_length_m / 1000.0) * lanes;
    if (std::abs(vehicle_count - implied) > 0.01 * implied) {
      throw std::invalid_argument("scenario: vehicle_count deviates more than 1% from density");
    }
  }
}

ScenarioConfig scenario_preset(const std::string& name) {
  ScenarioConfig cfg;
  cfg.name = name;
  if (name == "freeway-high") {
    cfg.vehicle_count = 300;
    cfg.density_per_km_lane = 7.0;
    cfg.speed_kmh = 140.0;
  } else if (name == "freeway-low") {
    cfg.vehicle_count = 600;
    cfg.density_per_km_lane = 14.0;
    cfg.speed_kmh = 70.0;
  } else if (name == "urban-medium") {
    cfg.vehicle_count = 1200;
    cfg.density_per_km_lane = 28.0;
    cfg.speed_kmh = 15.0;
  } else if (name == "urban-high") {
    cfg.vehicle_count = 2400;
    cfg.density_per_km_lane = 56.0;
    cfg.speed_kmh = 15.0;
  } else if (name == "urban-ultra") {
    cfg.vehicle_count = 4800;
    cfg.density_per_km_lane = 111.0;
    cfg.speed_kmh = 15.0;
  } else if (name == "custom") {
    cfg.density_per_km_lane = 0.0;  // density check skipped for custom fleets
  } else {
    throw std::invalid_argument("unknown scenario: " + name);
  }
  return cfg;
}

std::vector<std::string> scenario_names() {
  return {"freeway-high", "freeway-low", "urban-medium", "urban-high", "urban-ultra"};
}

std::vector<VehicleState> build_scenario(const ScenarioConfig& cfg, std::uint64_t seed) {
  cfg.validate();
  auto rng = make_stream(seed, StreamPurpose::placement, 0);
  std::uniform_real_distribution<double> along(0.0, cfg.road_length_m);

  std::vector<VehicleState> fleet;
  fleet.reserve(cfg.vehicle_count);
  const double speed_mps = cfg.speed_kmh / 3.6;
  for (int i = 0; i < cfg.vehicle_count; ++i) {
    VehicleState v;
    v.id = static_cast<std::uint32_t>(i);
    v.lane = i % cfg.lanes;
    v.position_m = along(rng);
    v.velocity_mps = v.lane < cfg.lanes / 2 ? speed_mps : -speed_mps;
    fleet.push_back(v);
  }
  return fleet;
}

void step(std::vector<VehicleState>& fleet, double dt_ms, const ScenarioConfig& cfg,
          std::mt19937_64* jitter_rng) {
  if (dt_ms <= 0) {
    throw std::invalid_argument("step: dt must be positive");
  }
  const double dt_s = dt_ms / 1000.0;
  std::normal_distribution<double> jitter(0.0, cfg.speed_jitter_sigma_mps);
  for (auto& v : fleet) {
    double velocity = v.velocity_mps;
    if (cfg.speed_jitter_sigma_mps > 0 && jitter_rng != nullptr) {
      velocity += jitter(*jitter_rng);
    }
    double pos = std::fmod(v.position_m + velocity * dt_s, cfg.road_length_m);
    if (pos < 0) {
      pos += cfg.road_length_m;
    }
    v.position_m = pos;
  }
}

double lateral_position_m(const VehicleState& v, const ScenarioConfig& cfg) {
  return v.lane * cfg.lane_width_m;
}

double pair_distance(const VehicleState& a, const VehicleState& b,
                     const ScenarioConfig& cfg) {
  double dx = std::abs(a.position_m - b.position_m);
  dx = std::min(dx, cfg.road_length_m - dx);
  const double dy = lateral_position_m(a, cfg) - lateral_position_m(b, cfg);
  return std::hypot(dx, dy);
}

}  // namespace v2xsim
