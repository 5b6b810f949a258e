#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace v2xsim {

// Straight multi-lane highway treated as a ring: positions wrap at
// road_length_m so the fleet density stays stationary over arbitrarily long
// runs. Lanes 0..lanes/2-1 travel in the positive direction, the rest in the
// negative direction.

struct ScenarioConfig {
  std::string name = "freeway-high";
  int vehicle_count = 300;
  double density_per_km_lane = 7.0;
  double speed_kmh = 140.0;
  double road_length_m = 3600.0;
  int lanes = 12;
  double lane_width_m = 3.5;
  double speed_jitter_sigma_mps = 0.0;

  void validate() const;
};

struct VehicleState {
  std::uint32_t id = 0;
  int lane = 0;
  double position_m = 0.0;   // longitudinal, in [0, road_length)
  double velocity_mps = 0.0; // signed by direction of travel
};

// The five built-in traffic scenarios; throws std::invalid_argument on an
// unknown name. "custom" keeps whatever counts the caller fills in.
ScenarioConfig scenario_preset(const std::string& name);
std::vector<std::string> scenario_names();

// Vehicles spread uniformly at random along each lane.
std::vector<VehicleState> build_scenario(const ScenarioConfig& cfg, std::uint64_t seed);

// Advance kinematics by dt_ms with wrap-around. When jitter is configured a
// zero-mean Gaussian speed perturbation is applied per vehicle per step.
void step(std::vector<VehicleState>& fleet, double dt_ms, const ScenarioConfig& cfg,
          std::mt19937_64* jitter_rng = nullptr);

// Euclidean distance on the ring: shortest wrap-around longitudinal
// separation combined with the lateral lane offset.
double pair_distance(const VehicleState& a, const VehicleState& b,
                     const ScenarioConfig& cfg);

double lateral_position_m(const VehicleState& v, const ScenarioConfig& cfg);

}  // namespace v2xsim
