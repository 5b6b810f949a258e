#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "v2xsim/artifacts.hpp"
#include "v2xsim/config.hpp"
#include "v2xsim/engine.hpp"
#include "v2xsim/plot.hpp"

namespace {

int cmd_run(const std::string& config_path, const std::string& scenario,
            const std::string& dcc, bool seed_set, std::uint64_t seed,
            std::int64_t duration_ms, const std::string& out_dir) {
  v2xsim::FullConfig cfg;
  if (!config_path.empty()) {
    cfg = v2xsim::load_config_file(config_path);
  }

  if (!scenario.empty()) {
    cfg.scenario = v2xsim::scenario_preset(scenario);
  }
  if (!dcc.empty()) {
    if (dcc != "on" && dcc != "off") {
      throw std::runtime_error("--dcc must be 'on' or 'off'");
    }
    cfg.sim.dcc_enabled = dcc == "on";
  }
  if (seed_set) {
    cfg.sim.seed = seed;
  } else if (const char* env = std::getenv("V2XSIM_SEED")) {
    cfg.sim.seed = std::strtoull(env, nullptr, 10);
  }
  if (duration_ms > 0) cfg.sim.duration_ms = duration_ms;
  cfg.validate();

  std::string started = v2xsim::utc_timestamp();
  auto result = v2xsim::run(cfg.scenario, cfg.grid, cfg.sps, cfg.dcc, cfg.channel, cfg.sim);
  std::string finished = v2xsim::utc_timestamp();

  auto files = v2xsim::write_run_artifacts(out_dir, cfg, result, started, finished);
  std::cout << "wrote " << files.size() << " files to " << out_dir << "\n";
  std::cout << "generated=" << result.generated << " transmitted=" << result.transmitted
            << " conflicts=" << result.conflicts.size() << "\n";
  return 0;
}

int cmd_plot(const std::string& in_dir, const std::string& figure) {
  auto svg = v2xsim::render_figure(in_dir, figure);
  auto path = (std::filesystem::path(in_dir) / (figure + ".svg")).string();
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << svg;
  if (!out) throw std::runtime_error("write failed: " + path);
  std::cout << "wrote " << path << "\n";
  return 0;
}

int cmd_scenarios() {
  for (const auto& name : v2xsim::scenario_names()) {
    auto s = v2xsim::scenario_preset(name);
    std::printf("%-14s %5d vehicles  %6.1f veh/(km.lane)  %5.1f km/h\n", name.c_str(),
                s.vehicle_count, s.density_per_km_lane, s.speed_kmh);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"sidelink broadcast simulator: sensing-based scheduling with congestion control"};
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "simulate one scenario and write artifacts");
  std::string scenario;
  std::string dcc;
  std::uint64_t seed = 0;
  std::int64_t duration_ms = 0;
  std::string config_path;
  std::string out_dir = "out";
  run->add_option("--scenario", scenario, "scenario preset name (see `scenarios`)");
  run->add_option("--dcc", dcc, "congestion control: on|off");
  auto* seed_opt = run->add_option("--seed", seed, "run seed (fallback: V2XSIM_SEED)");
  run->add_option("--duration-ms", duration_ms, "simulated time in ms");
  run->add_option("--config", config_path, "config file path");
  run->add_option("--out", out_dir, "output directory");

  auto* plot = app.add_subcommand("plot", "render an SVG figure from a run's CSVs");
  std::string in_dir;
  std::string figure;
  plot->add_option("--in", in_dir, "run output directory")->required();
  plot->add_option("--figure", figure, "fig1|fig3|fig4|fig5|fig6|fig7")->required();

  auto* scenarios = app.add_subcommand("scenarios", "list built-in scenario presets");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) {
      return cmd_run(config_path, scenario, dcc, seed_opt->count() > 0, seed, duration_ms,
                     out_dir);
    }
    if (plot->parsed()) return cmd_plot(in_dir, figure);
    if (scenarios->parsed()) return cmd_scenarios();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
