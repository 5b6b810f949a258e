#include "v2xsim/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <vector>

namespace v2xsim {

void FullConfig::validate() const {
  grid.validate();
  sps.validate();
  dcc.validate();
  channel.validate();
  scenario.validate();
  sim.validate();
}

namespace {

std::string trim(const std::string& s) {
  auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

[[noreturn]] void fail(int line, const std::string& msg) {
  throw ConfigError("config line " + std::to_string(line) + ": " + msg);
}

double parse_double(const std::string& raw, int line, const std::string& key) {
  const char* first = raw.data();
  const char* last = raw.data() + raw.size();
  double out{};
  auto [ptr, ec] = std::from_chars(first, last, out);
  if (ec != std::errc{} || ptr != last) {
    fail(line, "key '" + key + "': expected a number, got '" + raw + "'");
  }
  return out;
}

std::int64_t parse_int(const std::string& raw, int line, const std::string& key) {
  const char* first = raw.data();
  const char* last = raw.data() + raw.size();
  std::int64_t out{};
  auto [ptr, ec] = std::from_chars(first, last, out);
  if (ec != std::errc{} || ptr != last) {
    fail(line, "key '" + key + "': expected an integer, got '" + raw + "'");
  }
  return out;
}

std::uint64_t parse_uint(const std::string& raw, int line, const std::string& key) {
  const char* first = raw.data();
  const char* last = raw.data() + raw.size();
  std::uint64_t out{};
  auto [ptr, ec] = std::from_chars(first, last, out);
  if (ec != std::errc{} || ptr != last) {
    fail(line, "key '" + key + "': expected an unsigned integer, got '" + raw + "'");
  }
  return out;
}

bool parse_bool(const std::string& raw, int line, const std::string& key) {
  std::string v = raw;
  std::transform(v.begin(), v.end(), v.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (v == "true" || v == "on" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "off" || v == "0" || v == "no") return false;
  fail(line, "key '" + key + "': expected a boolean, got '" + raw + "'");
}

struct KeyValue {
  std::string section;
  std::string key;
  std::string value;
  int line;
};

std::vector<KeyValue> tokenize(const std::string& text) {
  std::vector<KeyValue> out;
  std::istringstream in(text);
  std::string raw;
  std::string section;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    auto comment = raw.find_first_of("#;");
    if (comment != std::string::npos) raw = raw.substr(0, comment);
    std::string s = trim(raw);
    if (s.empty()) continue;
    if (s.front() == '[') {
      if (s.back() != ']') fail(line, "unterminated section header '" + s + "'");
      section = trim(s.substr(1, s.size() - 2));
      if (section.empty()) fail(line, "empty section name");
      continue;
    }
    auto eq = s.find('=');
    if (eq == std::string::npos) fail(line, "expected 'key = value', got '" + s + "'");
    std::string key = trim(s.substr(0, eq));
    std::string value = trim(s.substr(eq + 1));
    if (key.empty()) fail(line, "empty key");
    if (section.empty()) fail(line, "key '" + key + "' before any [section] header");
    out.push_back({section, key, value, line});
  }
  return out;
}

using Setter = std::function<void(FullConfig&, const KeyValue&)>;

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = [] {
    std::map<std::string, Setter> t;
    auto add = [&](const std::string& name, Setter s) { t[name] = std::move(s); };

    auto dbl = [&](const std::string& name, auto member) {
      add(name, [member](FullConfig& c, const KeyValue& kv) {
        std::invoke(member, c) = parse_double(kv.value, kv.line, kv.section + "." + kv.key);
      });
    };
    auto integer = [&](const std::string& name, auto member) {
      add(name, [member](FullConfig& c, const KeyValue& kv) {
        using F = std::remove_reference_t<decltype(std::invoke(member, c))>;
        std::invoke(member, c) =
            static_cast<F>(parse_int(kv.value, kv.line, kv.section + "." + kv.key));
      });
    };

    dbl("grid.bandwidth_mhz", [](FullConfig& c) -> double& { return c.grid.bandwidth_mhz; });
    integer("grid.rbs_per_subframe",
            [](FullConfig& c) -> int& { return c.grid.rbs_per_subframe; });
    integer("grid.subchannels_per_subframe",
            [](FullConfig& c) -> int& { return c.grid.subchannels_per_subframe; });
    integer("grid.rbs_per_subchannel",
            [](FullConfig& c) -> int& { return c.grid.rbs_per_subchannel; });
    integer("grid.subframe_duration_ms",
            [](FullConfig& c) -> int& { return c.grid.subframe_duration_ms; });
    integer("grid.selection_window_subframes",
            [](FullConfig& c) -> int& { return c.grid.selection_window_subframes; });
    integer("grid.reservation_period_ms",
            [](FullConfig& c) -> int& { return c.grid.reservation_period_ms; });

    dbl("sps.th_sps_dbm", [](FullConfig& c) -> double& { return c.sps.th_sps_dbm; });
    dbl("sps.th_step_db", [](FullConfig& c) -> double& { return c.sps.th_step_db; });
    dbl("sps.shortlist_fraction",
        [](FullConfig& c) -> double& { return c.sps.shortlist_fraction; });
    integer("sps.rc_min", [](FullConfig& c) -> int& { return c.sps.rc_min; });
    integer("sps.rc_max", [](FullConfig& c) -> int& { return c.sps.rc_max; });
    dbl("sps.prob_keep", [](FullConfig& c) -> double& { return c.sps.prob_keep; });

    dbl("dcc.itt_min_ms", [](FullConfig& c) -> double& { return c.dcc.itt_min_ms; });
    dbl("dcc.itt_max_ms", [](FullConfig& c) -> double& { return c.dcc.itt_max_ms; });
    dbl("dcc.density_coeff", [](FullConfig& c) -> double& { return c.dcc.density_coeff; });
    dbl("dcc.density_radius_m",
        [](FullConfig& c) -> double& { return c.dcc.density_radius_m; });
    dbl("dcc.smoothing_lambda",
        [](FullConfig& c) -> double& { return c.dcc.smoothing_lambda; });
    dbl("dcc.pte_threshold_m",
        [](FullConfig& c) -> double& { return c.dcc.pte_threshold_m; });
    dbl("dcc.p_min_dbm", [](FullConfig& c) -> double& { return c.dcc.p_min_dbm; });
    dbl("dcc.p_max_dbm", [](FullConfig& c) -> double& { return c.dcc.p_max_dbm; });
    dbl("dcc.cbp_min", [](FullConfig& c) -> double& { return c.dcc.cbp_min; });
    dbl("dcc.cbp_max", [](FullConfig& c) -> double& { return c.dcc.cbp_max; });
    dbl("dcc.cbp_busy_threshold_dbm",
        [](FullConfig& c) -> double& { return c.dcc.cbp_busy_threshold_dbm; });
    integer("dcc.cbp_window_ms", [](FullConfig& c) -> int& { return c.dcc.cbp_window_ms; });

    dbl("channel.pl0_db", [](FullConfig& c) -> double& { return c.channel.pl0_db; });
    dbl("channel.n1", [](FullConfig& c) -> double& { return c.channel.n1; });
    dbl("channel.n2", [](FullConfig& c) -> double& { return c.channel.n2; });
    dbl("channel.breakpoint_m",
        [](FullConfig& c) -> double& { return c.channel.breakpoint_m; });
    dbl("channel.shadow_sigma_db",
        [](FullConfig& c) -> double& { return c.channel.shadow_sigma_db; });
    dbl("channel.noise_figure_db",
        [](FullConfig& c) -> double& { return c.channel.noise_figure_db; });
    dbl("channel.carrier_mhz", [](FullConfig& c) -> double& { return c.channel.carrier_mhz; });
    dbl("channel.sinr_threshold_db",
        [](FullConfig& c) -> double& { return c.channel.sinr_threshold_db; });

    // Preset counts are applied in a separate pass before any setter runs.
    add("scenario.name",
        [](FullConfig& c, const KeyValue& kv) { c.scenario.name = kv.value; });
    integer("scenario.vehicle_count",
            [](FullConfig& c) -> int& { return c.scenario.vehicle_count; });
    dbl("scenario.density_per_km_lane",
        [](FullConfig& c) -> double& { return c.scenario.density_per_km_lane; });
    dbl("scenario.speed_kmh", [](FullConfig& c) -> double& { return c.scenario.speed_kmh; });
    dbl("scenario.road_length_m",
        [](FullConfig& c) -> double& { return c.scenario.road_length_m; });
    integer("scenario.lanes", [](FullConfig& c) -> int& { return c.scenario.lanes; });
    dbl("scenario.lane_width_m",
        [](FullConfig& c) -> double& { return c.scenario.lane_width_m; });
    dbl("scenario.speed_jitter_sigma_mps",
        [](FullConfig& c) -> double& { return c.scenario.speed_jitter_sigma_mps; });

    integer("sim.duration_ms",
            [](FullConfig& c) -> std::int64_t& { return c.sim.duration_ms; });
    add("sim.seed", [](FullConfig& c, const KeyValue& kv) {
      c.sim.seed = parse_uint(kv.value, kv.line, kv.section + "." + kv.key);
    });
    add("sim.dcc_enabled", [](FullConfig& c, const KeyValue& kv) {
      c.sim.dcc_enabled = parse_bool(kv.value, kv.line, kv.section + "." + kv.key);
    });
    integer("sim.control_tick_ms",
            [](FullConfig& c) -> std::int64_t& { return c.sim.control_tick_ms; });
    integer("sim.itt_override_ms",
            [](FullConfig& c) -> std::int64_t& { return c.sim.itt_override_ms; });
    integer("sim.warmup_ms", [](FullConfig& c) -> std::int64_t& { return c.sim.warmup_ms; });
    return t;
  }();
  return table;
}

std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

FullConfig parse_config(const std::string& text) {
  auto entries = tokenize(text);

  FullConfig cfg;
  // Preset pass: a named scenario establishes the section defaults before
  // any explicit scenario key applies, regardless of key order.
  for (const auto& kv : entries) {
    if (kv.section == "scenario" && kv.key == "name") {
      try {
        cfg.scenario = scenario_preset(kv.value);
      } catch (const std::invalid_argument& e) {
        fail(kv.line, std::string("key 'scenario.name': ") + e.what());
      }
    }
  }

  const auto& table = setters();
  for (const auto& kv : entries) {
    auto it = table.find(kv.section + "." + kv.key);
    if (it == table.end()) {
      fail(kv.line, "unknown key '" + kv.section + "." + kv.key + "'");
    }
    it->second(cfg, kv);
  }

  try {
    cfg.validate();
  } catch (const std::exception& e) {
    throw ConfigError(std::string("config validation: ") + e.what());
  }
  return cfg;
}

FullConfig load_config_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

std::string serialize_config(const FullConfig& cfg) {
  std::ostringstream out;
  out << "[grid]\n";
  out << "bandwidth_mhz = " << fmt_double(cfg.grid.bandwidth_mhz) << "\n";
  out << "rbs_per_subframe = " << cfg.grid.rbs_per_subframe << "\n";
  out << "subchannels_per_subframe = " << cfg.grid.subchannels_per_subframe << "\n";
  out << "rbs_per_subchannel = " << cfg.grid.rbs_per_subchannel << "\n";
  out << "subframe_duration_ms = " << cfg.grid.subframe_duration_ms << "\n";
  out << "selection_window_subframes = " << cfg.grid.selection_window_subframes << "\n";
  out << "reservation_period_ms = " << cfg.grid.reservation_period_ms << "\n";

  out << "\n[sps]\n";
  out << "th_sps_dbm = " << fmt_double(cfg.sps.th_sps_dbm) << "\n";
  out << "th_step_db = " << fmt_double(cfg.sps.th_step_db) << "\n";
  out << "shortlist_fraction = " << fmt_double(cfg.sps.shortlist_fraction) << "\n";
  out << "rc_min = " << cfg.sps.rc_min << "\n";
  out << "rc_max = " << cfg.sps.rc_max << "\n";
  out << "prob_keep = " << fmt_double(cfg.sps.prob_keep) << "\n";

  out << "\n[dcc]\n";
  out << "itt_min_ms = " << fmt_double(cfg.dcc.itt_min_ms) << "\n";
  out << "itt_max_ms = " << fmt_double(cfg.dcc.itt_max_ms) << "\n";
  out << "density_coeff = " << fmt_double(cfg.dcc.density_coeff) << "\n";
  out << "density_radius_m = " << fmt_double(cfg.dcc.density_radius_m) << "\n";
  out << "smoothing_lambda = " << fmt_double(cfg.dcc.smoothing_lambda) << "\n";
  out << "pte_threshold_m = " << fmt_double(cfg.dcc.pte_threshold_m) << "\n";
  out << "p_min_dbm = " << fmt_double(cfg.dcc.p_min_dbm) << "\n";
  out << "p_max_dbm = " << fmt_double(cfg.dcc.p_max_dbm) << "\n";
  out << "cbp_min = " << fmt_double(cfg.dcc.cbp_min) << "\n";
  out << "cbp_max = " << fmt_double(cfg.dcc.cbp_max) << "\n";
  out << "cbp_busy_threshold_dbm = " << fmt_double(cfg.dcc.cbp_busy_threshold_dbm) << "\n";
  out << "cbp_window_ms = " << cfg.dcc.cbp_window_ms << "\n";

  out << "\n[channel]\n";
  out << "pl0_db = " << fmt_double(cfg.channel.pl0_db) << "\n";
  out << "n1 = " << fmt_double(cfg.channel.n1) << "\n";
  out << "n2 = " << fmt_double(cfg.channel.n2) << "\n";
  out << "breakpoint_m = " << fmt_double(cfg.channel.breakpoint_m) << "\n";
  out << "shadow_sigma_db = " << fmt_double(cfg.channel.shadow_sigma_db) << "\n";
  out << "noise_figure_db = " << fmt_double(cfg.channel.noise_figure_db) << "\n";
  out << "carrier_mhz = " << fmt_double(cfg.channel.carrier_mhz) << "\n";
  out << "sinr_threshold_db = " << fmt_double(cfg.channel.sinr_threshold_db) << "\n";

  out << "\n[scenario]\n";
  out << "name = " << cfg.scenario.name << "\n";
  out << "vehicle_count = " << cfg.scenario.vehicle_count << "\n";
  out << "density_per_km_lane = " << fmt_double(cfg.scenario.density_per_km_lane) << "\n";
  out << "speed_kmh = " << fmt_double(cfg.scenario.speed_kmh) << "\n";
  out << "road_length_m = " << fmt_double(cfg.scenario.road_length_m) << "\n";
  out << "lanes = " << cfg.scenario.lanes << "\n";
  out << "lane_width_m = " << fmt_double(cfg.scenario.lane_width_m) << "\n";
  out << "speed_jitter_sigma_mps = " << fmt_double(cfg.scenario.speed_jitter_sigma_mps)
      << "\n";

  out << "\n[sim]\n";
  out << "duration_ms = " << cfg.sim.duration_ms << "\n";
  out << "seed = " << cfg.sim.seed << "\n";
  out << "dcc_enabled = " << (cfg.sim.dcc_enabled ? "true" : "false") << "\n";
  out << "control_tick_ms = " << cfg.sim.control_tick_ms << "\n";
  out << "itt_override_ms = " << cfg.sim.itt_override_ms << "\n";
  out << "warmup_ms = " << cfg.sim.warmup_ms << "\n";
  return out.str();
}

}  // namespace v2xsim
