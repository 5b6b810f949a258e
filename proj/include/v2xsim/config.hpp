#pragma once

#include <stdexcept>
#include <string>

#include "v2xsim/channel.hpp"
#include "v2xsim/dcc.hpp"
#include "v2xsim/engine.hpp"
#include "v2xsim/mobility.hpp"
#include "v2xsim/resource_grid.hpp"
#include "v2xsim/sps.hpp"

namespace v2xsim {

// Line-oriented `key = value` configuration with [grid], [sps], [dcc],
// [channel], [scenario] and [sim] sections. Absent keys keep their defaults;
// an empty file yields the full default parameter set. `#` and `;` start
// comments.

struct FullConfig {
  GridConfig grid;
  SpsConfig sps;
  DccConfig dcc;
  ChannelConfig channel;
  ScenarioConfig scenario;
  SimConfig sim;

  void validate() const;
};

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Parses and validates. Errors carry the line number and offending key.
// When [scenario] names a preset, the preset's counts become the section
// defaults before explicit keys apply.
FullConfig parse_config(const std::string& text);

FullConfig load_config_file(const std::string& path);

// Emits every key of every section; parse(serialize(c)) reproduces c.
std::string serialize_config(const FullConfig& cfg);

}  // namespace v2xsim
