#pragma once

#include <string>
#include <vector>

#include "v2xsim/config.hpp"
#include "v2xsim/engine.hpp"

namespace v2xsim {

inline constexpr const char* kToolVersion = "1.0.0";

// Writes the complete artifact set for one run into out_dir: per-figure
// CSVs, raw packet and conflict logs, the config snapshot, summary.json and
// manifest.json (inventory with SHA-256 digests). Returns the emitted file
// names relative to out_dir, manifest last. On any failure the partially
// written files are removed before the exception propagates.
std::vector<std::string> write_run_artifacts(const std::string& out_dir,
                                             const FullConfig& cfg, const RunResult& result,
                                             const std::string& started_utc,
                                             const std::string& finished_utc);

// Current UTC wall clock as an ISO-8601 string.
std::string utc_timestamp();

}  // namespace v2xsim
