#pragma once

#include <compare>
#include <cstdint>
#include <vector>

namespace v2xsim {

// Time-frequency addressing of the sidelink resource pool: 1 ms subframes in
// time, subchannels (groups of resource blocks) in frequency. A candidate
// single-subframe resource (CSR) is one (subframe, subchannel) slot.

struct GridConfig {
  double bandwidth_mhz = 10.0;
  int rbs_per_subframe = 50;
  int subchannels_per_subframe = 2;
  int rbs_per_subchannel = 25;
  int subframe_duration_ms = 1;
  int selection_window_subframes = 100;
  int reservation_period_ms = 100;

  int csrs_per_window() const {
    return selection_window_subframes * subchannels_per_subframe;
  }
  // Occupied bandwidth of one subchannel (LTE RB = 180 kHz).
  double subchannel_bandwidth_hz() const { return rbs_per_subchannel * 180e3; }

  // Throws std::invalid_argument on a violated invariant.
  void validate() const;
};

struct CsrId {
  std::int64_t subframe = 0;
  int subchannel = 0;

  auto operator<=>(const CsrId&) const = default;
};

// Row-major index of a CSR inside the selection window starting at
// window_start: subframes are rows, subchannels columns. Bijective over the
// window; throws std::out_of_range for subframes outside it.
int csr_linear_index(CsrId csr, std::int64_t window_start, const GridConfig& cfg);

// All subframes s in [candidate - sensing_span, candidate) congruent to
// candidate modulo the period, in increasing order. Used to project sensed
// reservations onto future candidate subframes.
std::vector<std::int64_t> period_aligned_subframes(std::int64_t candidate_subframe,
                                                   int sensing_span_ms, int period_ms);

}  // namespace v2xsim
