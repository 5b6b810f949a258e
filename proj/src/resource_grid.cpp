#include "v2xsim/resource_grid.hpp"

#include <stdexcept>
#include <string>

namespace v2xsim {

void GridConfig::validate() const {
  if (rbs_per_subframe <= 0 || subchannels_per_subframe <= 0 || rbs_per_subchannel <= 0) {
    throw std::invalid_argument("grid: RB and subchannel counts must be positive");
  }
  if (rbs_per_subchannel * subchannels_per_subframe > rbs_per_subframe) {
    throw std::invalid_argument("grid: subchannelization exceeds rbs_per_subframe");
  }
  if (subframe_duration_ms != 1) {
    throw std::invalid_argument("grid: subframe_duration_ms must be 1");
  }
  if (selection_window_subframes <= 0) {
    throw std::invalid_argument("grid: selection_window_subframes must be positive");
  }
  if (reservation_period_ms <= 0) {
    throw std::invalid_argument("grid: reservation_period_ms must be positive");
  }
  if (bandwidth_mhz <= 0) {
    throw std::invalid_argument("grid: bandwidth_mhz must be positive");
  }
}

int csr_linear_index(CsrId csr, std::int64_t window_start, const GridConfig& cfg) {
  const std::int64_t offset = csr.subframe - window_start;
  if (offset < 0 || offset >= cfg.selection_window_subframes) {
    throw std::out_of_range("csr_linear_index: subframe " + std::to_string(csr.subframe) +
                            " outside selection window starting at " +
                            std::to_string(window_start));
  }
  if (csr.subchannel < 0 || csr.subchannel >= cfg.subchannels_per_subframe) {
    throw std::out_of_range("csr_linear_index: subchannel out of range");
  }
  return static_cast<int>(offset) * cfg.subchannels_per_subframe + csr.subchannel;
}

std::vector<std::int64_t> period_aligned_subframes(std::int64_t candidate_subframe,
                                                   int sensing_span_ms, int period_ms) {
  if (period_ms <= 0) {
    throw std::invalid_argument("period_aligned_subframes: period must be positive");
  }
  std::vector<std::int64_t> out;
  const std::int64_t window_start = candidate_subframe - sensing_span_ms;
  // First aligned subframe >= window_start.
  std::int64_t first = candidate_subframe;
  while (first - period_ms >= window_start) {
    first -= period_ms;
  }
  for (std::int64_t s = first; s < candidate_subframe; s += period_ms) {
    out.push_back(s);
  }
  return out;
}

}  // namespace v2xsim
