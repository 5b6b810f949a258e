#include "v2xsim/rng.hpp"

#include <cmath>
#include <numbers>

namespace v2xsim {

double link_shadow_normal(std::uint64_t seed, std::uint32_t ue_a, std::uint32_t ue_b,
                          std::int64_t subframe) {
  const std::uint32_t lo = ue_a < ue_b ? ue_a : ue_b;
  const std::uint32_t hi = ue_a < ue_b ? ue_b : ue_a;
  std::uint64_t state = mix_key(seed, StreamPurpose::shadowing,
                                (static_cast<std::uint64_t>(lo) << 32) | hi);
  state ^= static_cast<std::uint64_t>(subframe) * 0x2545f4914f6cdd1dULL;
  const double u1 = to_unit_interval(splitmix64(state));
  const double u2 = to_unit_interval(splitmix64(state));
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

}  // namespace v2xsim
