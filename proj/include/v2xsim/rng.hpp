#pragma once

#include <cstdint>
#include <random>

namespace v2xsim {

// All randomness in the simulator flows through named substreams derived
// from the run seed. Persistent per-UE streams use mt19937_64 seeded from a
// mixed key; per-link shadowing uses a stateless counter-based generator so
// results do not depend on the order links are evaluated in.

enum class StreamPurpose : std::uint64_t {
  placement = 1,
  generation_offset = 2,
  resource_select = 3,
  speed_jitter = 4,
  shadowing = 5,
};

inline std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline std::uint64_t mix_key(std::uint64_t seed, StreamPurpose purpose, std::uint64_t id) {
  std::uint64_t s = seed;
  std::uint64_t a = splitmix64(s);
  s ^= static_cast<std::uint64_t>(purpose) * 0xff51afd7ed558ccdULL;
  std::uint64_t b = splitmix64(s);
  s ^= id * 0xc4ceb9fe1a85ec53ULL;
  std::uint64_t c = splitmix64(s);
  return a ^ b ^ c;
}

inline std::mt19937_64 make_stream(std::uint64_t seed, StreamPurpose purpose, std::uint64_t id) {
  return std::mt19937_64{mix_key(seed, purpose, id)};
}

// Uniform in (0, 1], suitable as log() input.
inline double to_unit_interval(std::uint64_t x) {
  return (static_cast<double>(x >> 11) + 1.0) * 0x1.0p-53;
}

// Standard normal draw keyed by (seed, link, subframe). The link key is
// symmetric in (a, b) so shadowing is reciprocal.
double link_shadow_normal(std::uint64_t seed, std::uint32_t ue_a, std::uint32_t ue_b,
                          std::int64_t subframe);

}  // namespace v2xsim
