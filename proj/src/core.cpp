#include "gm/core.hpp"

namespace gm {

void validate(const ChannelParams& params) {
  if (!(params.mean_delay >= 0.0)) throw ConfigError("ChannelParams: mean_delay must be >= 0");
  if (!(params.drop_rate >= 0.0 && params.drop_rate <= 1.0))
    throw ConfigError("ChannelParams: drop_rate must be in [0,1]");
  if (!(params.min_gap >= 0.0)) throw ConfigError("ChannelParams: min_gap must be >= 0");
}

std::uint64_t mix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

Seed derive_trial_seed(Seed base, std::uint64_t trial_index) {
  // trial_index -> base + odd*trial_index is injective mod 2^64, and mix64 is
  // a bijection, so distinct indices always map to distinct seeds.
  return mix64(base + 0x9E3779B97F4A7C15ull * trial_index);
}

}  // namespace gm
