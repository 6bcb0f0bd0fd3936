#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace gm {

using Bit = std::uint8_t;
using BitVector = std::vector<Bit>;

/// Packet timestamps in seconds. A transmitted train is strictly increasing;
/// a received train is kept sorted ascending and may be shorter (drops).
using PulseTrain = std::vector<double>;

using Seed = std::uint64_t;

/// Invalid parameter or option combination. The CLI maps this to exit code 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An experiment that produced no usable statistics (e.g. an input symbol was
/// never transmitted, or no detection was ever accepted). CLI exit code 3.
class DegenerateExperiment : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The received preamble span cannot be paired one pulse per symbol period
/// (drops or cross-period spillover); delay estimation is not possible.
class UnusablePreamble : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Slot/guard/symbol timing geometry. A symbol period holds a "0" slot, a "1"
/// slot and a trailing guard window, so t_sym is always 2*t_slot + t_g and is
/// derived at construction rather than stored independently.
class GmTiming {
 public:
  GmTiming(double t_slot, double t_g) : t_slot_(t_slot), t_g_(t_g), t_sym_(2.0 * t_slot + t_g) {
    if (!(t_slot > 0.0)) throw ConfigError("GmTiming: t_slot must be > 0");
    if (!(t_g >= 0.0)) throw ConfigError("GmTiming: t_g must be >= 0");
  }

  double t_slot() const { return t_slot_; }
  double t_g() const { return t_g_; }
  double t_sym() const { return t_sym_; }

 private:
  double t_slot_;
  double t_g_;
  double t_sym_;
};

/// Delay/drop statistics of the network path. mean_delay is the mean of the
/// exponential per-pulse delay (0 means every delay is exactly zero);
/// drop_rate is the probability that a pulse is lost. min_gap, when
/// positive, serializes arrivals so no two pulses are closer than a real
/// packet's minimum on-air length; disabled by default.
struct ChannelParams {
  double mean_delay = 0.0;
  double drop_rate = 0.0;
  double min_gap = 0.0;
};

/// Throws ConfigError unless mean_delay >= 0, drop_rate is in [0,1] and
/// min_gap >= 0.
void validate(const ChannelParams& params);

/// 64-bit finalizer used for seed derivation; bijective on 64-bit values.
std::uint64_t mix64(std::uint64_t x);

/// Deterministic per-trial seed: injective in trial_index for a fixed base,
/// so concurrent trials get independent, reproducible generator streams.
Seed derive_trial_seed(Seed base, std::uint64_t trial_index);

/// Seeded generator all simulation randomness flows through. Sampling uses
/// fixed bit recipes (not std::*_distribution) so identical seeds give
/// bit-identical results on any platform.
class Rng {
 public:
  explicit Rng(Seed seed) : engine_(seed) {}

  /// Uniform double in [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Exponential with the given mean; mean 0 yields exactly 0. Always
  /// consumes one draw so streams stay aligned across delay settings.
  double exponential(double mean) { return mean * -std::log1p(-uniform()); }

  bool bernoulli(double p) { return uniform() < p; }

  Bit bit() { return static_cast<Bit>((engine_() >> 32) & 1u); }

  BitVector bits(std::size_t n) {
    BitVector out(n);
    for (auto& b : out) b = bit();
    return out;
  }

  /// Uniform integer in [0, n). n must be nonzero.
  std::uint64_t below(std::uint64_t n) { return engine_() % n; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace gm
