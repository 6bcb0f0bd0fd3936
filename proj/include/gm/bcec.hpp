#pragma once

#include <cstdint>

#include "gm/core.hpp"

namespace gm {

/// Output indices of the binary crossover erasure channel.
inline constexpr int kOut0 = 0;
inline constexpr int kOut1 = 1;
inline constexpr int kOutErasure = 2;

/// Transition probabilities eps[input][output] of the binary-input,
/// ternary-output channel. Rows must sum to 1.
struct TransitionMatrix {
  double eps[2][3];

  static TransitionMatrix identity() { return bec(0.0); }

  /// Symmetric erasure channel: no crossovers, both inputs erased with the
  /// same probability.
  static TransitionMatrix bec(double erasure) {
    return {{{1.0 - erasure, 0.0, erasure}, {0.0, 1.0 - erasure, erasure}}};
  }

  /// Binary symmetric channel embedding (no erasure mass).
  static TransitionMatrix bsc(double crossover) {
    return {{{1.0 - crossover, crossover, 0.0}, {crossover, 1.0 - crossover, 0.0}}};
  }

  /// Z-channel embedding: input 0 is noiseless, input 1 flips to 0 with the
  /// given probability.
  static TransitionMatrix z_channel(double one_to_zero) {
    return {{{1.0, 0.0, 0.0}, {one_to_zero, 1.0 - one_to_zero, 0.0}}};
  }
};

/// Entries in [0,1] and row sums within tol of 1.
bool is_valid(const TransitionMatrix& tm, double tol = 1e-12);

struct CapacityResult {
  double capacity_bits;
  double gamma_star;  // optimal P(x = 0)
};

/// Isolated-symbol transition model: a pulse interacts only with its own
/// symbol period, so a delay past the period counts as that row's erasure
/// mass and spillover into neighbors is ignored. Exact in the limit where
/// the guard absorbs all delays. Row sums are exactly 1 by construction.
TransitionMatrix transitions_closed_form(const GmTiming& timing, const ChannelParams& params);

/// Empirical transition estimate: simulates random words end to end
/// (modulate, channel, per-period decision) and normalizes the
/// (input, output) tallies. Unlike the closed form this captures memory
/// effects between neighboring periods. n_symbols counts transmitted
/// symbols. Throws DegenerateExperiment if an input symbol never occurs.
TransitionMatrix estimate_transitions_mc(const GmTiming& timing, const ChannelParams& params,
                                         std::uint64_t n_symbols, Seed seed);

/// Serial reference for estimate_transitions_mc; bit-identical results.
TransitionMatrix estimate_transitions_mc_serial(const GmTiming& timing, const ChannelParams& params,
                                                std::uint64_t n_symbols, Seed seed);

/// I(X;Y) in bits for X ~ Bernoulli with P(x=0) = gamma, using the
/// convention 0*log2(0) = 0.
double mutual_information(const TransitionMatrix& tm, double gamma);

/// Slope of mutual_information in gamma (monotone nonincreasing by
/// concavity). May be +/-infinity at a boundary where an output symbol's
/// marginal vanishes.
double mutual_information_slope(const TransitionMatrix& tm, double gamma);

/// Channel capacity: maximizes mutual_information over gamma by
/// golden-section bracketing plus a bisection polish on the slope.
/// A channel whose output is independent of the input reports gamma 0.5.
CapacityResult capacity(const TransitionMatrix& tm);

}  // namespace gm
