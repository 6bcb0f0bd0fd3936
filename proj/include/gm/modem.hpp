#pragma once

#include <cstddef>

#include "gm/core.hpp"

namespace gm {

/// Hard ternary receiver output: '?' marks a symbol period with zero or
/// multiple pulses, or a guard-region arrival.
enum class TernarySymbol : std::uint8_t { Zero = 0, One = 1, Erasure = 2 };

using TernaryWord = std::vector<TernarySymbol>;

inline char to_char(TernarySymbol s) {
  switch (s) {
    case TernarySymbol::Zero: return '0';
    case TernarySymbol::One: return '1';
    default: return '?';
  }
}

/// Pulse schedule for a bit vector: bit k transmits at k*t_sym + bit*t_slot.
/// Result is strictly increasing.
PulseTrain modulate(const BitVector& bits, const GmTiming& timing);

/// Delay/drop channel: each pulse independently survives with probability
/// 1 - drop_rate and is delayed by an exponential with the given mean; the
/// surviving arrivals are returned time-sorted. Output length is in [0, N].
PulseTrain apply_channel(const PulseTrain& tx, const ChannelParams& params, Rng& rng);

/// Per-period ternary decision over n_symbols periods. A period decides 0 or
/// 1 only when it contains exactly one pulse and that pulse lies in the
/// matching slot; guard arrivals and zero/multiple-pulse periods decide '?'.
/// All windows are half-open [a, b); pulses at or past n_symbols*t_sym are
/// ignored. The output length is always exactly n_symbols.
TernaryWord decide_word(const PulseTrain& rx, const GmTiming& timing, std::size_t n_symbols);

/// Binary decision for drop-free channels: 0 when the period's single pulse
/// sits in the zero slot, otherwise 1. The "otherwise" branch covers the one
/// slot, the guard region (the zero/one boundary is the slot boundary
/// t_sym*i + t_slot), and degenerate periods with zero or multiple pulses.
BitVector decide_word_hard(const PulseTrain& rx, const GmTiming& timing, std::size_t n_symbols);

}  // namespace gm
