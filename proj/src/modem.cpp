#include "gm/modem.hpp"

#include <algorithm>

namespace gm {

PulseTrain modulate(const BitVector& bits, const GmTiming& timing) {
  PulseTrain out;
  out.reserve(bits.size());
  for (std::size_t k = 0; k < bits.size(); ++k) {
    out.push_back(static_cast<double>(k) * timing.t_sym() + (bits[k] ? timing.t_slot() : 0.0));
  }
  return out;
}

PulseTrain apply_channel(const PulseTrain& tx, const ChannelParams& params, Rng& rng) {
  validate(params);
  PulseTrain out;
  out.reserve(tx.size());
  for (double s : tx) {
    // Delay is drawn unconditionally so the delay stream is independent of
    // the drop decisions (identical seeds give comparable realizations
    // across drop rates).
    const bool kept = rng.bernoulli(1.0 - params.drop_rate);
    const double tau = rng.exponential(params.mean_delay);
    if (kept) out.push_back(s + tau);
  }
  std::sort(out.begin(), out.end());
  if (params.min_gap > 0.0) {
    // Packets have a minimum on-air length: arrivals that would overlap are
    // serialized, pushing the later pulse out.
    for (std::size_t k = 1; k < out.size(); ++k) {
      out[k] = std::max(out[k], out[k - 1] + params.min_gap);
    }
  }
  return out;
}

namespace {

// Symbol period holding timestamp r, normalized against the products
// i*t_sym so the half-open predicate i*t_sym <= r < (i+1)*t_sym is met
// exactly in floating point. Returns a negative index for r < 0.
std::ptrdiff_t period_index(double r, double t_sym) {
  auto i = static_cast<std::ptrdiff_t>(r / t_sym);
  while (i > 0 && r < static_cast<double>(i) * t_sym) --i;
  while (r >= static_cast<double>(i + 1) * t_sym) ++i;
  return r < 0.0 ? -1 : i;
}

}  // namespace

TernaryWord decide_word(const PulseTrain& rx, const GmTiming& timing, std::size_t n_symbols) {
  const double t_sym = timing.t_sym();
  const double t_slot = timing.t_slot();

  std::vector<std::uint32_t> count(n_symbols, 0);
  std::vector<double> single(n_symbols, 0.0);
  const double horizon = (static_cast<double>(n_symbols) + 1.0) * t_sym;
  for (double r : rx) {
    if (!(r < horizon)) continue;  // keeps the index cast in range; also drops NaN
    const std::ptrdiff_t i = period_index(r, t_sym);
    if (i < 0 || i >= static_cast<std::ptrdiff_t>(n_symbols)) continue;
    if (++count[i] == 1) single[i] = r;
  }

  TernaryWord word(n_symbols, TernarySymbol::Erasure);
  for (std::size_t i = 0; i < n_symbols; ++i) {
    if (count[i] != 1) continue;  // zero or multiple pulses erase the period
    const double left = static_cast<double>(i) * t_sym;
    const double r = single[i];
    if (r < left + t_slot) {
      word[i] = TernarySymbol::Zero;
    } else if (r < left + 2.0 * t_slot) {
      word[i] = TernarySymbol::One;
    }  // guard region stays Erasure
  }
  return word;
}

BitVector decide_word_hard(const PulseTrain& rx, const GmTiming& timing, std::size_t n_symbols) {
  const TernaryWord word = decide_word(rx, timing, n_symbols);
  BitVector bits(n_symbols);
  for (std::size_t i = 0; i < n_symbols; ++i) {
    bits[i] = word[i] == TernarySymbol::Zero ? 0 : 1;
  }
  return bits;
}

}  // namespace gm
