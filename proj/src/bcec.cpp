#include "gm/bcec.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

#include "gm/modem.hpp"
#include "gm/parallel.hpp"

namespace gm {

namespace {

double plog2p(double p) { return p > 0.0 ? p * std::log2(p) : 0.0; }

constexpr std::uint64_t kWordSymbols = 512;  // block length of simulated words

}  // namespace

bool is_valid(const TransitionMatrix& tm, double tol) {
  for (int x = 0; x < 2; ++x) {
    double sum = 0.0;
    for (int y = 0; y < 3; ++y) {
      const double e = tm.eps[x][y];
      if (!(e >= 0.0 && e <= 1.0)) return false;
      sum += e;
    }
    if (std::fabs(sum - 1.0) > tol) return false;
  }
  return true;
}

TransitionMatrix transitions_closed_form(const GmTiming& timing, const ChannelParams& params) {
  validate(params);
  const double survive = 1.0 - params.drop_rate;
  // a = P(tau > t_slot); the noiseless limit mean_delay = 0 gives a = 0.
  const double a =
      params.mean_delay > 0.0 ? std::exp(-timing.t_slot() / params.mean_delay) : 0.0;

  TransitionMatrix tm{};
  tm.eps[0][kOut0] = survive * (1.0 - a);
  tm.eps[0][kOut1] = survive * (a - a * a);
  // Remainder parenthesized so the left-to-right row sum is exactly 1.
  tm.eps[0][kOutErasure] = 1.0 - (tm.eps[0][kOut0] + tm.eps[0][kOut1]);
  tm.eps[1][kOut1] = survive * (1.0 - a);
  tm.eps[1][kOut0] = 0.0;  // a delayed one pulse can only move right, never into the zero slot
  tm.eps[1][kOutErasure] = 1.0 - (tm.eps[1][kOut0] + tm.eps[1][kOut1]);
  return tm;
}

namespace {

TransitionMatrix estimate_transitions_impl(const GmTiming& timing, const ChannelParams& params,
                                           std::uint64_t n_symbols, Seed seed, bool parallel) {
  validate(params);
  if (n_symbols < 1) throw ConfigError("estimate_transitions_mc: n_symbols must be >= 1");

  const std::uint64_t n_words = (n_symbols + kWordSymbols - 1) / kWordSymbols;
  std::vector<std::array<std::uint64_t, 6>> tallies(n_words, {0, 0, 0, 0, 0, 0});

  detail::for_each_index(n_words, parallel, [&](std::size_t w) {
    const std::uint64_t begin = static_cast<std::uint64_t>(w) * kWordSymbols;
    const auto len = static_cast<std::size_t>(std::min(kWordSymbols, n_symbols - begin));
    Rng rng(derive_trial_seed(seed, w));
    const BitVector bits = rng.bits(len);
    const PulseTrain rx = apply_channel(modulate(bits, timing), params, rng);
    const TernaryWord word = decide_word(rx, timing, len);
    auto& tally = tallies[w];
    for (std::size_t i = 0; i < len; ++i) {
      ++tally[bits[i] * 3 + static_cast<std::size_t>(word[i])];
    }
  });

  std::array<std::uint64_t, 6> total{};
  for (const auto& t : tallies)
    for (int j = 0; j < 6; ++j) total[j] += t[j];

  TransitionMatrix tm{};
  for (int x = 0; x < 2; ++x) {
    const std::uint64_t row = total[x * 3] + total[x * 3 + 1] + total[x * 3 + 2];
    if (row == 0)
      throw DegenerateExperiment("estimate_transitions_mc: input symbol never transmitted");
    for (int y = 0; y < 3; ++y)
      tm.eps[x][y] = static_cast<double>(total[x * 3 + y]) / static_cast<double>(row);
  }
  return tm;
}

}  // namespace

TransitionMatrix estimate_transitions_mc(const GmTiming& timing, const ChannelParams& params,
                                         std::uint64_t n_symbols, Seed seed) {
  return estimate_transitions_impl(timing, params, n_symbols, seed, true);
}

TransitionMatrix estimate_transitions_mc_serial(const GmTiming& timing, const ChannelParams& params,
                                                std::uint64_t n_symbols, Seed seed) {
  return estimate_transitions_impl(timing, params, n_symbols, seed, false);
}

double mutual_information(const TransitionMatrix& tm, double gamma) {
  double h_y = 0.0;
  for (int y = 0; y < 3; ++y) {
    const double p = gamma * tm.eps[0][y] + (1.0 - gamma) * tm.eps[1][y];
    h_y -= plog2p(p);
  }
  double zeta1 = 0.0, zeta2 = 0.0;
  for (int y = 0; y < 3; ++y) {
    zeta1 += plog2p(tm.eps[0][y]);
    zeta2 += plog2p(tm.eps[1][y]);
  }
  // H(Y|X) = -(gamma*zeta1 + (1-gamma)*zeta2)
  return h_y + gamma * zeta1 + (1.0 - gamma) * zeta2;
}

double mutual_information_slope(const TransitionMatrix& tm, double gamma) {
  double slope = 0.0, diff_sum = 0.0, zeta1 = 0.0, zeta2 = 0.0;
  for (int y = 0; y < 3; ++y) {
    const double d = tm.eps[0][y] - tm.eps[1][y];
    if (d != 0.0) {
      const double p = gamma * tm.eps[0][y] + (1.0 - gamma) * tm.eps[1][y];
      slope -= d * std::log2(p);  // log2(0) = -inf gives the correct signed infinity
    }
    diff_sum += d;
    zeta1 += plog2p(tm.eps[0][y]);
    zeta2 += plog2p(tm.eps[1][y]);
  }
  return slope - diff_sum / std::numbers::ln2 + zeta1 - zeta2;
}

CapacityResult capacity(const TransitionMatrix& tm) {
  // Golden-section bracketing. Value comparisons lose resolution once the
  // bracket is within ~1e-8 of a quadratic maximum, so stop at 1e-6 and
  // finish on the slope sign, which stays crisp to machine precision.
  const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
  const double invphi2 = (3.0 - std::sqrt(5.0)) / 2.0;
  double a = 0.0, b = 1.0, h = 1.0;
  double c = a + invphi2 * h, d = a + invphi * h;
  double fc = mutual_information(tm, c), fd = mutual_information(tm, d);
  while (h > 1e-6) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      h = b - a;
      c = a + invphi2 * h;
      fc = mutual_information(tm, c);
    } else {
      a = c;
      c = d;
      fc = fd;
      h = b - a;
      d = a + invphi * h;
      fd = mutual_information(tm, d);
    }
  }

  double lo = std::max(0.0, a - 10.0 * h);
  double hi = std::min(1.0, b + 10.0 * h);
  double gamma = 0.5 * (a + b);
  if (mutual_information_slope(tm, lo) > 0.0 && mutual_information_slope(tm, hi) < 0.0) {
    for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (mutual_information_slope(tm, mid) > 0.0)
        lo = mid;
      else
        hi = mid;
    }
    gamma = 0.5 * (lo + hi);
  }

  double cap = mutual_information(tm, gamma);
  if (cap <= 1e-12) return {0.0, 0.5};  // output independent of input: gamma unconstrained
  cap = std::min(1.0, std::max(0.0, cap));
  return {cap, gamma};
}

}  // namespace gm
