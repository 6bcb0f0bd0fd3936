#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>

#include "gm/modem.hpp"

using namespace gm;

namespace {
const GmTiming kTiming(0.0175, 0.005);
}

TEST_CASE("modulate places pulses on the slot grid") {
  CHECK(modulate({0}, kTiming) == PulseTrain{0.0});
  CHECK(modulate({1, 0, 1}, kTiming) == PulseTrain{0.0175, 0.04, 0.0975});

  const BitVector zeros(8, 0);
  const PulseTrain train = modulate(zeros, kTiming);
  for (std::size_t k = 0; k < zeros.size(); ++k) CHECK(train[k] == k * kTiming.t_sym());
  CHECK(std::is_sorted(train.begin(), train.end()));
}

TEST_CASE("identity channel returns the input train") {
  Rng rng(1);
  const PulseTrain tx = modulate({1, 0, 0, 1, 1}, kTiming);
  CHECK(apply_channel(tx, {0.0, 0.0}, rng) == tx);
}

TEST_CASE("full drop rate empties the train") {
  Rng rng(2);
  const PulseTrain tx = modulate(BitVector(100, 1), kTiming);
  CHECK(apply_channel(tx, {0.0, 1.0}, rng).empty());
}

TEST_CASE("channel output is sorted and never longer than the input") {
  Rng rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    const BitVector bits = rng.bits(1 + rng.below(64));
    const PulseTrain tx = modulate(bits, kTiming);
    const PulseTrain rx = apply_channel(tx, {2.0 * kTiming.t_slot(), 0.3}, rng);
    CHECK(rx.size() <= tx.size());
    CHECK(std::is_sorted(rx.begin(), rx.end()));
  }
}

TEST_CASE("a minimum gap serializes bunched arrivals") {
  Rng rng(12);
  const double gap = 0.002;
  const BitVector bits = rng.bits(200);
  for (int trial = 0; trial < 20; ++trial) {
    Rng a(trial), b(trial);
    const PulseTrain tx = modulate(bits, kTiming);
    const PulseTrain plain = apply_channel(tx, {2.0 * kTiming.t_slot(), 0.1}, a);
    const PulseTrain spaced = apply_channel(tx, {2.0 * kTiming.t_slot(), 0.1, gap}, b);
    REQUIRE(spaced.size() == plain.size());
    for (std::size_t k = 1; k < spaced.size(); ++k) {
      CHECK(spaced[k] - spaced[k - 1] >= gap - 1e-12);
      CHECK(spaced[k] >= plain[k]);  // serialization only ever pushes pulses later
    }
  }
  // Disabled by default: same seed, same output.
  Rng c(5), d(5);
  const PulseTrain tx = modulate(bits, kTiming);
  CHECK(apply_channel(tx, {kTiming.t_slot(), 0.2}, c) ==
        apply_channel(tx, {kTiming.t_slot(), 0.2, 0.0}, d));
}

TEST_CASE("channel delays average to the configured mean") {
  Rng rng(4);
  const std::size_t n = 100000;
  const PulseTrain tx = modulate(BitVector(n, 0), kTiming);
  const PulseTrain rx = apply_channel(tx, {kTiming.t_slot(), 0.0}, rng);
  REQUIRE(rx.size() == n);
  // The sort reorders arrivals, but the summed delay is order-invariant.
  double sum = 0.0;
  for (std::size_t k = 0; k < n; ++k) sum += rx[k] - tx[k];
  CHECK(sum / n == doctest::Approx(kTiming.t_slot()).epsilon(0.01));
}

TEST_CASE("single-period ternary decisions") {
  CHECK(decide_word({0.010}, kTiming, 1) == TernaryWord{TernarySymbol::Zero});
  CHECK(decide_word({0.020}, kTiming, 1) == TernaryWord{TernarySymbol::One});
  CHECK(decide_word({0.010, 0.020}, kTiming, 1) == TernaryWord{TernarySymbol::Erasure});
  CHECK(decide_word({0.036}, kTiming, 1) == TernaryWord{TernarySymbol::Erasure});
  CHECK(decide_word({}, kTiming, 1) == TernaryWord{TernarySymbol::Erasure});
}

TEST_CASE("slot boundaries are half-open") {
  // Exactly t_slot starts the one slot; exactly 2*t_slot starts the guard.
  CHECK(decide_word({0.0175}, kTiming, 1) == TernaryWord{TernarySymbol::One});
  CHECK(decide_word({0.035}, kTiming, 1) == TernaryWord{TernarySymbol::Erasure});
  // Exactly t_sym belongs to the next period.
  const TernaryWord word = decide_word({0.04}, kTiming, 2);
  CHECK(word[0] == TernarySymbol::Erasure);
  CHECK(word[1] == TernarySymbol::Zero);
}

TEST_CASE("pulses past the last period are ignored") {
  const TernaryWord word = decide_word({0.010, 5.0}, kTiming, 1);
  CHECK(word == TernaryWord{TernarySymbol::Zero});
  CHECK(decide_word({-1.0}, kTiming, 1) == TernaryWord{TernarySymbol::Erasure});
}

TEST_CASE("decision length always equals the symbol count") {
  Rng rng(6);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t n = 1 + rng.below(40);
    const PulseTrain rx =
        apply_channel(modulate(rng.bits(n), kTiming), {kTiming.t_slot(), 0.5}, rng);
    CHECK(decide_word(rx, kTiming, n).size() == n);
  }
}

TEST_CASE("hard decisions on nominal pulses") {
  CHECK(decide_word_hard({0.010, 0.0575}, kTiming, 2) == BitVector{0, 1});
  CHECK(decide_word_hard({0.036}, kTiming, 1) == BitVector{1});  // guard arrival decides 1
  CHECK(decide_word_hard({}, kTiming, 1) == BitVector{1});       // missing pulse decides 1
}

TEST_CASE("hard decision round trip is exact for every short word") {
  for (std::size_t len = 1; len <= 12; ++len) {
    for (std::uint32_t v = 0; v < (1u << len); ++v) {
      BitVector bits(len);
      for (std::size_t i = 0; i < len; ++i) bits[i] = (v >> i) & 1u;
      if (decide_word_hard(modulate(bits, kTiming), kTiming, len) != bits) {
        CAPTURE(len);
        CAPTURE(v);
        FAIL("round trip mismatch");
      }
    }
  }
}

TEST_CASE("hard decisions recover words whose pulses stay decidable") {
  // Pulses that stay inside their own symbol period can never swap arrival
  // order (consecutive periods are disjoint), which is why the per-period
  // rule matches the simple in-order rule whenever delays are small. A zero
  // survives any delay below t_slot; a one survives anything below
  // t_slot + t_g (a guard arrival still decides 1).
  Rng rng(77);
  for (int trial = 0; trial < 200; ++trial) {
    const BitVector bits = rng.bits(1 + rng.below(30));
    PulseTrain rx = modulate(bits, kTiming);
    for (std::size_t k = 0; k < rx.size(); ++k) {
      const double margin = bits[k] ? kTiming.t_slot() + kTiming.t_g() : kTiming.t_slot();
      rx[k] += 0.999 * margin * rng.uniform();
    }
    std::sort(rx.begin(), rx.end());
    CHECK(decide_word_hard(rx, kTiming, bits.size()) == bits);
  }
}

TEST_CASE("noiseless round trip has no erasures") {
  Rng rng(7);
  for (int trial = 0; trial < 40; ++trial) {
    const BitVector bits = rng.bits(1 + rng.below(100));
    const PulseTrain rx = apply_channel(modulate(bits, kTiming), {0.0, 0.0}, rng);
    const TernaryWord word = decide_word(rx, kTiming, bits.size());
    for (std::size_t i = 0; i < bits.size(); ++i) {
      CHECK(word[i] != TernarySymbol::Erasure);
      CHECK(static_cast<Bit>(word[i]) == bits[i]);
    }
  }
}

TEST_CASE("equal seeds give equal pulse fates on a shared prefix") {
  // The sweep harness pairs coded and uncoded runs through one channel
  // seed; a longer train must not disturb the fate of the common pulses.
  Rng bits_rng(99);
  const BitVector head = bits_rng.bits(100);
  BitVector longer = head;
  const BitVector tail = bits_rng.bits(50);
  longer.insert(longer.end(), tail.begin(), tail.end());

  Rng a(555), b(555);
  const ChannelParams params{0.8 * kTiming.t_slot(), 0.1};
  const PulseTrain rx_short = apply_channel(modulate(head, kTiming), params, a);
  const PulseTrain rx_long = apply_channel(modulate(longer, kTiming), params, b);
  // Every short-run arrival appears in the long run (sorted multisets).
  CHECK(std::includes(rx_long.begin(), rx_long.end(), rx_short.begin(), rx_short.end()));
}

TEST_CASE("a delayed one is never decided as zero in its own period") {
  Rng rng(8);
  for (double mean : {0.1, 0.5, 1.0, 4.0}) {
    int zeros = 0;
    for (int trial = 0; trial < 10000; ++trial) {
      const PulseTrain rx =
          apply_channel(modulate({1}, kTiming), {mean * kTiming.t_slot(), 0.0}, rng);
      if (decide_word(rx, kTiming, 1)[0] == TernarySymbol::Zero) ++zeros;
    }
    CHECK(zeros == 0);
  }
}
