#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "gm/bcec.hpp"
#include "gm/core.hpp"
#include "gm/fec.hpp"
#include "gm/sync.hpp"

namespace gm {

/// One sweep configuration. Delays are normalized as mean_delay / t_slot.
/// Every trial derives its own generator from seed, so results are
/// byte-reproducible and independent of thread count.
struct SweepSpec {
  GmTiming timing{0.0175, 0.005};
  double drop_rate = 0.02;
  std::vector<double> normalized_delays;
  const LinearCode* code = nullptr;  // null runs the uncoded baseline
  std::size_t n_info_bits = 1000;    // info bits per trial (coded trials round up to blocks)
  std::size_t n_trials = 100;
  Seed seed = 1;
};

void validate(const SweepSpec& spec);

struct BerPoint {
  double normalized_delay = 0.0;
  std::string code_name;
  double rate = 1.0;
  std::uint64_t trials = 0;
  std::uint64_t info_bits = 0;
  std::uint64_t bit_errors = 0;
  double ber = 0.0;
  double ci95_halfwidth = 0.0;
};

struct DetectPoint {
  double normalized_delay = 0.0;
  std::uint64_t trials = 0;
  double mse = 0.0;         // mean squared bin error of the start estimate vs the true
                            // (fractional) start; never below the quantization floor
  double detect_rate = 0.0; // fraction of trials whose peak cleared the threshold
};

struct CapacityPoint {
  double normalized_delay = 0.0;
  double drop_rate = 0.0;
  double capacity_bits = 0.0;
  double gamma_star = 0.0;
};

/// Acquisition knobs mirrored by the CLI. t_bin is derived from
/// t_bin_frac by snapping to a whole number of bins per symbol:
/// n_bins = round(t_sym / (t_bin_frac * t_slot)), t_bin = t_sym / n_bins.
struct DetectOptions {
  std::size_t n_preamble = 30;
  std::size_t n_stream_symbols = 50;
  double t_bin_frac = 0.125;
  double lambda_prime = 0.0;  // 0: use 1/mean_delay, or 2/t_slot when mean_delay is 0
  double threshold_frac = 0.5;
};

/// Bin width for a timing per the DetectOptions snapping rule.
double derive_t_bin(const GmTiming& timing, double t_bin_frac);

/// 95% Wilson score halfwidth for errors out of n Bernoulli outcomes.
double wilson_halfwidth(std::uint64_t errors, std::uint64_t n);

/// Info-bit error rate per normalized delay. Coded runs encode per block,
/// decode with erasure-aware ML and count info-bit errors; the uncoded
/// baseline resolves each erasure with a fair seeded coin. Coded and
/// uncoded sweeps with the same seed see identical channel realizations
/// per trial index.
std::vector<BerPoint> run_ber_sweep(const SweepSpec& spec);
std::vector<BerPoint> run_ber_sweep_serial(const SweepSpec& spec);

/// Preamble acquisition error per normalized delay: each trial embeds a
/// fresh random preamble at a random symbol-aligned position inside random
/// traffic, offsets the transmit grid by a uniform sub-symbol clock offset
/// (the receiver's bins never align with a real transmitter), runs
/// detection and records the squared bin error of the start estimate.
/// Throws DegenerateExperiment if no trial at any delay was accepted.
std::vector<DetectPoint> run_detection_sweep(const SweepSpec& spec, const DetectOptions& opts);
std::vector<DetectPoint> run_detection_sweep_serial(const SweepSpec& spec,
                                                    const DetectOptions& opts);

/// Capacity of the channel family along a normalized-delay axis, using the
/// closed-form transitions or (with monte_carlo) the empirical estimate.
std::vector<CapacityPoint> run_capacity_curve(const GmTiming& timing, double drop_rate,
                                              const std::vector<double>& normalized_delays,
                                              bool monte_carlo = false,
                                              std::uint64_t mc_symbols = 1000000, Seed seed = 1);

// CSV emission. Header row always present, '.' decimal point, no locale.
void write_ber_csv(const std::vector<BerPoint>& points, std::ostream& os);
void write_detect_csv(const std::vector<DetectPoint>& points, std::ostream& os);
void write_capacity_csv(const std::vector<CapacityPoint>& points, std::ostream& os);

}  // namespace gm
