#pragma once

#include <cstddef>
#include <vector>

#include "gm/core.hpp"

namespace gm {

/// Event-indicator discretization of a pulse train: bin n is 1 iff at least
/// one pulse lies in [n*t_bin, (n+1)*t_bin). Multiple pulses in one bin
/// collapse to a single 1.
struct BinnedSignal {
  double t_bin = 0.0;
  std::vector<std::uint8_t> bins;
};

/// Delay-weighted preamble template: the binned preamble train convolved
/// with the truncated exponential lambda'*exp(-lambda'*t), t in
/// [0, t_slot + t_g), sampled on the bin grid. The bin holding each nominal
/// pulse carries f'(0) = lambda', so an undelayed reception correlates to
/// exactly peak_bound() at the true alignment.
struct PreambleTemplate {
  std::vector<double> weights;
  double lambda_prime = 0.0;
  std::size_t n_preamble = 0;

  double peak_bound() const { return static_cast<double>(n_preamble) * lambda_prime; }
};

struct DetectionResult {
  std::size_t n_hat = 0;        // bin index of the estimated preamble start
  double peak_metric = 0.0;
  double mean_delay_hat = 0.0;  // filled by the caller once estimated
  bool accepted = false;
};

/// Bins rx over [0, n_bins*t_bin); pulses outside the window are ignored.
/// Timestamps within 1e-9 of a bin boundary snap up into the bin whose left
/// edge they sit on, so exactly-aligned pulses land deterministically.
BinnedSignal bin_signal(const PulseTrain& rx, double t_bin, std::size_t n_bins);

/// Whole number of bins per symbol period, or ConfigError when t_bin does
/// not divide t_sym (within 1e-9 relative).
std::size_t bins_per_symbol(const GmTiming& timing, double t_bin);

/// Builds the delay-weighted template for a known preamble. t_bin must
/// divide t_sym into a whole number of bins (ConfigError otherwise);
/// lambda_prime must be positive. The template spans exactly
/// n_preamble * bins_per_symbol bins.
PreambleTemplate build_template(const BitVector& preamble, const GmTiming& timing, double t_bin,
                                double lambda_prime);

/// Correlation of the binned stream against the template at every bin lag
/// (full-overlap alignments only). Lags are independent, so the OpenMP and
/// serial versions are bit-identical.
std::vector<double> sliding_metric(const BinnedSignal& rx, const PreambleTemplate& tmpl);
std::vector<double> sliding_metric_serial(const BinnedSignal& rx, const PreambleTemplate& tmpl);

/// Peak pick over sliding_metric: n_hat is the argmax (smallest index on
/// ties) and the detection is accepted iff the peak reaches
/// threshold_frac * peak_bound(). Requires at least one lag (stream at
/// least as long as the template). detect_serial runs the reference
/// correlation; callers that already parallelize across trials use it to
/// keep the per-trial work single-threaded.
DetectionResult detect(const BinnedSignal& rx, const PreambleTemplate& tmpl, double threshold_frac);
DetectionResult detect_serial(const BinnedSignal& rx, const PreambleTemplate& tmpl,
                              double threshold_frac);

/// Mean network delay estimated from a drop-free preamble reception: the
/// average of (arrival - t_hat_p - nominal offset) over the n_preamble
/// periods following t_hat_p, clamped at zero. Each period must contain
/// exactly one pulse; otherwise UnusablePreamble is thrown and the caller
/// falls back to its configured lambda'.
double estimate_mean_delay(const PulseTrain& rx, const BitVector& preamble, const GmTiming& timing,
                           double t_hat_p);

}  // namespace gm
