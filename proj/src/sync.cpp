#include "gm/sync.hpp"

#include <algorithm>
#include <cmath>

#include "gm/parallel.hpp"

namespace gm {

namespace {

// Relative tolerance for timestamps that sit mathematically on a grid
// boundary but rounded a few ulps low; see bin_signal and build_template.
constexpr double kGridSnap = 1e-9;

}  // namespace

BinnedSignal bin_signal(const PulseTrain& rx, double t_bin, std::size_t n_bins) {
  if (!(t_bin > 0.0)) throw ConfigError("bin_signal: t_bin must be > 0");
  BinnedSignal out;
  out.t_bin = t_bin;
  out.bins.assign(n_bins, 0);
  for (double q : rx) {
    const double pos = q / t_bin + kGridSnap;
    if (!(pos >= 0.0 && pos < static_cast<double>(n_bins))) continue;
    out.bins[static_cast<std::size_t>(pos)] = 1;
  }
  return out;
}

std::size_t bins_per_symbol(const GmTiming& timing, double t_bin) {
  if (!(t_bin > 0.0)) throw ConfigError("bins_per_symbol: t_bin must be > 0");
  const double ratio = timing.t_sym() / t_bin;
  const double rounded = std::round(ratio);
  if (rounded < 1.0 || std::fabs(ratio - rounded) > 1e-9 * rounded)
    throw ConfigError("t_bin must divide t_sym into a whole number of bins");
  return static_cast<std::size_t>(rounded);
}

PreambleTemplate build_template(const BitVector& preamble, const GmTiming& timing, double t_bin,
                                double lambda_prime) {
  if (preamble.empty()) throw ConfigError("build_template: empty preamble");
  if (!(lambda_prime > 0.0)) throw ConfigError("build_template: lambda_prime must be > 0");
  const std::size_t n_bins_sym = bins_per_symbol(timing, t_bin);

  PreambleTemplate tmpl;
  tmpl.lambda_prime = lambda_prime;
  tmpl.n_preamble = preamble.size();
  tmpl.weights.assign(preamble.size() * n_bins_sym, 0.0);

  // Discrete convolution of the binned preamble train with the truncated
  // delay pdf sampled on the bin grid. Anchoring each window at the pulse's
  // bin (the same indicator binning the receiver applies) puts f'(0) on the
  // bin an undelayed pulse actually lands in, whatever its sub-bin offset.
  const double window = timing.t_slot() + timing.t_g();
  const double snap = kGridSnap * t_bin;
  for (std::size_t k = 0; k < preamble.size(); ++k) {
    const double pulse =
        static_cast<double>(k) * timing.t_sym() + (preamble[k] ? timing.t_slot() : 0.0);
    const auto start = static_cast<std::size_t>(pulse / t_bin + kGridSnap);
    for (std::size_t m = 0; start + m < tmpl.weights.size(); ++m) {
      const double u = static_cast<double>(m) * t_bin;
      if (u >= window - snap) break;
      tmpl.weights[start + m] += lambda_prime * std::exp(-lambda_prime * u);
    }
  }
  return tmpl;
}

namespace {

std::vector<double> sliding_metric_impl(const BinnedSignal& rx, const PreambleTemplate& tmpl,
                                        bool parallel) {
  if (rx.bins.size() < tmpl.weights.size())
    throw ConfigError("sliding_metric: stream shorter than template");
  const std::size_t n_lags = rx.bins.size() - tmpl.weights.size() + 1;
  std::vector<double> metric(n_lags, 0.0);
  detail::for_each_index(n_lags, parallel, [&](std::size_t lag) {
    double m = 0.0;
    for (std::size_t j = 0; j < tmpl.weights.size(); ++j) {
      if (rx.bins[lag + j]) m += tmpl.weights[j];
    }
    metric[lag] = m;
  });
  return metric;
}

}  // namespace

std::vector<double> sliding_metric(const BinnedSignal& rx, const PreambleTemplate& tmpl) {
  return sliding_metric_impl(rx, tmpl, true);
}

std::vector<double> sliding_metric_serial(const BinnedSignal& rx, const PreambleTemplate& tmpl) {
  return sliding_metric_impl(rx, tmpl, false);
}

namespace {

DetectionResult peak_pick(const std::vector<double>& metric, const PreambleTemplate& tmpl,
                          double threshold_frac) {
  DetectionResult res;
  res.n_hat = 0;
  res.peak_metric = metric[0];
  for (std::size_t n = 1; n < metric.size(); ++n) {
    if (metric[n] > res.peak_metric) {  // strict: ties keep the smallest index
      res.peak_metric = metric[n];
      res.n_hat = n;
    }
  }
  res.accepted = res.peak_metric >= threshold_frac * tmpl.peak_bound();
  return res;
}

}  // namespace

DetectionResult detect(const BinnedSignal& rx, const PreambleTemplate& tmpl,
                       double threshold_frac) {
  if (!(threshold_frac > 0.0 && threshold_frac <= 1.0))
    throw ConfigError("detect: threshold_frac must be in (0,1]");
  return peak_pick(sliding_metric(rx, tmpl), tmpl, threshold_frac);
}

DetectionResult detect_serial(const BinnedSignal& rx, const PreambleTemplate& tmpl,
                              double threshold_frac) {
  if (!(threshold_frac > 0.0 && threshold_frac <= 1.0))
    throw ConfigError("detect: threshold_frac must be in (0,1]");
  return peak_pick(sliding_metric_serial(rx, tmpl), tmpl, threshold_frac);
}

double estimate_mean_delay(const PulseTrain& rx, const BitVector& preamble, const GmTiming& timing,
                           double t_hat_p) {
  if (preamble.empty()) throw ConfigError("estimate_mean_delay: empty preamble");

  double sum = 0.0;
  auto it = rx.begin();
  for (std::size_t k = 0; k < preamble.size(); ++k) {
    const double lo = t_hat_p + static_cast<double>(k) * timing.t_sym();
    const double hi = t_hat_p + static_cast<double>(k + 1) * timing.t_sym();
    it = std::lower_bound(it, rx.end(), lo);
    auto end = std::lower_bound(it, rx.end(), hi);
    if (end - it != 1)
      throw UnusablePreamble("estimate_mean_delay: preamble period without exactly one pulse");
    const double nominal = static_cast<double>(k) * timing.t_sym() +
                           (preamble[k] ? timing.t_slot() : 0.0);
    sum += *it - t_hat_p - nominal;
    it = end;
  }
  return std::max(0.0, sum / static_cast<double>(preamble.size()));
}

}  // namespace gm
