#include "gm/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

#include "gm/modem.hpp"
#include "gm/parallel.hpp"

namespace gm {

namespace {

// Sub-stream tags so data, channel and tie-break randomness stay decoupled
// per trial (coded and uncoded runs then share channel realizations).
enum : std::uint64_t { kDataStream = 0, kChannelStream = 1, kCoinStream = 2 };

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

}  // namespace

void validate(const SweepSpec& spec) {
  if (!(spec.drop_rate >= 0.0 && spec.drop_rate <= 1.0))
    throw ConfigError("SweepSpec: drop_rate must be in [0,1]");
  if (spec.normalized_delays.empty())
    throw ConfigError("SweepSpec: normalized_delays must be nonempty");
  for (double d : spec.normalized_delays) {
    if (!(d >= 0.0)) throw ConfigError("SweepSpec: normalized delays must be >= 0");
  }
  if (spec.n_trials < 1) throw ConfigError("SweepSpec: n_trials must be >= 1");
  if (spec.n_info_bits < 1) throw ConfigError("SweepSpec: n_info_bits must be >= 1");
}

double derive_t_bin(const GmTiming& timing, double t_bin_frac) {
  if (!(t_bin_frac > 0.0)) throw ConfigError("t_bin_frac must be > 0");
  const double target = t_bin_frac * timing.t_slot();
  const double n_bins = std::max(1.0, std::round(timing.t_sym() / target));
  return timing.t_sym() / n_bins;
}

double wilson_halfwidth(std::uint64_t errors, std::uint64_t n) {
  if (n == 0) return 0.0;
  const double z = 1.959963984540054;  // 97.5% normal quantile
  const double nn = static_cast<double>(n);
  const double p = static_cast<double>(errors) / nn;
  const double z2n = z * z / nn;
  return z * std::sqrt(p * (1.0 - p) / nn + z2n / (4.0 * nn)) / (1.0 + z2n);
}

namespace {

struct TrialErrors {
  std::uint64_t bit_errors = 0;
  std::uint64_t info_bits = 0;
};

TrialErrors run_ber_trial(const SweepSpec& spec, double mean_delay, Seed trial_seed) {
  Rng data_rng(derive_trial_seed(trial_seed, kDataStream));
  Rng chan_rng(derive_trial_seed(trial_seed, kChannelStream));
  Rng coin_rng(derive_trial_seed(trial_seed, kCoinStream));
  const ChannelParams params{mean_delay, spec.drop_rate};

  TrialErrors out;
  if (spec.code == nullptr) {
    const BitVector info = data_rng.bits(spec.n_info_bits);
    const PulseTrain rx = apply_channel(modulate(info, spec.timing), params, chan_rng);
    const TernaryWord word = decide_word(rx, spec.timing, info.size());
    out.info_bits = info.size();
    for (std::size_t i = 0; i < info.size(); ++i) {
      if (word[i] == TernarySymbol::Erasure) {
        // A receiver forced to guess: wrong half the time.
        out.bit_errors += coin_rng.bit();
      } else if (static_cast<Bit>(word[i]) != info[i]) {
        ++out.bit_errors;
      }
    }
    return out;
  }

  const LinearCode& code = *spec.code;
  const std::size_t blocks = (spec.n_info_bits + code.k() - 1) / code.k();
  const BitVector info = data_rng.bits(blocks * code.k());
  BitVector tx;
  tx.reserve(blocks * code.n());
  for (std::size_t b = 0; b < blocks; ++b) {
    const BitVector block(info.begin() + b * code.k(), info.begin() + (b + 1) * code.k());
    const BitVector cw = code.encode(block);
    tx.insert(tx.end(), cw.begin(), cw.end());
  }

  const PulseTrain rx = apply_channel(modulate(tx, spec.timing), params, chan_rng);
  const TernaryWord word = decide_word(rx, spec.timing, tx.size());
  out.info_bits = info.size();
  for (std::size_t b = 0; b < blocks; ++b) {
    const TernaryWord block(word.begin() + b * code.n(), word.begin() + (b + 1) * code.n());
    const BitVector decoded = code.decode_ml_erasure(block);
    for (std::size_t i = 0; i < code.k(); ++i) {
      if (decoded[i] != info[b * code.k() + i]) ++out.bit_errors;
    }
  }
  return out;
}

std::vector<BerPoint> run_ber_sweep_impl(const SweepSpec& spec, bool parallel) {
  validate(spec);
  std::vector<BerPoint> points;
  points.reserve(spec.normalized_delays.size());

  for (std::size_t p = 0; p < spec.normalized_delays.size(); ++p) {
    const double delay = spec.normalized_delays[p];
    const double mean_delay = delay * spec.timing.t_slot();
    std::vector<TrialErrors> trials(spec.n_trials);
    detail::for_each_index(spec.n_trials, parallel, [&](std::size_t t) {
      const Seed trial_seed = derive_trial_seed(spec.seed, p * spec.n_trials + t);
      trials[t] = run_ber_trial(spec, mean_delay, trial_seed);
    });

    BerPoint point;
    point.normalized_delay = delay;
    point.code_name = spec.code ? spec.code->name() : "uncoded";
    point.rate = spec.code ? spec.code->rate() : 1.0;
    point.trials = spec.n_trials;
    for (const auto& t : trials) {
      point.bit_errors += t.bit_errors;
      point.info_bits += t.info_bits;
    }
    point.ber = static_cast<double>(point.bit_errors) / static_cast<double>(point.info_bits);
    point.ci95_halfwidth = wilson_halfwidth(point.bit_errors, point.info_bits);
    points.push_back(std::move(point));
  }
  return points;
}

struct DetectTrial {
  double squared_error = 0.0;
  bool accepted = false;
};

std::vector<DetectPoint> run_detection_sweep_impl(const SweepSpec& spec,
                                                  const DetectOptions& opts, bool parallel) {
  validate(spec);
  if (opts.n_preamble < 1) throw ConfigError("detect sweep: n_preamble must be >= 1");
  if (opts.n_stream_symbols < opts.n_preamble)
    throw ConfigError("detect sweep: stream must be at least as long as the preamble");
  if (!(opts.threshold_frac > 0.0 && opts.threshold_frac <= 1.0))
    throw ConfigError("detect sweep: threshold_frac must be in (0,1]");
  if (opts.lambda_prime < 0.0) throw ConfigError("detect sweep: lambda_prime must be >= 0");

  const double t_bin = derive_t_bin(spec.timing, opts.t_bin_frac);
  const std::size_t bps = bins_per_symbol(spec.timing, t_bin);
  // One extra symbol of bins absorbs the random transmit clock offset.
  const std::size_t n_bins = (opts.n_stream_symbols + 1) * bps;

  std::vector<DetectPoint> points;
  points.reserve(spec.normalized_delays.size());
  std::uint64_t total_accepted = 0;

  for (std::size_t p = 0; p < spec.normalized_delays.size(); ++p) {
    const double delay = spec.normalized_delays[p];
    const double mean_delay = delay * spec.timing.t_slot();
    const ChannelParams params{mean_delay, spec.drop_rate};
    double lambda_prime = opts.lambda_prime;
    if (lambda_prime == 0.0) {
      lambda_prime = mean_delay > 0.0 ? 1.0 / mean_delay : 2.0 / spec.timing.t_slot();
    }

    std::vector<DetectTrial> trials(spec.n_trials);
    detail::for_each_index(spec.n_trials, parallel, [&](std::size_t t) {
      const Seed trial_seed = derive_trial_seed(spec.seed, p * spec.n_trials + t);
      Rng data_rng(derive_trial_seed(trial_seed, kDataStream));
      Rng chan_rng(derive_trial_seed(trial_seed, kChannelStream));

      BitVector stream = data_rng.bits(opts.n_stream_symbols);
      const BitVector preamble = data_rng.bits(opts.n_preamble);
      const std::size_t pos =
          data_rng.below(opts.n_stream_symbols - opts.n_preamble + 1);
      std::copy(preamble.begin(), preamble.end(), stream.begin() + pos);
      // The transmitter's symbol grid sits at an arbitrary offset from the
      // receiver's bin grid; the true start is fractional in bins, which is
      // what gives the low-delay quantization floor its nonzero value.
      const double clock_offset = data_rng.uniform() * spec.timing.t_sym();

      PulseTrain tx = modulate(stream, spec.timing);
      for (double& time : tx) time += clock_offset;
      const PulseTrain rx = apply_channel(tx, params, chan_rng);
      const BinnedSignal binned = bin_signal(rx, t_bin, n_bins);
      const PreambleTemplate tmpl =
          build_template(preamble, spec.timing, t_bin, lambda_prime);
      // Trials are the parallel axis; keep the per-trial correlation serial.
      const DetectionResult res = detect_serial(binned, tmpl, opts.threshold_frac);

      const double true_start =
          (static_cast<double>(pos) * spec.timing.t_sym() + clock_offset) / t_bin;
      const double err = static_cast<double>(res.n_hat) - true_start;
      trials[t].squared_error = err * err;
      trials[t].accepted = res.accepted;
    });

    DetectPoint point;
    point.normalized_delay = delay;
    point.trials = spec.n_trials;
    double sq_sum = 0.0;
    std::uint64_t accepted = 0;
    for (const auto& t : trials) {  // ordered reduction keeps output thread-count independent
      sq_sum += t.squared_error;
      accepted += t.accepted ? 1 : 0;
    }
    point.mse = sq_sum / static_cast<double>(spec.n_trials);
    point.detect_rate = static_cast<double>(accepted) / static_cast<double>(spec.n_trials);
    total_accepted += accepted;
    points.push_back(point);
  }

  if (total_accepted == 0)
    throw DegenerateExperiment("detection sweep: no trial was ever accepted");
  return points;
}

}  // namespace

std::vector<BerPoint> run_ber_sweep(const SweepSpec& spec) { return run_ber_sweep_impl(spec, true); }

std::vector<BerPoint> run_ber_sweep_serial(const SweepSpec& spec) {
  return run_ber_sweep_impl(spec, false);
}

std::vector<DetectPoint> run_detection_sweep(const SweepSpec& spec, const DetectOptions& opts) {
  return run_detection_sweep_impl(spec, opts, true);
}

std::vector<DetectPoint> run_detection_sweep_serial(const SweepSpec& spec,
                                                    const DetectOptions& opts) {
  return run_detection_sweep_impl(spec, opts, false);
}

std::vector<CapacityPoint> run_capacity_curve(const GmTiming& timing, double drop_rate,
                                              const std::vector<double>& normalized_delays,
                                              bool monte_carlo, std::uint64_t mc_symbols,
                                              Seed seed) {
  if (normalized_delays.empty()) throw ConfigError("capacity curve: no delays given");
  std::vector<CapacityPoint> points;
  points.reserve(normalized_delays.size());
  for (std::size_t i = 0; i < normalized_delays.size(); ++i) {
    const double delay = normalized_delays[i];
    const ChannelParams params{delay * timing.t_slot(), drop_rate};
    const TransitionMatrix tm =
        monte_carlo
            ? estimate_transitions_mc(timing, params, mc_symbols, derive_trial_seed(seed, i))
            : transitions_closed_form(timing, params);
    const CapacityResult cap = capacity(tm);
    points.push_back({delay, drop_rate, cap.capacity_bits, cap.gamma_star});
  }
  return points;
}

void write_ber_csv(const std::vector<BerPoint>& points, std::ostream& os) {
  os << "normalized_delay,code,rate,trials,info_bits,bit_errors,ber,ci95\n";
  for (const auto& p : points) {
    os << format_double(p.normalized_delay) << ',' << p.code_name << ','
       << format_double(p.rate) << ',' << p.trials << ',' << p.info_bits << ',' << p.bit_errors
       << ',' << format_double(p.ber) << ',' << format_double(p.ci95_halfwidth) << '\n';
  }
}

void write_detect_csv(const std::vector<DetectPoint>& points, std::ostream& os) {
  os << "normalized_delay,trials,mse,detect_rate\n";
  for (const auto& p : points) {
    os << format_double(p.normalized_delay) << ',' << p.trials << ',' << format_double(p.mse)
       << ',' << format_double(p.detect_rate) << '\n';
  }
}

void write_capacity_csv(const std::vector<CapacityPoint>& points, std::ostream& os) {
  os << "normalized_delay,drop_rate,capacity_bits,gamma_star\n";
  for (const auto& p : points) {
    os << format_double(p.normalized_delay) << ',' << format_double(p.drop_rate) << ','
       << format_double(p.capacity_bits) << ',' << format_double(p.gamma_star) << '\n';
  }
}

}  // namespace gm
