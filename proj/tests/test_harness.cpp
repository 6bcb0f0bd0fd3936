#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <sstream>

#include "gm/harness.hpp"

using namespace gm;

namespace {

SweepSpec base_spec() {
  SweepSpec spec;
  spec.normalized_delays = {0.0};
  spec.drop_rate = 0.0;
  spec.n_info_bits = 500;
  spec.n_trials = 20;
  spec.seed = 99;
  return spec;
}

}  // namespace

TEST_CASE("sweep validation") {
  SweepSpec spec = base_spec();
  spec.normalized_delays.clear();
  CHECK_THROWS_AS(validate(spec), ConfigError);
  spec = base_spec();
  spec.normalized_delays = {-0.5};
  CHECK_THROWS_AS(validate(spec), ConfigError);
  spec = base_spec();
  spec.drop_rate = 1.5;
  CHECK_THROWS_AS(validate(spec), ConfigError);
  spec = base_spec();
  spec.n_trials = 0;
  CHECK_THROWS_AS(validate(spec), ConfigError);
}

TEST_CASE("noiseless sweeps have zero errors, coded or not") {
  SweepSpec spec = base_spec();
  for (const char* code : {"", "hamm47", "rm14"}) {
    spec.code = *code ? find_code(code) : nullptr;
    const auto points = run_ber_sweep(spec);
    REQUIRE(points.size() == 1);
    CHECK(points[0].bit_errors == 0);
    CHECK(points[0].ber == 0.0);
  }
}

TEST_CASE("certain drop gives a guessing-rate uncoded ber") {
  SweepSpec spec = base_spec();
  spec.drop_rate = 1.0;
  spec.n_info_bits = 2000;
  spec.n_trials = 50;
  const auto points = run_ber_sweep(spec);
  const double n = static_cast<double>(points[0].info_bits);
  CHECK(std::fabs(points[0].ber - 0.5) <= 3.0 * std::sqrt(0.25 / n));
}

TEST_CASE("ber points carry consistent bookkeeping") {
  SweepSpec spec = base_spec();
  spec.normalized_delays = {0.1, 0.5};
  spec.code = find_code("rep13");
  const auto points = run_ber_sweep(spec);
  REQUIRE(points.size() == 2);
  for (const auto& p : points) {
    CHECK(p.code_name == "rep13");
    CHECK(p.rate == doctest::Approx(1.0 / 3.0));
    CHECK(p.trials == spec.n_trials);
    CHECK(p.info_bits == spec.n_trials * spec.n_info_bits);
    CHECK(p.ber == static_cast<double>(p.bit_errors) / static_cast<double>(p.info_bits));
    CHECK(p.ber >= 0.0);
    CHECK(p.ber <= 1.0);
  }
}

TEST_CASE("wilson halfwidth shrinks like the square root of the count") {
  const double w1 = wilson_halfwidth(50, 1000);
  const double w2 = wilson_halfwidth(5000, 100000);
  CHECK(w2 < w1);
  CHECK(w1 / w2 == doctest::Approx(10.0).epsilon(0.05));
  CHECK(wilson_halfwidth(0, 0) == 0.0);
}

TEST_CASE("identical sweep specs produce byte-identical csv") {
  SweepSpec spec = base_spec();
  spec.normalized_delays = {0.05, 0.3};
  spec.drop_rate = 0.02;
  spec.code = find_code("hamm47");
  std::ostringstream a, b;
  write_ber_csv(run_ber_sweep(spec), a);
  write_ber_csv(run_ber_sweep(spec), b);
  CHECK(a.str() == b.str());
  CHECK(a.str().starts_with(
      "normalized_delay,code,rate,trials,info_bits,bit_errors,ber,ci95\n"));
}

TEST_CASE("rerunning a sweep never changes its counts") {
  SweepSpec spec = base_spec();
  spec.normalized_delays = {0.2};
  spec.drop_rate = 0.02;
  const auto a = run_ber_sweep(spec);
  const auto b = run_ber_sweep(spec);
  CHECK(a[0].bit_errors == b[0].bit_errors);
  CHECK(a[0].info_bits == b[0].info_bits);
}

TEST_CASE("detection sweep at zero delay sits on the quantization floor") {
  SweepSpec spec = base_spec();
  spec.normalized_delays = {0.0};
  spec.n_trials = 200;
  const auto points = run_detection_sweep(spec, DetectOptions{});
  REQUIRE(points.size() == 1);
  // Every error is the sub-bin clock offset, so each is below one bin and
  // the mean square sits near E[phi^2] = 1/3 for a uniform offset phi.
  CHECK(points[0].mse > 0.0);
  CHECK(points[0].mse <= 1.0);
  CHECK(points[0].mse == doctest::Approx(1.0 / 3.0).epsilon(0.25));
  CHECK(points[0].detect_rate > 0.99);
}

TEST_CASE("detection error grows with delay") {
  SweepSpec spec = base_spec();
  spec.drop_rate = 0.02;
  spec.normalized_delays = {0.01, 1.0};
  spec.n_trials = 300;
  const auto points = run_detection_sweep(spec, DetectOptions{});
  CHECK(points[0].mse <= points[1].mse);
}

TEST_CASE("a sweep with no acceptable peak is degenerate") {
  SweepSpec spec = base_spec();
  spec.normalized_delays = {50.0};  // delays far beyond the symbol period
  spec.n_trials = 5;
  DetectOptions opts;
  opts.threshold_frac = 1.0;
  CHECK_THROWS_AS(run_detection_sweep(spec, opts), DegenerateExperiment);
}

TEST_CASE("capacity curve endpoints") {
  const GmTiming timing(0.0175, 0.005);
  const auto points = run_capacity_curve(timing, 0.0, {0.0, 1.0 / std::log(2.0)});
  REQUIRE(points.size() == 2);
  CHECK(points[0].capacity_bits == doctest::Approx(1.0).epsilon(1e-12));
  // At the half-life delay the transition rows are (.5,.25,.25)/(0,.5,.5).
  const TransitionMatrix tm =
      transitions_closed_form(timing, {timing.t_slot() / std::log(2.0), 0.0});
  double best = 0.0;
  for (double g = 0.0; g <= 1.0; g += 1e-5) best = std::max(best, mutual_information(tm, g));
  CHECK(points[1].capacity_bits == doctest::Approx(best).epsilon(1e-8));
}

TEST_CASE("capacity never increases with the drop rate") {
  const GmTiming timing(0.0175, 0.005);
  const std::vector<double> delays{0.0, 0.2, 1.0};
  double prev[3] = {2.0, 2.0, 2.0};
  for (double rho : {0.0, 0.1, 0.3, 0.7, 1.0}) {
    const auto points = run_capacity_curve(timing, rho, delays);
    for (std::size_t i = 0; i < delays.size(); ++i) {
      CHECK(points[i].capacity_bits <= prev[i] + 1e-12);
      prev[i] = points[i].capacity_bits;
    }
  }
}

TEST_CASE("monte carlo capacity curve stays close to the closed form") {
  const GmTiming timing(0.0175, 0.04);  // generous guard keeps the models aligned
  const auto cf = run_capacity_curve(timing, 0.02, {0.3});
  const auto mc = run_capacity_curve(timing, 0.02, {0.3}, true, 400000, 7);
  CHECK(std::fabs(cf[0].capacity_bits - mc[0].capacity_bits) < 0.01);
}

TEST_CASE("csv formats match their schemas") {
  std::ostringstream det, cap;
  write_detect_csv({{0.5, 10, 1.25, 0.9}}, det);
  CHECK(det.str() == "normalized_delay,trials,mse,detect_rate\n0.5,10,1.25,0.9\n");
  write_capacity_csv({{0.5, 0.02, 0.75, 0.5}}, cap);
  CHECK(cap.str() == "normalized_delay,drop_rate,capacity_bits,gamma_star\n0.5,0.02,0.75,0.5\n");
}
