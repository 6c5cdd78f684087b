#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <vector>

#include "expsmooth/compensated.hpp"
#include "expsmooth/stats.hpp"

using namespace expsmooth;

namespace {

double rel(double a, double b) {
  if (a == b) return 0.0;
  return std::fabs(a - b) / std::max(std::fabs(a), std::fabs(b));
}

}  // namespace

TEST_CASE("double-double accumulation survives adversarial cancellation") {
  // Plain double summation loses the small term entirely.
  double plain = 0.0;
  plain += 1.0;
  plain += 1e100;
  plain += -1e100;
  CHECK(plain == 0.0);

  DoubleDouble dd;
  dd = dd.add(1.0);
  dd = dd.add(1e100);
  dd = dd.add(-1e100);
  CHECK(dd.value() == 1.0);

  // and through scaling: (1 + eps) * 3 - 3 recovered to full precision
  DoubleDouble scaled{1.0, 0.0};
  scaled = scaled.add(0x1.0p-70);
  scaled = scaled.mul(3.0);
  scaled = scaled.add(-3.0);
  CHECK(scaled.value() == doctest::Approx(3.0 * 0x1.0p-70).epsilon(1e-20));

  CHECK(dd_ratio({1.0, 0.0}, {3.0, 0.0}) == doctest::Approx(1.0 / 3.0).epsilon(1e-16));
}

TEST_CASE("simulate: a constant signal is reproduced") {
  SimulationConfig config;
  config.steps = 5000;
  config.burn_in = 100;
  config.mu = 7.0;
  config.sigma = 0.0;
  config.gap = 1.0;
  config.tau = 9.49;
  config.seed = 3;
  for (Method m : {Method::V1, Method::V2, Method::V2Corrected}) {
    config.method = m;
    const MomentReport report = simulate_constant_rate(config);
    CHECK(rel(report.empirical_mean, 7.0) <= 1e-12);
    CHECK(report.empirical_variance <= 1e-20);
    CHECK(report.predicted_mean == 7.0);
    CHECK(report.predicted_variance == 0.0);
    CHECK(report.samples_used == 4900);
  }
}

TEST_CASE("simulate: a gap far beyond tau passes the raw signal through") {
  SimulationConfig config;
  config.steps = 20000;
  config.burn_in = 0;
  config.mu = 0.0;
  config.sigma = 1.0;
  config.gap = 100.0;
  config.tau = 1.0;
  config.seed = 17;
  const MomentReport report = simulate_constant_rate(config);
  CHECK(report.alpha <= 1e-40);
  CHECK(report.predicted_variance == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(std::fabs(report.empirical_variance - 1.0) <= 0.05);
  CHECK(std::fabs(report.empirical_mean) <= 4.0 / std::sqrt(20000.0));
}

TEST_CASE("simulate: equilibrium variance matches (1-a)/(1+a) within 5%") {
  // The mean of the smoothed series has the same standard error as the raw
  // mean, sigma/sqrt(n): smoothing trades variance for autocorrelation one
  // for one. The 4-sigma band below reflects that.
  struct Case {
    double alpha;
    std::int64_t steps;
  };
  for (const Case c : {Case{0.5, 110000}, Case{0.9, 140000}, Case{0.99, 400000}}) {
    SimulationConfig config;
    config.steps = c.steps;
    config.burn_in = 1000;
    config.mu = 0.0;
    config.sigma = 1.0;
    config.gap = 1.0;
    config.tau = -1.0 / std::log(c.alpha);
    config.seed = 7;
    config.method = Method::V1;
    const MomentReport report = simulate_constant_rate(config);
    const double predicted = (1.0 - c.alpha) / (1.0 + c.alpha);
    CHECK(report.predicted_variance == doctest::Approx(predicted).epsilon(1e-10));
    CHECK(std::fabs(report.empirical_variance - predicted) <= 0.05 * predicted);
    CHECK(std::fabs(report.empirical_mean) <=
          4.0 / std::sqrt(static_cast<double>(report.samples_used)));
  }
}

TEST_CASE("simulate: all three methods agree at constant rate") {
  SimulationConfig config;
  config.steps = 20000;
  config.burn_in = 500;
  config.mu = 2.0;
  config.sigma = 0.5;
  config.gap = 1.0;
  config.tau = 4.0;
  config.seed = 8;

  config.method = Method::V1;
  const MomentReport v1 = simulate_constant_rate(config);
  config.method = Method::V2;
  const MomentReport v2 = simulate_constant_rate(config);
  config.method = Method::V2Corrected;
  const MomentReport v2c = simulate_constant_rate(config);

  CHECK(rel(v1.empirical_mean, v2.empirical_mean) <= 1e-9);
  CHECK(rel(v1.empirical_variance, v2.empirical_variance) <= 1e-6);
  CHECK(v2.empirical_mean == v2c.empirical_mean);
  CHECK(v2.empirical_variance == v2c.empirical_variance);
}

TEST_CASE("simulate: identical seed and config reproduce the report") {
  SimulationConfig config;
  config.steps = 3000;
  config.burn_in = 100;
  config.mu = -1.0;
  config.sigma = 2.0;
  config.gap = 0.5;
  config.tau = 2.0;
  config.seed = 77;
  const MomentReport a = simulate_constant_rate(config);
  const MomentReport b = simulate_constant_rate(config);
  CHECK(a.empirical_mean == b.empirical_mean);
  CHECK(a.empirical_variance == b.empirical_variance);
  CHECK(a.alpha == b.alpha);
  CHECK(a.samples_used == b.samples_used);
}

TEST_CASE("simulate: config validation") {
  SimulationConfig config;
  config.steps = 100;
  config.burn_in = 100;  // not < steps
  CHECK_THROWS_AS(simulate_constant_rate(config), std::invalid_argument);
  config.burn_in = 10;
  config.sigma = -1.0;
  CHECK_THROWS_AS(simulate_constant_rate(config), std::invalid_argument);
  config.sigma = 1.0;
  config.gap = 0.0;
  CHECK_THROWS_AS(simulate_constant_rate(config), std::invalid_argument);
  config.gap = 1.0;
  config.tau = -1.0;
  CHECK_THROWS_AS(simulate_constant_rate(config), std::invalid_argument);
  config.tau = 1.0;
  config.steps = 0;
  CHECK_THROWS_AS(simulate_constant_rate(config), std::invalid_argument);
}

TEST_CASE("stress: benign alpha keeps every method at the oracle") {
  const StressReport report = stress_extreme_alpha(DecayFactor(0.5), 1000, 1);
  CHECK(report.max_rel_error_v1 <= 1e-12);
  CHECK(report.max_rel_error_v2 <= 1e-12);
  CHECK(report.max_rel_error_v2c <= 1e-12);
  CHECK(report.alpha == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(report.max_tilde_w <= 2.0 + 1e-9);  // equilibrium weight 1/(1-a) = 2
}

TEST_CASE("stress: alpha -> 1 grows the v1 weight, v2 stays normalized") {
  const std::int64_t steps = 10000;
  const StressReport report = stress_extreme_alpha(DecayFactor(1.0 - 1e-6), steps, 2);
  const double a = report.alpha;
  const double expected_peak = -std::expm1(static_cast<double>(steps) * std::log(a)) / (1.0 - a);
  CHECK(rel(report.max_tilde_w, expected_peak) <= 1e-6);
  CHECK(report.max_rel_error_tilde_w <= 1e-6);
  CHECK(report.min_bar_w > 0.0);
  CHECK(report.max_bar_w <= 1.0);
  CHECK(report.max_rel_error_v1 <= 1e-9);
  CHECK(report.max_rel_error_v2 <= 1e-9);
  CHECK(report.max_rel_error_v2c <= 1e-9);
}

TEST_CASE("stress: alpha -> 0 tracks the newest sample") {
  const StressReport report = stress_extreme_alpha(DecayFactor(1e-12), 1000, 3);
  CHECK(report.max_rel_error_v1 <= 1e-12);
  CHECK(report.max_rel_error_v2 <= 1e-12);
  CHECK(report.max_rel_error_v2c <= 1e-12);
  CHECK(report.max_tilde_w <= 1.0 + 1e-11);
}

TEST_CASE("stress: argument validation") {
  CHECK_THROWS_AS(stress_extreme_alpha(DecayFactor(0.0), 100, 1), std::invalid_argument);
  CHECK_THROWS_AS(stress_extreme_alpha(DecayFactor(1.0), 100, 1), std::invalid_argument);
  CHECK_THROWS_AS(stress_extreme_alpha(DecayFactor(0.5), 0, 1), std::invalid_argument);
}

TEST_CASE("divergence: constant gaps are v2's exact regime") {
  const StressReport report =
      variable_rate_divergence(GapLaw::Constant, 1000, TimeScale(5.0), 4);
  CHECK(report.max_rel_error_v2 <= 1e-9);
  CHECK(report.max_rel_error_v1 <= 1e-9);
  CHECK(report.max_rel_error_v2c <= 1e-9);
}

TEST_CASE("divergence: random gaps expose plain v2, not v1 or the correction") {
  for (GapLaw law : {GapLaw::Exponential, GapLaw::Uniform, GapLaw::Bursty}) {
    const StressReport report = variable_rate_divergence(law, 1000, TimeScale(5.0), 5);
    CHECK(report.max_rel_error_v1 <= 1e-9);
    CHECK(report.max_rel_error_v2c <= 1e-9);
    CHECK(report.max_rel_error_v2 > 1e-9);
  }
}

TEST_CASE("divergence: three-observation stream matches the hand expansion") {
  const std::vector<Observation> obs{{0.0, 1.0}, {1.0, 2.0}, {3.0, 3.0}};
  const StressReport report = compare_methods_to_oracle(obs, TimeScale(1.0));

  const double a = std::exp(-1.0);
  const double b = std::exp(-2.0);
  // plain v2 folded by hand with alpha1 = a
  const double bx2 = (1.0 - a) * 2.0 + a * ((1.0 - a) * 1.0);
  const double bw2 = (1.0 - a) + a * (1.0 - a);
  const double bx3 = (1.0 - b) * 3.0 + b * bx2;
  const double bw3 = (1.0 - b) + b * bw2;
  const double v2_final = bx3 / bw3;
  const double truth = (3.0 + 2.0 * std::exp(-2.0) + std::exp(-3.0)) /
                       (1.0 + std::exp(-2.0) + std::exp(-3.0));
  const double expected_deviation = rel(v2_final, truth);

  CHECK(expected_deviation > 1e-6);  // the gap change genuinely shows
  CHECK(report.max_rel_error_v2 == doctest::Approx(expected_deviation).epsilon(1e-10));
  CHECK(report.max_rel_error_v1 <= 1e-14);
  CHECK(report.max_rel_error_v2c <= 1e-14);
}

TEST_CASE("v1 weight converges to the geometric closed form") {
  // Exactly representable gap: every step sees the identical decay factor,
  // which is what the constant-rate closed form describes.
  const double gap = 0.125;
  const TimeScale tau(gap / -std::log(0.9));
  const double a = decay_factor(gap, tau).value();

  StateV1 state = v1_init({0.0, 1.0});
  double previous_w = state.tilde_w;
  for (int k = 2; k <= 1000; ++k) {
    state = v1_update(state, {static_cast<double>(k - 1) * gap, 1.0}, tau);
    const double closed =
        -std::expm1(static_cast<double>(k) * std::log(a)) / (1.0 - a);
    REQUIRE(rel(state.tilde_w, closed) <= 1e-9);
    // monotone up to an ulp of jitter once saturated at 1/(1-a)
    REQUIRE(state.tilde_w >= previous_w * (1.0 - 1e-15));
    previous_w = std::max(previous_w, state.tilde_w);
  }
  CHECK(rel(previous_w, 1.0 / (1.0 - a)) <= 1e-6);
}
