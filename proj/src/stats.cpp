#include "expsmooth/stats.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "expsmooth/compensated.hpp"
#include "expsmooth/random.hpp"

namespace expsmooth {

namespace {

std::string num(double v) {
  char buffer[32];
  const auto result = std::to_chars(buffer, buffer + sizeof(buffer), v);
  return std::string(buffer, result.ptr);
}

double rel_diff(double a, double b) {
  if (a == b) {
    return 0.0;
  }
  const double denom = std::max(std::fabs(a), std::fabs(b));
  return denom > 0.0 ? std::fabs(a - b) / denom : 0.0;
}

void validate_config(const SimulationConfig& config) {
  if (config.steps < 1) {
    throw std::invalid_argument("steps must be >= 1, got " + std::to_string(config.steps));
  }
  if (config.burn_in < 0 || config.burn_in >= config.steps) {
    throw std::invalid_argument("burn-in must satisfy 0 <= burn_in < steps");
  }
  if (!std::isfinite(config.mu)) {
    throw std::invalid_argument("mu must be finite");
  }
  if (!std::isfinite(config.sigma) || config.sigma < 0.0) {
    throw std::invalid_argument("sigma must be finite and >= 0");
  }
  if (!std::isfinite(config.gap) || config.gap <= 0.0) {
    throw std::invalid_argument("gap must be finite and > 0");
  }
}

// Stress streams draw values from [1, 2]: the smoothed value then stays well
// away from zero, so relative error against the oracle measures accumulation
// error rather than cancellation in the signal itself.
std::vector<Observation> make_stream(std::int64_t steps, double constant_gap, Rng& rng) {
  std::vector<Observation> stream;
  stream.reserve(static_cast<std::size_t>(steps));
  double t = 0.0;
  for (std::int64_t k = 0; k < steps; ++k) {
    if (k > 0) {
      t += constant_gap;
    }
    stream.push_back({t, rng.uniform(1.0, 2.0)});
  }
  return stream;
}

double draw_gap(GapLaw law, Rng& rng) {
  switch (law) {
    case GapLaw::Constant:
      return 1.0;
    case GapLaw::Exponential:
      return rng.exponential(1.0);
    case GapLaw::Uniform:
      return rng.uniform(0.1, 1.9);
    case GapLaw::Bursty:
      // 9:1 mixture of short and long waits, mean 1 overall.
      return rng.uniform01() < 0.9 ? rng.exponential(0.2) : rng.exponential(8.2);
  }
  throw std::invalid_argument("unknown gap law");
}

}  // namespace

MomentReport simulate_constant_rate(const SimulationConfig& config) {
  validate_config(config);
  const TimeScale tau(config.tau);
  const DecayFactor alpha = decay_factor(config.gap, tau);

  Rng rng(config.seed);
  StateV1 v1;
  StateV2 v2;
  double t = 0.0;

  std::int64_t used = 0;
  double mean = 0.0;
  double m2 = 0.0;

  for (std::int64_t k = 0; k < config.steps; ++k) {
    const Observation obs{t, rng.normal(config.mu, config.sigma)};
    double smoothed = 0.0;
    if (config.method == Method::V1) {
      v1 = k == 0 ? v1_init(obs) : v1_update(v1, obs, tau);
      smoothed = v1_value(v1).x_hat;
    } else if (config.method == Method::V2) {
      v2 = k == 0 ? v2_init(obs, alpha) : v2_update(v2, obs, tau);
      smoothed = v2_value(v2).x_hat;
    } else {
      v2 = k == 0 ? v2_init(obs, alpha) : v2_update_gap_corrected(v2, obs, tau);
      smoothed = v2_value(v2).x_hat;
    }
    t += config.gap;

    if (k >= config.burn_in) {
      ++used;
      const double delta = smoothed - mean;
      mean += delta / static_cast<double>(used);
      m2 += delta * (smoothed - mean);
    }
  }

  MomentReport report;
  report.empirical_mean = mean;
  report.empirical_variance = used > 1 ? m2 / static_cast<double>(used - 1) : 0.0;
  report.predicted_mean = config.mu;
  report.predicted_variance = variance_ratio(alpha) * config.sigma * config.sigma;
  report.alpha = alpha.value();
  report.samples_used = used;
  return report;
}

StressReport compare_methods_to_oracle(std::span<const Observation> observations,
                                       TimeScale tau) {
  if (observations.empty()) {
    throw EmptyInputError("method comparison requires at least one observation");
  }

  const DecayFactor alpha1 =
      observations.size() > 1
          ? decay_factor(observations[1].t - observations[0].t, tau)
          : DecayFactor(0.0);

  StressReport report;
  report.alpha = alpha1.value();
  report.steps = static_cast<std::int64_t>(observations.size());

  StateV1 v1;
  StateV2 v2;
  StateV2 v2c;
  DoubleDouble oracle_x;
  DoubleDouble oracle_w;
  double min_bar_w = std::numeric_limits<double>::infinity();

  bool first = true;
  double last_t = 0.0;
  for (const Observation& obs : observations) {
    if (first) {
      v1 = v1_init(obs);
      v2 = v2_init(obs, alpha1);
      v2c = v2_init(obs, alpha1);
      oracle_x = {obs.x, 0.0};
      oracle_w = {1.0, 0.0};
      first = false;
    } else {
      // The oracle consumes the same per-gap decay factors as the methods;
      // only the accumulation precision differs.
      const double a = decay_factor(obs.t - last_t, tau).value();
      v1 = v1_update(v1, obs, tau);
      v2 = v2_update(v2, obs, tau);
      v2c = v2_update_gap_corrected(v2c, obs, tau);
      oracle_x = oracle_x.mul(a).add(obs.x);
      oracle_w = oracle_w.mul(a).add(1.0);
    }
    last_t = obs.t;

    const double truth = dd_ratio(oracle_x, oracle_w);
    report.max_rel_error_v1 =
        std::max(report.max_rel_error_v1, rel_diff(v1_value(v1).x_hat, truth));
    report.max_rel_error_v2 =
        std::max(report.max_rel_error_v2, rel_diff(v2_value(v2).x_hat, truth));
    report.max_rel_error_v2c =
        std::max(report.max_rel_error_v2c, rel_diff(v2_value(v2c).x_hat, truth));
    report.max_tilde_w = std::max(report.max_tilde_w, v1.tilde_w);
    report.max_rel_error_tilde_w =
        std::max(report.max_rel_error_tilde_w, rel_diff(v1.tilde_w, oracle_w.value()));
    min_bar_w = std::min(min_bar_w, v2.bar_w);
    report.max_bar_w = std::max(report.max_bar_w, v2.bar_w);
  }
  report.min_bar_w = min_bar_w;
  return report;
}

StressReport stress_extreme_alpha(DecayFactor alpha, std::int64_t steps,
                                  std::uint64_t seed) {
  const double a = alpha.value();
  if (a <= 0.0 || a >= 1.0) {
    throw std::invalid_argument("stress requires 0 < alpha < 1, got " + num(a));
  }
  if (steps < 1) {
    throw std::invalid_argument("steps must be >= 1, got " + std::to_string(steps));
  }
  const TimeScale tau(1.0);
  const double gap = -std::log(a);
  Rng rng(seed);
  const std::vector<Observation> stream = make_stream(steps, gap, rng);
  return compare_methods_to_oracle(stream, tau);
}

StressReport variable_rate_divergence(GapLaw law, std::int64_t steps, TimeScale tau,
                                      std::uint64_t seed) {
  if (steps < 1) {
    throw std::invalid_argument("steps must be >= 1, got " + std::to_string(steps));
  }
  Rng rng(seed);
  std::vector<Observation> stream;
  stream.reserve(static_cast<std::size_t>(steps));
  double t = 0.0;
  for (std::int64_t k = 0; k < steps; ++k) {
    if (k > 0) {
      t += draw_gap(law, rng);
    }
    stream.push_back({t, rng.uniform(1.0, 2.0)});
  }
  return compare_methods_to_oracle(stream, tau);
}

}  // namespace expsmooth
