#pragma once

#include <cstdint>
#include <span>

#include "expsmooth/calibration.hpp"
#include "expsmooth/smoother.hpp"

namespace expsmooth {

enum class Method { V1, V2, V2Corrected };

enum class GapLaw { Constant, Exponential, Uniform, Bursty };

struct SimulationConfig {
  std::int64_t steps = 0;
  std::int64_t burn_in = 1000;  // equilibrium transient to discard
  double mu = 0.0;
  double sigma = 1.0;
  double gap = 1.0;
  double tau = 1.0;
  std::uint64_t seed = 0;
  Method method = Method::V1;
};

// Equilibrium moments of the smoothed output against the closed-form
// predictions for an i.i.d. input at constant rate.
struct MomentReport {
  double empirical_mean = 0.0;
  double empirical_variance = 0.0;
  double predicted_mean = 0.0;
  double predicted_variance = 0.0;  // variance_ratio(alpha) * sigma^2
  double alpha = 0.0;
  std::int64_t samples_used = 0;
};

// Per-method worst-case deviation from the defining sums re-evaluated in
// double-double arithmetic over one shared input stream.
struct StressReport {
  double alpha = 0.0;  // decay factor of the first inter-observation gap
  std::int64_t steps = 0;
  double max_rel_error_v1 = 0.0;
  double max_rel_error_v2 = 0.0;
  double max_rel_error_v2c = 0.0;
  double max_tilde_w = 0.0;           // peak of V1's running weight
  double max_rel_error_tilde_w = 0.0; // V1 weight vs the extended-precision weight
  double min_bar_w = 0.0;             // bounds of plain V2's weight over the run
  double max_bar_w = 0.0;
};

// Draws i.i.d. normal(mu, sigma^2) samples at constant gap, folds the chosen
// smoother, discards the burn-in prefix, and reports empirical mean/variance
// of the output next to the equilibrium predictions. Same seed, same report.
MomentReport simulate_constant_rate(const SimulationConfig& config);

// Runs V1, V2, and the gap-corrected variant at constant gap with the given
// decay factor, each output compared against the extended-precision oracle.
StressReport stress_extreme_alpha(DecayFactor alpha, std::int64_t steps,
                                  std::uint64_t seed);

// As above with random gaps drawn from the chosen law (mean gap 1),
// quantifying how far plain V2 drifts when the rate is not constant.
StressReport variable_rate_divergence(GapLaw law, std::int64_t steps, TimeScale tau,
                                      std::uint64_t seed);

// Measurement core shared by the stress entry points: folds all three
// methods over the stream (V2 seeded with the first gap's decay factor) and
// compares every step against the defining sums carried in double-double.
StressReport compare_methods_to_oracle(std::span<const Observation> observations,
                                       TimeScale tau);

}  // namespace expsmooth
