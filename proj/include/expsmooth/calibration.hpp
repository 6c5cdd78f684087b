#pragma once

#include <cstdint>

#include "expsmooth/smoother.hpp"

namespace expsmooth {

// Mutually consistent parameterizations of one smoother configuration at a
// reference sampling interval. All fields derive from (alpha, gap); tau and
// half_life are 0 in the degenerate alpha = 0 case, which has no finite
// positive time scale.
struct CalibrationReport {
  double tau = 0.0;
  double gap = 0.0;
  double alpha = 0.0;
  double effective_n = 1.0;     // (1 + alpha) / (1 - alpha)
  double window = 0.0;          // gap * effective_n
  double half_life = 0.0;       // tau * ln 2
  double variance_ratio = 1.0;  // Var[smoothed] / Var[input] = 1 / effective_n
};

// Number of i.i.d. observations whose plain average has the variance of the
// smoother's output: n = (1 + alpha) / (1 - alpha).
double effective_n_from_alpha(DecayFactor alpha);

// Inverse of the above: alpha = (n - 1) / (n + 1).
DecayFactor alpha_from_effective_n(double n);

// alpha = (window - gap) / (window + gap); requires 0 < gap < window.
DecayFactor alpha_from_window(double window, double gap);

// tau = gap / (ln(window + gap) - ln(window - gap)); converges to window/2
// as gap -> 0.
TimeScale tau_from_window_exact(double window, double gap);

// The small-gap limit tau = window / 2.
TimeScale tau_from_window_limit(double window);

// Inverts the small-gap approximation alpha = exp(-2/n), giving
// n = 2 / ln(1/alpha). Good to well under 1% for alpha >= 0.9.
double effective_n_smallgap(DecayFactor alpha);

// Fixed point of the V1 weight recursion w <- 1 + alpha * w at constant
// rate: 1 / (1 - alpha). Grows without bound as alpha -> 1.
double equilibrium_weight_v1(DecayFactor alpha);

// Equilibrium Var[smoothed] / Var[input] = (1 - alpha) / (1 + alpha) for an
// i.i.d. input at constant rate.
double variance_ratio(DecayFactor alpha);

// Closed form of the V2 weight after k constant-rate steps: 1 - alpha^k.
double barw_closed_form(DecayFactor alpha, std::int64_t k);

CalibrationReport calibrate_from_alpha(DecayFactor alpha, double gap);
CalibrationReport calibrate_from_tau(TimeScale tau, double gap);
CalibrationReport calibrate_from_half_life(double half_life, double gap);
CalibrationReport calibrate_from_effective_n(double n, double gap);
CalibrationReport calibrate_from_window(double window, double gap);

}  // namespace expsmooth
