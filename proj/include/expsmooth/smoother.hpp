#pragma once

#include <span>

#include "expsmooth/errors.hpp"

namespace expsmooth {

// A single (timestamp, value) sample. Time is a dimensionless real; callers
// supply the time scale in the same unit.
struct Observation {
  double t = 0.0;
  double x = 0.0;
};

// Decay time scale tau > 0. An observation one tau old carries weight 1/e
// relative to a current one.
class TimeScale {
public:
  explicit TimeScale(double tau);

  double tau() const noexcept { return tau_; }

private:
  double tau_;
};

// Per-gap weight multiplier exp(-gap/tau), always in [0, 1]. Equals 1 only
// for a zero gap.
class DecayFactor {
public:
  DecayFactor() = default;
  explicit DecayFactor(double alpha);

  double value() const noexcept { return alpha_; }

private:
  double alpha_ = 0.0;
};

DecayFactor decay_factor(double gap, TimeScale tau);

// Unnormalized accumulators: decay-weighted value sum and decay-weighted
// count of unit weights. The smoothed value is the ratio tilde_x / tilde_w.
struct StateV1 {
  double tilde_x = 0.0;
  double tilde_w = 0.0;
  double last_t = 0.0;
};

// Normalized accumulators: the V1 sums pre-scaled by (1 - alpha), keeping
// the weight in (0, 1]. last_alpha is needed by the gap-corrected update.
struct StateV2 {
  double bar_x = 0.0;
  double bar_w = 0.0;
  double last_t = 0.0;
  DecayFactor last_alpha;
};

struct SmoothedValue {
  double x_hat = 0.0;
  // The normalizer at evaluation time: tilde_w for V1, bar_w for V2.
  double weight = 0.0;
};

StateV1 v1_init(Observation obs);

// Absorb one observation. Ties are allowed: alpha = 1 gives each tied
// observation weight 1, matching the defining sums.
StateV1 v1_update(const StateV1& state, Observation obs, TimeScale tau);

SmoothedValue v1_value(const StateV1& state);

// Evaluate between samples. Both accumulators decay by the same factor, so
// the ratio is returned unchanged and only the weight decays.
SmoothedValue v1_value_at(const StateV1& state, double t, TimeScale tau);

// alpha1 scales the first observation's accumulators by (1 - alpha1). The
// smoothed value is independent of alpha1 (the factor cancels in the ratio);
// it only controls the reported weight. At constant sampling rate, seeding
// alpha1 with that rate's decay factor makes bar_w follow 1 - alpha^k.
StateV2 v2_init(Observation obs, DecayFactor alpha1);

// The normalized recursion. Exact (equal to the defining sums) when the
// sampling interval is constant; an approximation otherwise. Rejects ties:
// alpha = 1 would silently drop the new observation.
StateV2 v2_update(const StateV2& state, Observation obs, TimeScale tau);

// Variable-rate variant: rescales the carried state by
// rho = (1 - alpha) / (1 - last_alpha), which keeps bar_x = (1 - alpha) *
// tilde_x and bar_w = (1 - alpha) * tilde_w exactly, so the ratio matches
// the defining sums for any gap sequence.
StateV2 v2_update_gap_corrected(const StateV2& state, Observation obs, TimeScale tau);

SmoothedValue v2_value(const StateV2& state);

// Ground truth: direct evaluation of the defining sums
//   x_hat = sum_k exp(-(t - t_k)/tau) x_k / sum_k exp(-(t - t_k)/tau)
// summed oldest-first (ascending weights) to limit rounding error.
// Requires a nondecreasing list with every t_k <= t.
SmoothedValue oracle_smooth(std::span<const Observation> observations, double t,
                            TimeScale tau);

}  // namespace expsmooth
