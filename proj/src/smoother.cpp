#include "expsmooth/smoother.hpp"

#include <charconv>
#include <cmath>
#include <string>

namespace expsmooth {

namespace {

std::string num(double v) {
  char buffer[32];
  const auto result = std::to_chars(buffer, buffer + sizeof(buffer), v);
  return std::string(buffer, result.ptr);
}

void validate(Observation obs) {
  if (!std::isfinite(obs.t)) {
    throw std::invalid_argument("observation timestamp must be finite, got " + num(obs.t));
  }
  if (!std::isfinite(obs.x)) {
    throw std::invalid_argument("observation value must be finite, got " + num(obs.x));
  }
}

// Guards the v2 recursions against gaps so small (relative to tau) that the
// decay factor rounds to 1 and (1 - alpha) = 0 would drop the observation.
DecayFactor strict_decay(double previous_t, double current_t, TimeScale tau) {
  const double gap = current_t - previous_t;
  DecayFactor alpha = decay_factor(gap, tau);
  if (alpha.value() >= 1.0) {
    throw OutOfOrderError(
        "gap " + num(gap) + " is below time resolution at tau = " + num(tau.tau()) +
            " (decay factor rounds to 1); v2 requires strictly increasing timestamps",
        previous_t, current_t);
  }
  return alpha;
}

}  // namespace

TimeScale::TimeScale(double tau) : tau_(tau) {
  if (!std::isfinite(tau) || tau <= 0.0) {
    throw std::invalid_argument("time scale must be finite and > 0, got " + num(tau));
  }
}

DecayFactor::DecayFactor(double alpha) : alpha_(alpha) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) {
    throw std::invalid_argument("decay factor must lie in [0, 1], got " + num(alpha));
  }
}

DecayFactor decay_factor(double gap, TimeScale tau) {
  if (!std::isfinite(gap) || gap < 0.0) {
    throw std::invalid_argument("gap must be finite and >= 0, got " + num(gap));
  }
  return DecayFactor(std::exp(-gap / tau.tau()));
}

StateV1 v1_init(Observation obs) {
  validate(obs);
  return {obs.x, 1.0, obs.t};
}

StateV1 v1_update(const StateV1& state, Observation obs, TimeScale tau) {
  validate(obs);
  if (obs.t < state.last_t) {
    throw OutOfOrderError("timestamp " + num(obs.t) + " precedes previous timestamp " +
                              num(state.last_t) + "; v1 requires nondecreasing timestamps",
                          state.last_t, obs.t);
  }
  const double alpha = decay_factor(obs.t - state.last_t, tau).value();
  return {obs.x + alpha * state.tilde_x, 1.0 + alpha * state.tilde_w, obs.t};
}

SmoothedValue v1_value(const StateV1& state) {
  if (!(state.tilde_w > 0.0)) {
    throw DegenerateStateError("v1 state holds no observations (weight " +
                               num(state.tilde_w) + ")");
  }
  return {state.tilde_x / state.tilde_w, state.tilde_w};
}

SmoothedValue v1_value_at(const StateV1& state, double t, TimeScale tau) {
  if (!std::isfinite(t)) {
    throw std::invalid_argument("evaluation time must be finite, got " + num(t));
  }
  if (t < state.last_t) {
    throw OutOfOrderError("evaluation time " + num(t) + " precedes last sample time " +
                              num(state.last_t),
                          state.last_t, t);
  }
  const double decay = decay_factor(t - state.last_t, tau).value();
  const SmoothedValue at_sample = v1_value(state);
  return {at_sample.x_hat, at_sample.weight * decay};
}

StateV2 v2_init(Observation obs, DecayFactor alpha1) {
  validate(obs);
  if (alpha1.value() >= 1.0) {
    throw std::invalid_argument(
        "v2_init requires alpha1 < 1; the normalization degenerates at alpha = 1");
  }
  const double one_minus = 1.0 - alpha1.value();
  return {one_minus * obs.x, one_minus, obs.t, alpha1};
}

StateV2 v2_update(const StateV2& state, Observation obs, TimeScale tau) {
  validate(obs);
  if (obs.t <= state.last_t) {
    throw OutOfOrderError(
        "timestamp " + num(obs.t) + " does not exceed previous timestamp " +
            num(state.last_t) +
            "; v2 requires strictly increasing timestamps (v1 accepts ties)",
        state.last_t, obs.t);
  }
  const DecayFactor alpha = strict_decay(state.last_t, obs.t, tau);
  const double a = alpha.value();
  return {(1.0 - a) * obs.x + a * state.bar_x, (1.0 - a) + a * state.bar_w, obs.t, alpha};
}

StateV2 v2_update_gap_corrected(const StateV2& state, Observation obs, TimeScale tau) {
  validate(obs);
  if (obs.t <= state.last_t) {
    throw OutOfOrderError(
        "timestamp " + num(obs.t) + " does not exceed previous timestamp " +
            num(state.last_t) +
            "; v2 requires strictly increasing timestamps (v1 accepts ties)",
        state.last_t, obs.t);
  }
  if (state.last_alpha.value() >= 1.0) {
    throw DegenerateStateError("gap correction is undefined after an alpha = 1 update");
  }
  const DecayFactor alpha = strict_decay(state.last_t, obs.t, tau);
  const double a = alpha.value();
  // rho = 1 when the rate is constant, reproducing the plain update bit for bit.
  const double rho = (1.0 - a) / (1.0 - state.last_alpha.value());
  return {(1.0 - a) * obs.x + a * rho * state.bar_x,
          (1.0 - a) + a * rho * state.bar_w, obs.t, alpha};
}

SmoothedValue v2_value(const StateV2& state) {
  if (!(state.bar_w > 0.0)) {
    throw DegenerateStateError("v2 state has zero weight (uninitialized or degenerate)");
  }
  return {state.bar_x / state.bar_w, state.bar_w};
}

SmoothedValue oracle_smooth(std::span<const Observation> observations, double t,
                            TimeScale tau) {
  if (observations.empty()) {
    throw EmptyInputError("oracle_smooth requires at least one observation");
  }
  if (!std::isfinite(t)) {
    throw std::invalid_argument("evaluation time must be finite, got " + num(t));
  }
  double prev_t = observations.front().t;
  for (const Observation& obs : observations) {
    validate(obs);
    if (obs.t < prev_t) {
      throw OutOfOrderError("observation list is not nondecreasing in time", prev_t,
                            obs.t);
    }
    prev_t = obs.t;
  }
  if (t < prev_t) {
    throw OutOfOrderError("evaluation time " + num(t) + " precedes last sample time " +
                              num(prev_t),
                          prev_t, t);
  }

  // Oldest-first, so terms enter in ascending magnitude.
  double sum_x = 0.0;
  double sum_w = 0.0;
  for (const Observation& obs : observations) {
    const double w = std::exp(-(t - obs.t) / tau.tau());
    sum_x += w * obs.x;
    sum_w += w;
  }
  if (!(sum_w > 0.0)) {
    throw DegenerateStateError(
        "all oracle weights underflowed; evaluation time is too far past the samples");
  }
  return {sum_x / sum_w, sum_w};
}

}  // namespace expsmooth
