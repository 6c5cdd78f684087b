#include "expsmooth/calibration.hpp"

#include <charconv>
#include <cmath>
#include <numbers>
#include <string>

namespace expsmooth {

namespace {

std::string num(double v) {
  char buffer[32];
  const auto result = std::to_chars(buffer, buffer + sizeof(buffer), v);
  return std::string(buffer, result.ptr);
}

void require_positive_gap(double gap) {
  if (!std::isfinite(gap) || gap <= 0.0) {
    throw std::invalid_argument("reference gap must be finite and > 0, got " + num(gap));
  }
}

}  // namespace

double effective_n_from_alpha(DecayFactor alpha) {
  const double a = alpha.value();
  if (a >= 1.0) {
    throw std::invalid_argument("effective n is unbounded at alpha = 1");
  }
  return (1.0 + a) / (1.0 - a);
}

DecayFactor alpha_from_effective_n(double n) {
  if (!std::isfinite(n) || n < 1.0) {
    throw std::invalid_argument("effective n must be finite and >= 1, got " +
                                num(n));
  }
  return DecayFactor((n - 1.0) / (n + 1.0));
}

DecayFactor alpha_from_window(double window, double gap) {
  require_positive_gap(gap);
  if (!std::isfinite(window) || window <= gap) {
    throw std::invalid_argument("window must be finite and exceed the gap");
  }
  return DecayFactor((window - gap) / (window + gap));
}

TimeScale tau_from_window_exact(double window, double gap) {
  require_positive_gap(gap);
  if (!std::isfinite(window) || window <= gap) {
    throw std::invalid_argument("window must be finite and exceed the gap");
  }
  // ln(window + gap) - ln(window - gap) = log1p(2 gap / (window - gap)),
  // which stays well conditioned as gap / window -> 0.
  return TimeScale(gap / std::log1p(2.0 * gap / (window - gap)));
}

TimeScale tau_from_window_limit(double window) {
  if (!std::isfinite(window) || window <= 0.0) {
    throw std::invalid_argument("window must be finite and > 0, got " +
                                num(window));
  }
  return TimeScale(window / 2.0);
}

double effective_n_smallgap(DecayFactor alpha) {
  const double a = alpha.value();
  if (a <= 0.0 || a >= 1.0) {
    throw std::invalid_argument("small-gap effective n requires 0 < alpha < 1");
  }
  return -2.0 / std::log(a);
}

double equilibrium_weight_v1(DecayFactor alpha) {
  const double a = alpha.value();
  if (a >= 1.0) {
    throw std::invalid_argument("equilibrium weight is unbounded at alpha = 1");
  }
  return 1.0 / (1.0 - a);
}

double variance_ratio(DecayFactor alpha) {
  const double a = alpha.value();
  if (a >= 1.0) {
    throw std::invalid_argument("variance ratio is undefined at alpha = 1");
  }
  return (1.0 - a) / (1.0 + a);
}

double barw_closed_form(DecayFactor alpha, std::int64_t k) {
  if (k < 1) {
    throw std::invalid_argument("step count must be >= 1, got " + std::to_string(k));
  }
  // 1 - alpha^k, computed through expm1 to keep precision for alpha near 1.
  return -std::expm1(static_cast<double>(k) * std::log(alpha.value()));
}

CalibrationReport calibrate_from_alpha(DecayFactor alpha, double gap) {
  require_positive_gap(gap);
  const double a = alpha.value();
  CalibrationReport report;
  report.gap = gap;
  report.alpha = a;
  report.effective_n = effective_n_from_alpha(alpha);
  report.window = gap * report.effective_n;
  // alpha = 0 has no positive time scale; -gap / log(0) yields the 0 limit.
  report.tau = a > 0.0 ? -gap / std::log(a) : 0.0;
  report.half_life = report.tau * std::numbers::ln2;
  report.variance_ratio = variance_ratio(alpha);
  return report;
}

CalibrationReport calibrate_from_tau(TimeScale tau, double gap) {
  require_positive_gap(gap);
  CalibrationReport report = calibrate_from_alpha(decay_factor(gap, tau), gap);
  report.tau = tau.tau();
  report.half_life = tau.tau() * std::numbers::ln2;
  return report;
}

CalibrationReport calibrate_from_half_life(double half_life, double gap) {
  if (!std::isfinite(half_life) || half_life <= 0.0) {
    throw std::invalid_argument("half-life must be finite and > 0, got " +
                                num(half_life));
  }
  CalibrationReport report = calibrate_from_tau(TimeScale(half_life / std::numbers::ln2), gap);
  report.half_life = half_life;
  return report;
}

CalibrationReport calibrate_from_effective_n(double n, double gap) {
  return calibrate_from_alpha(alpha_from_effective_n(n), gap);
}

CalibrationReport calibrate_from_window(double window, double gap) {
  CalibrationReport report =
      calibrate_from_alpha(alpha_from_window(window, gap), gap);
  const TimeScale tau = tau_from_window_exact(window, gap);
  report.tau = tau.tau();
  report.half_life = tau.tau() * std::numbers::ln2;
  report.window = window;
  return report;
}

}  // namespace expsmooth
