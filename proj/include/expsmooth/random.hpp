#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace expsmooth {

// Deterministic stream of doubles on top of std::mt19937_64, whose output is
// pinned by the standard. Gaussians come from the Box-Muller transform of
// two 53-bit uniforms, exponentials from inversion, so the whole stream is
// reproducible from the seed on any platform.
class Rng {
public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  // Uniform on [0, 1) with 53 random bits.
  double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  double normal(double mu, double sigma) {
    if (has_spare_) {
      has_spare_ = false;
      return mu + sigma * spare_;
    }
    const double u1 = 1.0 - uniform01();  // (0, 1], keeps the log finite
    const double u2 = uniform01();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    spare_ = radius * std::sin(angle);
    has_spare_ = true;
    return mu + sigma * radius * std::cos(angle);
  }

  // Strictly positive exponential draw (zero draws are redrawn).
  double exponential(double mean) {
    double gap = 0.0;
    do {
      gap = -mean * std::log(1.0 - uniform01());
    } while (!(gap > 0.0));
    return gap;
  }

private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace expsmooth
