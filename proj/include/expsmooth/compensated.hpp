#pragma once

#include <cmath>

namespace expsmooth {

// Double-double value: the unevaluated sum hi + lo with |lo| <= ulp(hi)/2,
// giving roughly twice the precision of a double. Used as the extended
// precision accumulator behind the stress harness oracle.
struct DoubleDouble {
  double hi = 0.0;
  double lo = 0.0;

  static DoubleDouble two_sum(double a, double b) {
    const double s = a + b;
    const double bb = s - a;
    return {s, (a - (s - bb)) + (b - bb)};
  }

  static DoubleDouble two_prod(double a, double b) {
    const double p = a * b;
    return {p, std::fma(a, b, -p)};
  }

  // Renormalize; requires |a| >= |b| or a == 0.
  static DoubleDouble quick_two_sum(double a, double b) {
    const double s = a + b;
    return {s, b - (s - a)};
  }

  DoubleDouble add(double b) const {
    DoubleDouble s = two_sum(hi, b);
    s.lo += lo;
    return quick_two_sum(s.hi, s.lo);
  }

  DoubleDouble add(const DoubleDouble& b) const {
    DoubleDouble s = two_sum(hi, b.hi);
    s.lo += lo + b.lo;
    return quick_two_sum(s.hi, s.lo);
  }

  DoubleDouble mul(double b) const {
    DoubleDouble p = two_prod(hi, b);
    p.lo += lo * b;
    return quick_two_sum(p.hi, p.lo);
  }

  double value() const { return hi + lo; }
};

// num / den with one Newton correction, accurate to ~2^-100 relative.
inline double dd_ratio(const DoubleDouble& num, const DoubleDouble& den) {
  const double q0 = num.value() / den.value();
  const DoubleDouble residual = num.add(den.mul(-q0));
  return q0 + residual.value() / den.value();
}

}  // namespace expsmooth
