#ifndef SIRSHARE_NUMERIC_H_
#define SIRSHARE_NUMERIC_H_

#include <algorithm>
#include <cmath>

namespace sirshare {

// Comparison policy shared by every check in the library. A value `a` is
// accepted as `<= b` when it exceeds `b` by at most
// `absolute + relative * max(|a|, |b|)`. Strict mode compares exactly.
struct Tolerance {
  double relative = 1e-9;
  double absolute = 1e-12;
  bool strict = false;

  static Tolerance Default() { return {}; }
  static Tolerance Strict() { return {0.0, 0.0, true}; }

  // `scale` widens the relative term when a and b are differences of
  // larger quantities.
  double Allowance(double a, double b, double scale = 0.0) const {
    if (strict) return 0.0;
    return absolute +
           relative * std::max({std::fabs(a), std::fabs(b), std::fabs(scale)});
  }
  bool LessOrEqual(double a, double b, double scale = 0.0) const {
    return a <= b + Allowance(a, b, scale);
  }
  bool Equal(double a, double b, double scale = 0.0) const {
    return std::fabs(a - b) <= Allowance(a, b, scale);
  }
  bool IsZero(double a, double scale = 0.0) const {
    return std::fabs(a) <= Allowance(a, scale);
  }
};

}  // namespace sirshare

#endif  // SIRSHARE_NUMERIC_H_
