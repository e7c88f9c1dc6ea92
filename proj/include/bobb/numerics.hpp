#ifndef BOBB_NUMERICS_HPP
#define BOBB_NUMERICS_HPP

#include <cmath>
#include <limits>

namespace bobb {

// Solver-wide tolerances. LP feasibility and integrality share 1e-6,
// reduced costs use 1e-9; objective-space comparisons use the relative
// form below so they stay consistent with LP solve accuracy.
inline constexpr double kFeasTol = 1e-6;
inline constexpr double kIntTol = 1e-6;
inline constexpr double kCostTol = 1e-9;
inline constexpr double kInf = std::numeric_limits<double>::infinity();

// a == b up to 1e-6 * (1 + |a| + |b|).
inline bool nearly_equal(double a, double b) {
  return std::abs(a - b) <= 1e-6 * (1.0 + std::abs(a) + std::abs(b));
}

inline bool nearly_le(double a, double b) {
  return a <= b + 1e-6 * (1.0 + std::abs(a) + std::abs(b));
}

inline bool nearly_lt(double a, double b) {
  return a < b - 1e-6 * (1.0 + std::abs(a) + std::abs(b));
}

inline bool is_integral(double v, double tol = kIntTol) {
  return std::abs(v - std::round(v)) <= tol;
}

}  // namespace bobb

#endif  // BOBB_NUMERICS_HPP
