#pragma once

#include <cmath>
#include <numbers>

namespace rpo {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Tolerance for angle equality (radians, circular).
inline constexpr double kEpsAngle = 1e-8;

/// Reduce `x` into [0, period). Values within 1e-12 of `period` snap to 0 so
/// that formatting and re-parsing a canonical value is a fixpoint.
inline double wrap_angle(double x, double period = kTwoPi) {
  double r = std::fmod(x, period);
  if (r < 0.0) r += period;
  if (r >= period - 1e-12 || r == 0.0) r = 0.0;  // also clears -0.0
  return r;
}

/// Circular distance between two angles with the given period.
inline double angle_distance(double a, double b, double period = kTwoPi) {
  double d = std::fabs(wrap_angle(a - b, period));
  return std::fmin(d, period - d);
}

inline bool angles_equal(double a, double b, double period = kTwoPi) {
  return angle_distance(a, b, period) < kEpsAngle;
}

/// An angle in radians, canonicalized into [0, 2pi).
class Angle {
 public:
  constexpr Angle() = default;
  Angle(double radians) : value_(wrap_angle(radians)) {}  // NOLINT(google-explicit-constructor)

  double value() const { return value_; }

  friend bool operator==(Angle a, Angle b) { return angles_equal(a.value_, b.value_); }

 private:
  double value_ = 0.0;
};

}  // namespace rpo
