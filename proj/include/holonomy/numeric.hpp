#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>

namespace holonomy {

using cplx = std::complex<double>;

inline constexpr double pi = std::numbers::pi;
inline constexpr double two_pi = 2.0 * std::numbers::pi;

// Tolerances used throughout. Trace comparisons get headroom over the drift
// accumulated by four-matrix products in double precision.
namespace tol {
inline constexpr double trace = 1e-9;       // trace-boundary comparisons
inline constexpr double det = 1e-12;        // determinant drift after renormalization
inline constexpr double boundary = 1e-10;   // projective separation of boundary points
inline constexpr double positive = 1e-12;   // minimum height above the real axis
inline constexpr double twist = 1e-7;       // twist interval-boundary ambiguity
inline constexpr double degenerate = 1e-8;  // minimum vertex separation
inline constexpr double geo = 1e-10;        // circle-circle solving
inline constexpr double param = 1e-9;       // segment parameter-range membership
}  // namespace tol

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

#define HOLONOMY_ERROR_TYPE(Name)                                  \
  struct Name : Error {                                            \
    explicit Name(const std::string& msg = #Name) : Error(msg) {}  \
  }

HOLONOMY_ERROR_TYPE(NumericOverflow);
HOLONOMY_ERROR_TYPE(IsIdentity);
HOLONOMY_ERROR_TYPE(NotHyperbolic);
HOLONOMY_ERROR_TYPE(SharedFixedPoint);
HOLONOMY_ERROR_TYPE(InV);
HOLONOMY_ERROR_TYPE(KappaTooSmall);
HOLONOMY_ERROR_TYPE(IterationCap);
HOLONOMY_ERROR_TYPE(NotSimple);
HOLONOMY_ERROR_TYPE(TwistAngleMismatch);
HOLONOMY_ERROR_TYPE(AmbiguousNearBoundary);
HOLONOMY_ERROR_TYPE(DepthTooLarge);
HOLONOMY_ERROR_TYPE(ConstructionFailed);
HOLONOMY_ERROR_TYPE(NotRealizable);

#undef HOLONOMY_ERROR_TYPE

// Reduce an angle to (-pi, pi].
inline double reduce_angle(double a) {
  double r = std::remainder(a, two_pi);
  if (r <= -pi) r += two_pi;
  return r;
}

// Reduce an angle to (0, 2*pi]; a value congruent to 0 maps to 2*pi.
inline double reduce_rotation(double a) {
  double r = reduce_angle(a);
  if (r <= 0.0) r += two_pi;
  return r;
}

inline bool finite(double x) { return std::isfinite(x); }
inline bool finite(cplx z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

// acosh clamped against arguments that dip below 1 by rounding.
inline double safe_acosh(double x) { return std::acosh(x < 1.0 ? 1.0 : x); }

}  // namespace holonomy
