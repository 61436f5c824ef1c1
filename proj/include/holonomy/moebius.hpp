#pragma once

// PSL(2,R) acting on the upper half-plane: matrices, classification, fixed
// points, axes, distances, commutators, cross-ratios, and the chart geometry
// of geodesics (circles centred on the real axis, or vertical lines).

#include <algorithm>
#include <array>
#include <optional>
#include <variant>

#include "holonomy/numeric.hpp"

namespace holonomy {

// ---------------------------------------------------------------------------
// Core value types

// Real 2x2 matrix with determinant normalized to 1; acts as z -> (az+b)/(cz+d).
// Equality is up to global sign (an element of PSL(2,R)).
struct Isometry {
  double a, b, c, d;

  Isometry(double a_, double b_, double c_, double d_) : a(a_), b(b_), c(c_), d(d_) {
    renormalize();
  }

  static Isometry identity() { return {1, 0, 0, 1}; }

  double det() const { return a * d - b * c; }
  double trace() const { return a + d; }
  Isometry inverse() const { return {d, -b, -c, a}; }

  // same PSL(2,R) element, other SL(2,R) lift; negation is exact, so skip
  // the determinant renormalization
  Isometry negated() const {
    Isometry m = *this;
    m.a = -m.a;
    m.b = -m.b;
    m.c = -m.c;
    m.d = -m.d;
    return m;
  }

  void renormalize() {
    if (!finite(a) || !finite(b) || !finite(c) || !finite(d))
      throw NumericOverflow("isometry entries not finite");
    double dt = det();
    if (!(dt > 0.0) || !finite(dt))
      throw NumericOverflow("isometry determinant not positive");
    double s = std::sqrt(dt);
    a /= s;
    b /= s;
    c /= s;
    d /= s;
  }
};

inline Isometry operator*(const Isometry& m, const Isometry& n) {
  return {m.a * n.a + m.b * n.c, m.a * n.b + m.b * n.d,
          m.c * n.a + m.d * n.c, m.c * n.b + m.d * n.d};
}

// Entries with the first nonzero entry made positive; the PSL(2,R) sign quotient.
inline std::array<double, 4> psl_canonical(const Isometry& m) {
  std::array<double, 4> e{m.a, m.b, m.c, m.d};
  for (double v : e) {
    if (std::fabs(v) > tol::det) {
      if (v < 0)
        for (auto& x : e) x = -x;
      break;
    }
  }
  return e;
}

inline bool psl_equal(const Isometry& m, const Isometry& n, double eps = tol::trace) {
  auto em = psl_canonical(m), en = psl_canonical(n);
  double worst = 0;
  for (int i = 0; i < 4; ++i) worst = std::max(worst, std::fabs(em[i] - en[i]));
  return worst <= eps;
}

// Point of the upper half-plane, h > 0.
struct PlanePoint {
  double x, h;

  PlanePoint(double x_, double h_) : x(x_), h(h_) {
    if (!finite(x) || !finite(h) || !(h > tol::positive))
      throw NumericOverflow("point left the upper half-plane");
  }

  cplx z() const { return {x, h}; }
  static PlanePoint from(cplx w) { return {w.real(), w.imag()}; }
  static PlanePoint reference() { return {0.0, 1.0}; }  // the point i
};

// Point of the circle at infinity in homogeneous coordinates, u^2 + v^2 = 1,
// defined up to sign; value u/v with v = 0 meaning infinity.
struct BoundaryPoint {
  double u, v;

  BoundaryPoint(double u_, double v_) : u(u_), v(v_) {
    double n = std::hypot(u, v);
    if (!(n > 0.0) || !finite(n)) throw NumericOverflow("boundary point (0,0)");
    u /= n;
    v /= n;
  }

  static BoundaryPoint infinity() { return {1, 0}; }
  static BoundaryPoint of_value(double e) { return {e, 1}; }

  bool is_infinity(double eps = tol::boundary) const { return std::fabs(v) <= eps; }
  double value() const { return u / v; }
};

// det of the homogeneous pair; zero iff the points coincide projectively.
inline double bracket(const BoundaryPoint& p, const BoundaryPoint& q) {
  return p.u * q.v - q.u * p.v;
}

inline double projective_distance(const BoundaryPoint& p, const BoundaryPoint& q) {
  return std::fabs(bracket(p, q));
}

// Angle of the image on the Poincare-disc boundary; (u,v) -> (u - iv)^2.
inline double disc_angle(const BoundaryPoint& p) {
  return std::atan2(-2.0 * p.u * p.v, p.u * p.u - p.v * p.v);
}

// Oriented geodesic given by its ideal endpoints.
struct Geodesic {
  BoundaryPoint start, end;

  Geodesic(BoundaryPoint s, BoundaryPoint e) : start(s), end(e) {
    if (projective_distance(start, end) <= tol::boundary)
      throw Error("geodesic endpoints coincide");
  }
};

// Trichotomy of a PSL(2,R) element.
struct Identity {};
struct Elliptic {
  double angle;  // rotation angle at the fixed point, in (0, 2*pi)
};
struct Parabolic {
  int direction;  // +1 anticlockwise, -1 clockwise
};
struct Hyperbolic {
  double length;  // translation length, > 0
};
using IsometryClass = std::variant<Identity, Elliptic, Parabolic, Hyperbolic>;

// ---------------------------------------------------------------------------
// Mobius action

inline PlanePoint apply(const Isometry& m, const PlanePoint& p) {
  cplx z = p.z();
  cplx den = m.c * z + m.d;
  double q = std::norm(den);
  if (!(q > 0.0) || !finite(q)) throw NumericOverflow("mobius denominator vanished");
  cplx w = (m.a * z + m.b) * std::conj(den) / q;
  if (!finite(w) || !(w.imag() > tol::positive))
    throw NumericOverflow("mobius image left the upper half-plane");
  return PlanePoint::from(w);
}

inline BoundaryPoint apply_boundary(const Isometry& m, const BoundaryPoint& p) {
  return {m.a * p.u + m.b * p.v, m.c * p.u + m.d * p.v};
}

// ---------------------------------------------------------------------------
// Classification and fixed points

namespace detail {

// Fixed point of an elliptic element: the root of cz^2 + (d-a)z - b with
// positive imaginary part.
inline cplx elliptic_fixed(const Isometry& m) {
  double disc = 4.0 - m.trace() * m.trace();
  if (!(disc > 0.0) || std::fabs(m.c) <= tol::det)
    throw Error("elliptic_fixed: element is not elliptic");
  return {(m.a - m.d) / (2.0 * m.c), std::sqrt(disc) / (2.0 * std::fabs(m.c))};
}

// Eigenvector of m for eigenvalue lam as a boundary point.
inline BoundaryPoint eigen_boundary(const Isometry& m, double lam) {
  double u1 = m.b, v1 = lam - m.a;
  double u2 = lam - m.d, v2 = m.c;
  if (std::hypot(u1, v1) >= std::hypot(u2, v2)) return {u1, v1};
  return {u2, v2};
}

}  // namespace detail

inline IsometryClass classify(const Isometry& m) {
  if (psl_equal(m, Isometry::identity(), tol::trace)) return Identity{};
  double t = std::fabs(m.trace());
  if (t > 2.0 + tol::trace) return Hyperbolic{2.0 * safe_acosh(t / 2.0)};
  if (t < 2.0 - tol::trace) {
    cplx z0 = detail::elliptic_fixed(m);
    double psi = reduce_rotation(-2.0 * std::arg(m.c * z0 + m.d));
    return Elliptic{psi};
  }
  // Parabolic: normalize the trace sign, then read the rotational sense.
  double s = m.trace() < 0 ? -1.0 : 1.0;
  double cc = s * m.c, bb = s * m.b;
  int dir = std::fabs(cc) > tol::det ? (cc < 0 ? +1 : -1) : (bb > 0 ? +1 : -1);
  return Parabolic{dir};
}

struct HyperbolicFixedPoints {
  BoundaryPoint repulsive, attractive;
};
struct ParabolicFixedPoint {
  BoundaryPoint point;
};
struct EllipticFixedPoint {
  PlanePoint point;
};
using FixedPointData =
    std::variant<HyperbolicFixedPoints, ParabolicFixedPoint, EllipticFixedPoint>;

inline FixedPointData fixed_points(const Isometry& m) {
  IsometryClass cls = classify(m);
  if (std::holds_alternative<Identity>(cls)) throw IsIdentity();
  if (std::holds_alternative<Elliptic>(cls))
    return EllipticFixedPoint{PlanePoint::from(detail::elliptic_fixed(m))};
  double t = m.trace();
  if (std::holds_alternative<Parabolic>(cls))
    return ParabolicFixedPoint{detail::eigen_boundary(m, t / 2.0)};
  // Attractive fixed point belongs to the eigenvalue of modulus > 1.
  double s = t < 0 ? -1.0 : 1.0;
  double root = std::sqrt(std::max(0.0, t * t - 4.0));
  double lam_att = (t + s * root) / 2.0;
  double lam_rep = (t - s * root) / 2.0;
  return HyperbolicFixedPoints{detail::eigen_boundary(m, lam_rep),
                               detail::eigen_boundary(m, lam_att)};
}

// Geodesic oriented from the repulsive to the attractive fixed point.
inline Geodesic axis(const Isometry& m) {
  FixedPointData fp = fixed_points(m);
  auto* hfp = std::get_if<HyperbolicFixedPoints>(&fp);
  if (!hfp) throw NotHyperbolic();
  return {hfp->repulsive, hfp->attractive};
}

// ---------------------------------------------------------------------------
// Distances

inline double distance(const PlanePoint& p, const PlanePoint& q) {
  double dx = p.x - q.x, dh = p.h - q.h;
  return safe_acosh(1.0 + (dx * dx + dh * dh) / (2.0 * p.h * q.h));
}

// Coordinates (distance along a reference line, signed height above it); the
// line and its basepoint are fixed by the caller.
struct FermiCoord {
  double x, h;
};

inline double fermi_distance(const FermiCoord& p, const FermiCoord& q) {
  double v = std::cosh(p.h) * std::cosh(q.h) * std::cosh(q.x - p.x) -
             std::sinh(p.h) * std::sinh(q.h);
  if (!finite(v)) throw NumericOverflow("fermi_distance overflow");
  return safe_acosh(v);
}

// ---------------------------------------------------------------------------
// Commutators and relative position of axes

inline Isometry commutator(const Isometry& g, const Isometry& h) {
  return g * h * g.inverse() * h.inverse();
}

// C(g,h) = (r_g - a_h)(a_g - r_h) / ((r_g - r_h)(a_g - a_h)), computed in
// homogeneous coordinates.
inline double cross_ratio(const Isometry& g, const Isometry& h) {
  Geodesic ag = axis(g), ah = axis(h);
  const BoundaryPoint &rg = ag.start, &atg = ag.end, &rh = ah.start, &ath = ah.end;
  for (auto [p, q] : {std::pair{&rg, &rh}, {&rg, &ath}, {&atg, &rh}, {&atg, &ath}})
    if (projective_distance(*p, *q) <= tol::boundary) throw SharedFixedPoint();
  return (bracket(rg, ath) * bracket(atg, rh)) / (bracket(rg, rh) * bracket(atg, ath));
}

// Do two boundary-point pairs interleave on the circle at infinity?
inline bool endpoints_interleave(const BoundaryPoint& a1, const BoundaryPoint& a2,
                                 const BoundaryPoint& b1, const BoundaryPoint& b2) {
  double s = bracket(a1, b1) * bracket(a2, b2) * bracket(a1, b2) * bracket(a2, b1);
  return s < 0;
}

inline bool axes_crossing(const Isometry& g, const Isometry& h) {
  if (!std::holds_alternative<Hyperbolic>(classify(g)) ||
      !std::holds_alternative<Hyperbolic>(classify(h)))
    return false;
  Geodesic ag = axis(g), ah = axis(h);
  for (auto* p : {&ag.start, &ag.end})
    for (auto* q : {&ah.start, &ah.end})
      if (projective_distance(*p, *q) <= tol::boundary) return false;
  return endpoints_interleave(ag.start, ag.end, ah.start, ah.end);
}

// ---------------------------------------------------------------------------
// Chart geometry of geodesics

// A geodesic drawn in the half-plane chart: a circle centred on the real axis,
// or a vertical line.
struct ChartGeodesic {
  bool vertical;
  double x0;      // circle centre, or the line abscissa
  double radius;  // 0 for a vertical line
};

inline ChartGeodesic chart_of(const Geodesic& g) {
  bool i1 = g.start.is_infinity(1e-12), i2 = g.end.is_infinity(1e-12);
  if (i1 || i2) return {true, i1 ? g.end.value() : g.start.value(), 0.0};
  double e1 = g.start.value(), e2 = g.end.value();
  return {false, (e1 + e2) / 2.0, std::fabs(e1 - e2) / 2.0};
}

inline ChartGeodesic chart_through(cplx z1, cplx z2) {
  double scale = 1.0 + std::fabs(z1.real()) + std::fabs(z2.real());
  if (std::fabs(z1.real() - z2.real()) <= tol::geo * scale)
    return {true, (z1.real() + z2.real()) / 2.0, 0.0};
  double x0 = (std::norm(z2) - std::norm(z1)) / (2.0 * (z2.real() - z1.real()));
  return {false, x0, std::hypot(z1.real() - x0, z1.imag())};
}

// Chart parameter of a point on a geodesic: the angle on the circle, or the
// height on a vertical line.
inline double chart_param(const ChartGeodesic& c, cplx z) {
  if (c.vertical) return z.imag();
  return std::atan2(z.imag(), z.real() - c.x0);
}

inline bool same_chart(const ChartGeodesic& a, const ChartGeodesic& b, double scale) {
  double eps = tol::geo * scale;
  if (a.vertical != b.vertical) {
    // a giant circle is numerically indistinguishable from a line; treat as distinct
    return false;
  }
  if (a.vertical) return std::fabs(a.x0 - b.x0) <= eps;
  return std::fabs(a.x0 - b.x0) <= eps && std::fabs(a.radius - b.radius) <= eps;
}

// Unit conformal direction at `from` of the geodesic toward `to`.
inline cplx geodesic_direction(cplx from, cplx to) {
  ChartGeodesic c = chart_through(from, to);
  if (c.vertical) return {0.0, to.imag() > from.imag() ? 1.0 : -1.0};
  double s = to.real() > from.real() ? 1.0 : -1.0;
  cplx d = cplx{0, -1} * s * (from - c.x0);
  return d / std::abs(d);
}

// Conformal rotation of the tangent along the geodesic from -> to, in (-pi, pi).
inline double transport_angle(cplx from, cplx to) {
  double scale = std::abs(from) + std::abs(to) + 1.0;
  if (std::abs(to - from) <= 1e-14 * scale) return 0.0;
  ChartGeodesic c = chart_through(from, to);
  if (c.vertical) return 0.0;
  return std::arg((to - c.x0) * std::conj(from - c.x0));
}

// Direction at an interior point toward a boundary point.
inline cplx direction_to_boundary(const PlanePoint& from, const BoundaryPoint& target) {
  if (target.is_infinity(1e-12)) return {0.0, 1.0};
  double e = target.value();
  double scale = 1.0 + std::fabs(from.x) + std::fabs(e);
  if (std::fabs(e - from.x) <= tol::geo * scale) return {0.0, -1.0};
  double x0 = (e * e - std::norm(from.z())) / (2.0 * (e - from.x));
  double s = e > from.x ? 1.0 : -1.0;
  cplx d = cplx{0, -1} * s * (from.z() - x0);
  return d / std::abs(d);
}

// Unit-speed walk: the point at arclength `dist` from p along the geodesic
// with initial conformal direction `dir` (dist may be negative).
inline PlanePoint walk(const PlanePoint& p, cplx dir, double dist) {
  dir /= std::abs(dir);
  if (std::fabs(dir.real()) < 1e-14) {
    double sgn = dir.imag() > 0 ? 1.0 : -1.0;
    return {p.x, p.h * std::exp(sgn * dist)};
  }
  double x0 = p.x + dir.imag() * p.h / dir.real();
  double R = std::hypot(p.x - x0, p.h);
  // tangency: dir is parallel to i*(z - x0); alpha > 0 means phi increases
  cplx v = cplx{0, 1} * (p.z() - x0);
  double alpha = (dir.real() * v.real() + dir.imag() * v.imag()) > 0 ? 1.0 : -1.0;
  double t = p.h / (R + (p.x - x0));  // tan(phi/2)
  double tn = t * std::exp(alpha * dist);
  double denom = 1.0 + tn * tn;
  return {x0 + R * (1.0 - tn * tn) / denom, R * 2.0 * tn / denom};
}

// Foot of the perpendicular dropped from the reference point i onto a geodesic.
inline PlanePoint foot_from_reference(const ChartGeodesic& c) {
  if (c.vertical) return {c.x0, std::sqrt(1.0 + c.x0 * c.x0)};
  double cphi = -2.0 * c.x0 * c.radius / (c.x0 * c.x0 + c.radius * c.radius + 1.0);
  cphi = std::clamp(cphi, -1.0, 1.0);
  double sphi = std::sqrt(1.0 - cphi * cphi);
  return {c.x0 + c.radius * cphi, std::max(c.radius * sphi, 2 * tol::positive)};
}

// Intersection of two chart geodesics in the open half-plane.
inline std::optional<PlanePoint> intersect(const ChartGeodesic& a, const ChartGeodesic& b) {
  double scale = 1.0 + std::fabs(a.x0) + std::fabs(b.x0) + a.radius + b.radius;
  if (a.vertical && b.vertical) return std::nullopt;
  if (a.vertical || b.vertical) {
    const ChartGeodesic& line = a.vertical ? a : b;
    const ChartGeodesic& circ = a.vertical ? b : a;
    double dx = line.x0 - circ.x0;
    double y2 = circ.radius * circ.radius - dx * dx;
    if (y2 <= (tol::geo * scale) * (tol::geo * scale)) return std::nullopt;
    return PlanePoint{line.x0, std::sqrt(y2)};
  }
  if (std::fabs(a.x0 - b.x0) <= tol::geo * scale) return std::nullopt;
  double x = (a.radius * a.radius - b.radius * b.radius + b.x0 * b.x0 - a.x0 * a.x0) /
             (2.0 * (b.x0 - a.x0));
  double y2 = a.radius * a.radius - (x - a.x0) * (x - a.x0);
  if (y2 <= (tol::geo * scale) * (tol::geo * scale)) return std::nullopt;
  return PlanePoint{x, std::sqrt(y2)};
}

// ---------------------------------------------------------------------------
// Geodesic segments (for simplicity testing and rendering)

struct GeodesicSegment {
  cplx a, b;
  ChartGeodesic chart;
  double ta, tb;  // chart parameters of a and b

  GeodesicSegment(cplx a_, cplx b_)
      : a(a_), b(b_), chart(chart_through(a_, b_)),
        ta(chart_param(chart, a_)), tb(chart_param(chart, b_)) {}

  double tmin() const { return std::min(ta, tb); }
  double tmax() const { return std::max(ta, tb); }
};

namespace detail {

inline double param_tol(const ChartGeodesic& c) {
  return c.vertical ? tol::param * (1.0 + std::fabs(c.x0)) : tol::param;
}

// Do two segments on distinct geodesics share a point?
inline bool cross_distinct(const GeodesicSegment& s, const GeodesicSegment& t) {
  auto pt = intersect(s.chart, t.chart);
  if (!pt) return false;
  double u = chart_param(s.chart, pt->z()), v = chart_param(t.chart, pt->z());
  return u >= s.tmin() - param_tol(s.chart) && u <= s.tmax() + param_tol(s.chart) &&
         v >= t.tmin() - param_tol(t.chart) && v <= t.tmax() + param_tol(t.chart);
}

// Overlap length of two segments known to lie on the same geodesic.
inline double overlap_same(const GeodesicSegment& s, const GeodesicSegment& t) {
  return std::min(s.tmax(), t.tmax()) - std::max(s.tmin(), t.tmin());
}

}  // namespace detail

}  // namespace holonomy
