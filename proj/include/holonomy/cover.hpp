#pragma once

// Universal-cover bookkeeping for PSL(2,R): the region taxonomy of lifts, the
// well-defined commutator lift, and its twist at a point.
//
// The twist of the canonical commutator lift is evaluated in closed form: the
// rotation function of a product of lifts is the sum of principal-branch
// rotation angles of the factors along the orbit (each z -> Arg(cz+d) term is
// continuous on the half-plane), and the twist subtracts the conformal
// transport angle along the geodesic from p to its image. No path integration.

#include <string>
#include <utility>

#include "holonomy/moebius.hpp"

namespace holonomy {

struct CoverRegion {
  enum class Kind { CenterPower, Hyp, ParPlus, ParMinus, Ell };
  Kind kind;
  int n;

  bool operator==(const CoverRegion&) const = default;

  std::string str() const {
    switch (kind) {
      case Kind::CenterPower: return n == 0 ? "identity" : "z^" + std::to_string(n);
      case Kind::Hyp: return "Hyp(" + std::to_string(n) + ")";
      case Kind::ParPlus: return "Par(" + std::to_string(n) + ",+)";
      case Kind::ParMinus: return "Par(" + std::to_string(n) + ",-)";
      case Kind::Ell: return "Ell(" + std::to_string(n) + ")";
    }
    return "?";
  }
};

// Open interval of twist values a lift in the region can attain. Ell(n<0)
// uses the convention mirror-symmetric to Ell(n>0), so Ell(-1) -> (-2pi, 0).
inline std::pair<double, double> twist_interval(const CoverRegion& r) {
  using K = CoverRegion::Kind;
  double n = r.n;
  switch (r.kind) {
    case K::CenterPower: return {two_pi * n, two_pi * n};
    case K::Hyp: return {(2 * n - 1) * pi, (2 * n + 1) * pi};
    case K::ParPlus: return {2 * n * pi, (2 * n + 1) * pi};
    case K::ParMinus: return {(2 * n - 1) * pi, 2 * n * pi};
    case K::Ell:
      if (r.n > 0) return {(2 * n - 2) * pi, 2 * n * pi};
      return {2 * n * pi, (2 * n + 2) * pi};
  }
  return {0, 0};
}

// Angle from the parallel transport of a vector along the geodesic p -> m(p)
// to its image under the derivative of m, reduced to (-pi, pi]. At a fixed
// point this is the rotation angle of the derivative.
inline double twist_mod_2pi(const Isometry& m, const PlanePoint& p) {
  cplx z = p.z();
  double eta = -2.0 * std::arg(m.c * z + m.d);
  PlanePoint q = apply(m, p);
  return reduce_angle(eta - transport_angle(z, q.z()));
}

namespace detail {

// Real twist of the canonical lift of [g^-1, h^-1] at p. The four stage
// points are the pentagon vertices h p, gh p, h^-1 gh p, [g^-1,h^-1] p.
inline double commutator_real_twist(const Isometry& g, const Isometry& h,
                                    const PlanePoint& p) {
  cplx z0 = p.z();
  PlanePoint p1 = apply(h, p);
  PlanePoint p2 = apply(g, p1);
  PlanePoint p3 = apply(h.inverse(), p2);
  PlanePoint p4 = apply(g.inverse(), p3);
  double eta = 2.0 * (std::arg(g.c * p4.z() + g.d) + std::arg(h.c * p3.z() + h.d) -
                      std::arg(g.c * p1.z() + g.d) - std::arg(h.c * z0 + h.d));
  return eta - transport_angle(z0, p4.z());
}

}  // namespace detail

// Deterministic probe point for the commutator lift [g^-1, h^-1]: its fixed
// point when elliptic, the axis point nearest the reference i when
// hyperbolic, the point at distance 1 from i toward the fixed point when
// parabolic.
inline PlanePoint commutator_probe_point(const Isometry& g, const Isometry& h) {
  Isometry cinv = commutator(g.inverse(), h.inverse());
  IsometryClass cls = classify(cinv);
  if (std::holds_alternative<Identity>(cls)) return PlanePoint::reference();
  if (std::holds_alternative<Elliptic>(cls))
    return PlanePoint::from(detail::elliptic_fixed(cinv));
  if (std::holds_alternative<Hyperbolic>(cls))
    return foot_from_reference(chart_of(axis(cinv)));
  auto fp = std::get<ParabolicFixedPoint>(fixed_points(cinv));
  PlanePoint ref = PlanePoint::reference();
  return walk(ref, direction_to_boundary(ref, fp.point), 1.0);
}

// Region of the canonical lift of [g,h]; always lands in the allowed set
// {1} u Hyp_{-1,0,1} u Ell_{+-1} u Par_0 u Par_{-1}^+ u Par_1^-. The trace
// settles everything except the +-1 pairs, which the sign of the real twist
// resolves.
inline CoverRegion classify_commutator(const Isometry& g, const Isometry& h) {
  using K = CoverRegion::Kind;
  Isometry c = commutator(g, h);
  if (psl_equal(c, Isometry::identity(), tol::trace)) return {K::CenterPower, 0};
  // Tr[g,h] through the trace identity x^2+y^2+z^2-xyz-2: the product matrix
  // computes the same number with catastrophic cancellation for large entries
  double x = g.trace(), y = h.trace(), z = (g * h).trace();
  double tr = x * x + y * y + z * z - x * y * z - 2.0;
  if (tr > 2.0 + tol::trace) return {K::Hyp, 0};
  PlanePoint probe = commutator_probe_point(g, h);
  double tw = detail::commutator_real_twist(g, h, probe);
  if (std::fabs(tr - 2.0) <= tol::trace)
    return tw > 0 ? CoverRegion{K::ParPlus, 0} : CoverRegion{K::ParMinus, 0};
  if (std::fabs(tr + 2.0) <= tol::trace)
    return tw > 0 ? CoverRegion{K::ParMinus, 1} : CoverRegion{K::ParPlus, -1};
  if (tr < -2.0) return tw > 0 ? CoverRegion{K::Hyp, 1} : CoverRegion{K::Hyp, -1};
  return tw > 0 ? CoverRegion{K::Ell, 1} : CoverRegion{K::Ell, -1};
}

// Real twist of the canonical lift of [g^-1, h^-1] at p, checked against the
// twist interval of the commutator's region.
inline double commutator_twist(const Isometry& g, const Isometry& h, const PlanePoint& p) {
  CoverRegion region = classify_commutator(g, h);
  double tw = detail::commutator_real_twist(g, h, p);
  auto [lo, hi] = twist_interval(region);
  if (region.kind == CoverRegion::Kind::CenterPower) {
    if (std::fabs(tw - lo) > tol::twist)
      throw Error("commutator twist inconsistent with identity lift");
    return tw;
  }
  if (tw < lo - tol::twist || tw > hi + tol::twist)
    throw Error("commutator twist outside the region interval: " + region.str());
  if (std::fabs(tw - lo) < tol::twist || std::fabs(tw - hi) < tol::twist)
    throw AmbiguousNearBoundary("twist within tolerance of the " + region.str() +
                                " interval boundary");
  return tw;
}

}  // namespace holonomy
