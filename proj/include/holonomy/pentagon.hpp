#pragma once

// The geodesic pentagon generated by a pair (g,h) at a basepoint p: vertices,
// simplicity, interior angle sum, signed area, corner angle, and the edge
// identifications carried by g and h.

#include <array>

#include "holonomy/cover.hpp"
#include "holonomy/moebius.hpp"

namespace holonomy {

// Vertices in traversal order p -> [g^-1,h^-1]p -> hp -> ghp -> h^-1ghp -> p;
// edge e_i joins v[i] to v[i+1 mod 5].
struct Pentagon {
  std::array<PlanePoint, 5> v;
};

enum class Orientation { Left, Right };

inline Pentagon build_pentagon(const Isometry& g, const Isometry& h, const PlanePoint& p) {
  PlanePoint p1 = apply(h, p);
  PlanePoint p2 = apply(g, p1);
  PlanePoint p3 = apply(h.inverse(), p2);
  PlanePoint p4 = apply(g.inverse(), p3);
  return Pentagon{{p, p4, p1, p2, p3}};
}

inline bool is_degenerate(const Pentagon& P) {
  for (int i = 0; i < 5; ++i)
    if (distance(P.v[i], P.v[(i + 1) % 5]) < tol::degenerate) return true;
  return false;
}

inline bool is_simple(const Pentagon& P) {
  if (is_degenerate(P)) return false;
  std::array<GeodesicSegment, 5> e{
      GeodesicSegment{P.v[0].z(), P.v[1].z()}, GeodesicSegment{P.v[1].z(), P.v[2].z()},
      GeodesicSegment{P.v[2].z(), P.v[3].z()}, GeodesicSegment{P.v[3].z(), P.v[4].z()},
      GeodesicSegment{P.v[4].z(), P.v[0].z()}};
  double scale = 1.0;
  for (const auto& s : e) scale = std::max({scale, std::abs(s.a), std::abs(s.b)});
  for (int i = 0; i < 5; ++i) {
    for (int j = i + 1; j < 5; ++j) {
      bool adjacent = (j == i + 1) || (i == 0 && j == 4);
      if (!adjacent) {
        if (same_chart(e[i].chart, e[j].chart, scale)) {
          if (detail::overlap_same(e[i], e[j]) > detail::param_tol(e[i].chart)) return false;
        } else if (detail::cross_distinct(e[i], e[j])) {
          return false;
        }
      } else if (same_chart(e[i].chart, e[j].chart, scale)) {
        // collinear neighbours must continue straight through the shared
        // vertex, not double back over each other
        const GeodesicSegment& s = e[i];
        const GeodesicSegment& t = e[j];
        double tv = (j == i + 1) ? s.tb : s.ta;  // shared vertex parameter
        double sp = (j == i + 1) ? s.ta : s.tb;
        double tp = (j == i + 1) ? chart_param(s.chart, t.b) : chart_param(s.chart, t.a);
        if ((sp - tv) * (tp - tv) > 0) return false;
      }
    }
  }
  return true;
}

namespace detail {

// Unoriented angle at v between the geodesics toward a and b, in [0, pi].
inline double vertex_angle(cplx v, cplx a, cplx b) {
  cplx ta = geodesic_direction(v, a), tb = geodesic_direction(v, b);
  return std::fabs(std::arg(ta / tb));
}

// Signed area of the geodesic triangle (A,B,C): angle defect with the sign of
// the conformal turning number of the boundary.
inline double triangle_signed_area(cplx A, cplx B, cplx C) {
  double scale = std::abs(A) + std::abs(B) + std::abs(C) + 1.0;
  if (std::abs(A - B) < 1e-13 * scale || std::abs(B - C) < 1e-13 * scale ||
      std::abs(C - A) < 1e-13 * scale)
    return 0.0;
  double defect = pi - vertex_angle(A, C, B) - vertex_angle(B, A, C) - vertex_angle(C, B, A);
  if (std::fabs(defect) < 1e-12) return 0.0;
  double turning = transport_angle(A, B) + transport_angle(B, C) + transport_angle(C, A);
  std::array<cplx, 3> vs{A, B, C};
  for (int i = 0; i < 3; ++i) {
    cplx prev = vs[(i + 2) % 3], at = vs[i], next = vs[(i + 1) % 3];
    cplx w_in = -geodesic_direction(at, prev);
    cplx w_out = geodesic_direction(at, next);
    turning += std::arg(w_out / w_in);
  }
  return (turning > 0 ? 1.0 : -1.0) * std::max(0.0, defect);
}

}  // namespace detail

// Signed hyperbolic area, positive for anticlockwise traversal; computed by
// geodesic triangulation from v0.
inline double signed_area(const Pentagon& P) {
  if (!is_simple(P)) throw NotSimple();
  double area = 0.0;
  for (int i = 1; i <= 3; ++i)
    area += detail::triangle_signed_area(P.v[0].z(), P.v[i].z(), P.v[i + 1].z());
  return area;
}

// Sum of the five interior angles, each in (0, 2*pi).
inline double angle_sum(const Pentagon& P) {
  if (!is_simple(P)) throw NotSimple();
  // orientation: Euclidean vertex polygon as a fast pre-pass, verified
  // against the hyperbolic signed area (which wins on disagreement)
  double shoelace = 0.0;
  for (int i = 0; i < 5; ++i) {
    const PlanePoint &a = P.v[i], &b = P.v[(i + 1) % 5];
    shoelace += a.x * b.h - b.x * a.h;
  }
  double orient = shoelace > 0 ? 1.0 : -1.0;
  double hyp = signed_area(P);
  if (std::fabs(hyp) > 1e-10 && (hyp > 0) != (orient > 0)) orient = hyp > 0 ? 1.0 : -1.0;
  double sum = 0.0;
  for (int i = 0; i < 5; ++i) {
    cplx prev = P.v[(i + 4) % 5].z(), at = P.v[i].z(), next = P.v[(i + 1) % 5].z();
    double d = orient * (std::arg(geodesic_direction(at, prev)) -
                         std::arg(geodesic_direction(at, next)));
    double r = std::fmod(d, two_pi);
    if (r < 0) r += two_pi;
    sum += r;
  }
  return sum;
}

struct PentagonReport {
  bool simple;
  bool degenerate;
  double angle_sum;
  double signed_area;
  Orientation orientation;
};

inline PentagonReport analyze(const Pentagon& P) {
  PentagonReport r{};
  r.degenerate = is_degenerate(P);
  r.simple = is_simple(P);
  if (r.simple) {
    r.signed_area = signed_area(P);
    r.angle_sum = angle_sum(P);
    r.orientation = r.signed_area > 0 ? Orientation::Left : Orientation::Right;
  }
  return r;
}

struct CornerAngle {
  double theta;
  Orientation orientation;
};

// theta = 3*pi - |Twist([g^-1,h^-1], p)|; Left when the twist is positive.
// Cross-checked against the interior angle sum.
inline CornerAngle corner_angle(const Isometry& g, const Isometry& h, const PlanePoint& p) {
  Pentagon P = build_pentagon(g, h, p);
  if (!is_simple(P)) throw NotSimple();
  double tw = commutator_twist(g, h, p);
  double theta = 3.0 * pi - std::fabs(tw);
  if (std::fabs(theta - angle_sum(P)) > 1e-4)
    throw TwistAngleMismatch("corner angle disagrees with the interior angle sum");
  return {theta, tw > 0 ? Orientation::Left : Orientation::Right};
}

// g maps edge v1->v2 onto v4->v3 and h maps edge v4->v0 onto v3->v2.
inline bool check_identifications(const Isometry& g, const Isometry& h, const Pentagon& P) {
  constexpr double eps = 1e-9;
  return distance(apply(g, P.v[1]), P.v[4]) <= eps &&
         distance(apply(g, P.v[2]), P.v[3]) <= eps &&
         distance(apply(h, P.v[4]), P.v[3]) <= eps &&
         distance(apply(h, P.v[0]), P.v[2]) <= eps;
}

}  // namespace holonomy
