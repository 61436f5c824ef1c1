#pragma once

// Test-side oracles and samplers, independent of the implementation paths
// they check.

#include <algorithm>
#include <random>
#include <string>
#include <vector>

#include "holonomy/charvar.hpp"
#include "holonomy/moebius.hpp"
#include "holonomy/pentagon.hpp"

namespace oracles {

using namespace holonomy;

// ---------------------------------------------------------------------------
// Samplers

inline Isometry random_isometry(std::mt19937_64& rng, double range = 3.0) {
  std::uniform_real_distribution<double> U(-range, range);
  for (;;) {
    double a = U(rng), b = U(rng), c = U(rng), d = U(rng);
    if (a * d - b * c > 0.05) return Isometry{a, b, c, d};
  }
}

inline Isometry random_conjugator(std::mt19937_64& rng) {
  return random_isometry(rng, 2.0);
}

inline std::pair<Isometry, Isometry> conjugate_pair(const std::pair<Isometry, Isometry>& p,
                                                    const Isometry& c) {
  return {c * p.first * c.inverse(), c * p.second * c.inverse()};
}

// elliptic half-turn about a point
inline Isometry half_turn(const PlanePoint& q) {
  double s = std::sqrt(q.h);
  Isometry move{s, q.x / s, 0, 1 / s};  // i -> q
  return move * Isometry{0, 1, -1, 0} * move.inverse();
}

// pair with character in V: half-turns about two distinct points
inline std::pair<Isometry, Isometry> v_pair(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> U(-2.0, 2.0), H(0.2, 3.0);
  PlanePoint q1{U(rng), H(rng)};
  PlanePoint q2{U(rng), H(rng)};
  while (distance(q1, q2) < 0.2) q2 = PlanePoint{U(rng), H(rng)};
  return {half_turn(q1), half_turn(q2)};
}

// commuting pair: powers along a common invariant object
inline std::pair<Isometry, Isometry> abelian_pair(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> U(0.3, 2.0), A(0.2, 3.0);
  Isometry c = random_conjugator(rng);
  switch (rng() % 3) {
    case 0: {  // hyperbolic, common axis
      double s = std::exp(U(rng)), t = std::exp(U(rng));
      return conjugate_pair({Isometry{s, 0, 0, 1 / s}, Isometry{t, 0, 0, 1 / t}}, c);
    }
    case 1: {  // parabolic, common fixed point
      return conjugate_pair({Isometry{1, U(rng), 0, 1}, Isometry{1, U(rng) + 0.1, 0, 1}}, c);
    }
    default: {  // elliptic, common centre
      double a = A(rng) / 2, b = A(rng) / 2;
      Isometry r1{std::cos(a), std::sin(a), -std::sin(a), std::cos(a)};
      Isometry r2{std::cos(b), std::sin(b), -std::sin(b), std::cos(b)};
      return conjugate_pair({r1, r2}, c);
    }
  }
}

// character with a prescribed commutator trace; x,y kept in a range where the
// solving quadratic has real roots
inline CharacterTriple char_with_kappa(std::mt19937_64& rng, double K, double lo = 3.0,
                                       double hi = 5.0) {
  std::uniform_real_distribution<double> U(lo, hi), flip(0, 1);
  for (;;) {
    double x = U(rng), y = U(rng);
    double disc = x * x * y * y - 4.0 * (x * x + y * y - 2.0 - K);
    if (disc <= 0.01) continue;
    double z = (x * y + (flip(rng) < 0.5 ? 1 : -1) * std::sqrt(disc)) / 2.0;
    return {x, y, z};
  }
}

// gentle conjugator: keeps the conditioning of exact-kappa pairs tight enough
// that the pair-level kappa stays inside its trace band
inline Isometry mild_conjugator(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> U(-1.2, 1.2);
  for (;;) {
    double a = U(rng), b = U(rng), c = U(rng), d = U(rng);
    if (a * d - b * c > 0.5) return Isometry{a, b, c, d};
  }
}

// reducible non-abelian pair in one of the two normal-form shapes, conjugated
inline std::pair<Isometry, Isometry> reducible_pair(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> U(1.2, 3.0), T(0.3, 2.0);
  Isometry c = random_conjugator(rng);
  if (rng() % 2) {
    Isometry g{1, T(rng), 0, 1};
    double e = U(rng);
    Isometry h{std::sqrt(e), 0, 0, 1 / std::sqrt(e)};
    return conjugate_pair({g, h}, c);
  }
  double a = U(rng), e = U(rng);
  Isometry g{std::sqrt(a), 0, 0, 1 / std::sqrt(a)};
  Isometry h{std::sqrt(e), std::sqrt(e), 0, 1 / std::sqrt(e)};  // z -> e(z+1)
  return conjugate_pair({g, h}, c);
}

// ---------------------------------------------------------------------------
// Geometry oracles

// dense polyline along a geodesic segment
inline std::vector<cplx> flatten_segment(cplx a, cplx b, int n = 256) {
  ChartGeodesic c = chart_through(a, b);
  std::vector<cplx> pts;
  pts.reserve(n + 1);
  if (c.vertical) {
    for (int i = 0; i <= n; ++i) {
      double t = double(i) / n;
      pts.emplace_back(a.real() * (1 - t) + b.real() * t,
                       a.imag() * std::pow(b.imag() / a.imag(), t));
    }
    return pts;
  }
  double pa = chart_param(c, a), pb = chart_param(c, b);
  for (int i = 0; i <= n; ++i) {
    double t = pa + (pb - pa) * i / n;
    pts.emplace_back(c.x0 + c.radius * std::cos(t), c.radius * std::sin(t));
  }
  return pts;
}

inline bool euclid_segments_cross(cplx a1, cplx a2, cplx b1, cplx b2) {
  auto cross = [](cplx u, cplx v) { return u.real() * v.imag() - u.imag() * v.real(); };
  double d1 = cross(a2 - a1, b1 - a1), d2 = cross(a2 - a1, b2 - a1);
  double d3 = cross(b2 - b1, a1 - b1), d4 = cross(b2 - b1, a2 - b1);
  return ((d1 > 0) != (d2 > 0)) && ((d3 > 0) != (d4 > 0));
}

// brute-force pairwise intersection of polyline approximations
inline bool pentagon_self_crosses_bruteforce(const Pentagon& P, int n = 200) {
  std::array<std::vector<cplx>, 5> poly;
  for (int i = 0; i < 5; ++i) poly[i] = flatten_segment(P.v[i].z(), P.v[(i + 1) % 5].z(), n);
  for (int i = 0; i < 5; ++i)
    for (int j = i + 1; j < 5; ++j) {
      bool adjacent = (j == i + 1) || (i == 0 && j == 4);
      for (size_t s = 0; s + 1 < poly[i].size(); ++s)
        for (size_t t = 0; t + 1 < poly[j].size(); ++t) {
          if (adjacent) {
            // skip the chunks meeting at the shared vertex
            bool near_shared = (j == i + 1) ? (s + 2 >= poly[i].size() && t < 2)
                                            : (t + 2 >= poly[j].size() && s < 2);
            if (near_shared) continue;
          }
          if (euclid_segments_cross(poly[i][s], poly[i][s + 1], poly[j][t], poly[j][t + 1]))
            return true;
        }
    }
  return false;
}

// Exact signed area of the geodesic polygon as the line integral of dx/y:
// each circular edge contributes phi_start - phi_end, vertical edges nothing.
inline double signed_area_line_integral(const Pentagon& P) {
  double area = 0.0;
  for (int i = 0; i < 5; ++i) {
    cplx a = P.v[i].z(), b = P.v[(i + 1) % 5].z();
    ChartGeodesic c = chart_through(a, b);
    if (c.vertical) continue;
    area += std::arg((a - c.x0) * std::conj(b - c.x0));
  }
  return area;
}

// even-odd point-in-polygon test on the flattened boundary
inline bool point_in_pentagon(const Pentagon& P, cplx q, int n = 256) {
  int crossings = 0;
  for (int i = 0; i < 5; ++i) {
    auto poly = flatten_segment(P.v[i].z(), P.v[(i + 1) % 5].z(), n);
    for (size_t s = 0; s + 1 < poly.size(); ++s) {
      cplx a = poly[s], b = poly[s + 1];
      if ((a.real() > q.real()) == (b.real() > q.real())) continue;
      double t = (q.real() - a.real()) / (b.real() - a.real());
      double y = a.imag() + t * (b.imag() - a.imag());
      if (y > q.imag()) ++crossings;
    }
  }
  return crossings % 2 == 1;
}

// ---------------------------------------------------------------------------
// Markoff oracle: direct transliteration of the greedy region rules on
// triples, no words, no shared code with the library loop.

inline CharacterTriple markoff_replay(CharacterTriple t, long cap = 1000000) {
  auto val = [&](int i) { return i == 0 ? t.x : i == 1 ? t.y : t.z; };
  for (long iter = 0; iter < cap; ++iter) {
    std::array<double, 3> v{t.x, t.y, t.z};
    std::stable_sort(v.begin(), v.end(),
                     [](double p, double q) { return std::fabs(p) < std::fabs(q); });
    if (v[1] < 0 && v[2] < 0) { v[1] = -v[1]; v[2] = -v[2]; }
    else if (v[1] < 0) { v[0] = -v[0]; v[1] = -v[1]; }
    else if (v[2] < 0) { v[0] = -v[0]; v[2] = -v[2]; }
    t = {v[0], v[1], v[2]};
    if (t.x > 2.0 + tol::trace) return t;  // R1
    if (t.x < -(2.0 + tol::trace)) {
      // R2: make all negative, replace x, restore signs
      t = {t.x, -t.y, -t.z};
      t = {t.y * t.z - t.x, t.y, t.z};
      t = {t.x, -t.y, -t.z};
    } else {
      t = {t.y * t.z - t.x, t.y, t.z};  // R3..R7 all replace the small coordinate
    }
  }
  (void)val;
  throw IterationCap("markoff_replay cap");
}

// ---------------------------------------------------------------------------
// Minimal XML well-formedness check (tags balance, quotes close)

inline bool xml_well_formed(const std::string& s) {
  std::vector<std::string> stack;
  size_t i = 0;
  if (s.find("nan") != std::string::npos || s.find("inf") != std::string::npos) return false;
  while (i < s.size()) {
    if (s[i] != '<') { ++i; continue; }
    size_t j = s.find('>', i);
    if (j == std::string::npos) return false;
    // make sure no unbalanced quotes inside
    int quotes = 0;
    for (size_t k = i; k < j; ++k)
      if (s[k] == '"') ++quotes;
    if (quotes % 2) return false;
    std::string tag = s.substr(i + 1, j - i - 1);
    if (!tag.empty() && tag.front() == '?') { i = j + 1; continue; }
    if (!tag.empty() && tag.front() == '/') {
      std::string name = tag.substr(1);
      if (stack.empty() || stack.back() != name) return false;
      stack.pop_back();
    } else if (!tag.empty() && tag.back() != '/') {
      std::string name = tag.substr(0, tag.find_first_of(" \t\n"));
      stack.push_back(name);
    }
    i = j + 1;
  }
  return stack.empty();
}

}  // namespace oracles
