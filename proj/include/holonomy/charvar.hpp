#pragma once

// Character-triple algebra: kappa, character-variety membership, Markoff
// moves with tracked basis-change words, virtually-abelian and reducible
// detection, greedy trace-increasing normalization, and realization of
// characters by matrix pairs.

#include <cstdint>
#include <utility>
#include <variant>
#include <vector>

#include "holonomy/moebius.hpp"

namespace holonomy {

struct CharacterTriple {
  double x, y, z;
  double& operator[](int i) { return i == 0 ? x : i == 1 ? y : z; }
  double operator[](int i) const { return i == 0 ? x : i == 1 ? y : z; }
};

inline double kappa(const CharacterTriple& t) {
  return t.x * t.x + t.y * t.y + t.z * t.z - t.x * t.y * t.z - 2.0;
}

inline CharacterTriple character_of(const Isometry& g, const Isometry& h) {
  return {g.trace(), h.trace(), (g * h).trace()};
}

// Goldman's criterion: realizable iff kappa >= 2 or some |coordinate| >= 2.
inline bool in_character_variety(const CharacterTriple& t) {
  if (kappa(t) >= 2.0 - tol::trace) return true;
  return std::fabs(t.x) >= 2.0 - tol::trace || std::fabs(t.y) >= 2.0 - tol::trace ||
         std::fabs(t.z) >= 2.0 - tol::trace;
}

// The virtually-abelian-but-not-abelian locus: two coordinates zero, the
// third outside [-2, 2].
inline bool in_V(const CharacterTriple& t) {
  for (int i = 0; i < 3; ++i) {
    int j = (i + 1) % 3, k = (i + 2) % 3;
    if (std::fabs(t[j]) <= tol::trace && std::fabs(t[k]) <= tol::trace &&
        std::fabs(t[i]) > 2.0 + tol::trace)
      return true;
  }
  return false;
}

inline bool is_reducible(const CharacterTriple& t) {
  return std::fabs(kappa(t) - 2.0) <= tol::trace;
}

// ---------------------------------------------------------------------------
// Basis moves and words

// Elementary automorphisms of the free group on (G, H):
//   InvertH:   (G,H) -> (G,H^-1)      triples (x,y,z) -> (x,y,xy-z)
//   SwapGH:    (G,H) -> (H,G)         triples (x,y,z) -> (y,x,z)
//   MultRight: (G,H) -> (G,GH)        triples (x,y,z) -> (x,z,xz-y)
enum class BasisMove { InvertH, SwapGH, MultRight };

// Negates the coordinates at indices i < j; acts trivially on PSL(2,R) pairs.
struct SignChange {
  int i, j;
  bool operator==(const SignChange&) const = default;
};

using MoveStep = std::variant<BasisMove, SignChange>;

struct MoveWord {
  std::vector<MoveStep> steps;

  void append(const MoveWord& w) {
    steps.insert(steps.end(), w.steps.begin(), w.steps.end());
  }
};

inline CharacterTriple apply_step(const MoveStep& s, CharacterTriple t) {
  if (auto* m = std::get_if<BasisMove>(&s)) {
    switch (*m) {
      case BasisMove::InvertH: return {t.x, t.y, t.x * t.y - t.z};
      case BasisMove::SwapGH: return {t.y, t.x, t.z};
      case BasisMove::MultRight: return {t.x, t.z, t.x * t.z - t.y};
    }
  }
  auto sc = std::get<SignChange>(s);
  t[sc.i] = -t[sc.i];
  t[sc.j] = -t[sc.j];
  return t;
}

inline CharacterTriple apply_word_triple(const MoveWord& w, CharacterTriple t) {
  for (const auto& s : w.steps) t = apply_step(s, t);
  return t;
}

// Matrix-pair action; sign changes act trivially (they alter SL(2,R) lifts only).
inline std::pair<Isometry, Isometry> apply_word(const MoveWord& w, Isometry g, Isometry h) {
  for (const auto& s : w.steps) {
    if (auto* m = std::get_if<BasisMove>(&s)) {
      switch (*m) {
        case BasisMove::InvertH: h = h.inverse(); break;
        case BasisMove::SwapGH: std::swap(g, h); break;
        case BasisMove::MultRight: h = g * h; break;
      }
    }
  }
  return {g, h};
}

// ---------------------------------------------------------------------------
// Compilation table: triple-level moves as words in the elementary steps.
// The only source of truth mapping triple actions to automorphisms.

namespace words {

inline MoveWord swap_xy() { return {{BasisMove::SwapGH}}; }
inline MoveWord swap_yz() { return {{BasisMove::MultRight, BasisMove::InvertH}}; }
inline MoveWord swap_xz() {
  return {{BasisMove::SwapGH, BasisMove::MultRight, BasisMove::InvertH, BasisMove::SwapGH}};
}
// x -> yz - x, conjugate of InvertH by the (x z) transposition
inline MoveWord markoff_x() {
  MoveWord w = swap_xz();
  w.steps.push_back(BasisMove::InvertH);
  w.append(swap_xz());
  return w;
}
// (G,H) -> (G^-1,H), trivial on triples
inline MoveWord invert_g() {
  return {{BasisMove::SwapGH, BasisMove::InvertH, BasisMove::SwapGH}};
}

// Word performing a given permutation of (x,y,z): slot i of the result holds
// coordinate perm[i] of the input.
inline MoveWord permutation(const std::array<int, 3>& perm) {
  // realize as a sequence of adjacent transpositions on a working copy
  std::array<int, 3> cur{0, 1, 2};
  MoveWord w;
  auto emit = [&](int slot) {  // swap slots slot, slot+1
    if (slot == 0) w.append(swap_xy());
    else w.append(swap_yz());
    std::swap(cur[slot], cur[slot + 1]);
  };
  for (int i = 0; i < 2; ++i) {
    int j = i;
    while (cur[j] != perm[i]) ++j;
    for (; j > i; --j) emit(j - 1);
  }
  return w;
}

}  // namespace words

// ---------------------------------------------------------------------------
// Greedy trace-increasing normalization

struct NormalizeResult {
  CharacterTriple triple;
  MoveWord word;
  long iterations;
};

struct NormalizeStep {
  int region;
  CharacterTriple before, after;
};

namespace detail {

// Region index for a triple already normalized to |x| <= |y| <= |z|, y,z >= 0.
// Ties at |coordinate| = 2 within the trace tolerance go to the closed side.
inline int region_of(const CharacterTriple& t) {
  constexpr double hi = 2.0;
  bool x_above = t.x > hi + tol::trace;
  bool x_below = t.x < -(hi + tol::trace);
  bool y_big = t.y > hi + tol::trace;
  bool z_big = t.z > hi + tol::trace;
  if (x_above) return 1;
  if (x_below) return 2;
  if (y_big && z_big) return 3;
  if (z_big) return t.x >= 0 ? 4 : 5;
  return t.x >= 0 ? 6 : 7;
}

}  // namespace detail

// Change basis until all three trace coordinates exceed 2, by the greedy
// region descent. Requires kappa > 2 and a character outside V.
inline NormalizeResult markoff_normalize(const CharacterTriple& start,
                                         std::vector<NormalizeStep>* trace = nullptr) {
  if (in_V(start)) throw InV("character lies in V");
  if (!(kappa(start) > 2.0 + tol::trace)) throw KappaTooSmall("kappa(t) <= 2");

  CharacterTriple cur = start;
  MoveWord word;
  auto step = [&](const MoveWord& w) {
    for (const auto& s : w.steps) cur = apply_step(s, cur);
    word.append(w);
  };
  auto sort_and_sign = [&] {
    // sort by |coordinate| ascending; stable, so equal magnitudes keep order
    if (std::fabs(cur.x) > std::fabs(cur.y)) step(words::swap_xy());
    if (std::fabs(cur.y) > std::fabs(cur.z)) step(words::swap_yz());
    if (std::fabs(cur.x) > std::fabs(cur.y)) step(words::swap_xy());
    if (cur.y < 0 && cur.z < 0) step(MoveWord{{SignChange{1, 2}}});
    else if (cur.y < 0) step(MoveWord{{SignChange{0, 1}}});
    else if (cur.z < 0) step(MoveWord{{SignChange{0, 2}}});
  };

  const long cap = 1000000;
  long iter = 0;
  while (true) {
    if (++iter > cap) throw IterationCap("markoff_normalize exceeded the iteration cap");
    sort_and_sign();
    int region = detail::region_of(cur);
    if (region == 1) break;
    CharacterTriple before = cur;
    if (region == 2) {
      step(MoveWord{{SignChange{1, 2}}});
      step(words::markoff_x());
      step(MoveWord{{SignChange{1, 2}}});
    } else {
      step(words::markoff_x());
    }
    if (trace) trace->push_back({region, before, cur});
  }
  return {cur, word, iter};
}

// ---------------------------------------------------------------------------
// Pair classification

struct PairClass {
  enum class Kind { Abelian, VirtuallyAbelianNonAbelian, ReducibleNonAbelian, Generic };
  enum class Regime { BelowMinus2, AtMinus2, Between, AtPlus2, Above2 };
  Kind kind;
  Regime regime;  // meaningful for Generic only
};

inline PairClass classify_pair(const Isometry& g, const Isometry& h) {
  using K = PairClass::Kind;
  using R = PairClass::Regime;
  Isometry c = commutator(g, h);
  if (psl_equal(c, Isometry::identity(), tol::trace)) return {K::Abelian, R::AtPlus2};
  if (in_V(character_of(g, h))) return {K::VirtuallyAbelianNonAbelian, R::Above2};
  double k = kappa(character_of(g, h));  // = Tr[g,h], computed without cancellation
  if (std::fabs(k - 2.0) <= tol::trace) return {K::ReducibleNonAbelian, R::AtPlus2};
  if (k < -2.0 - tol::trace) return {K::Generic, R::BelowMinus2};
  if (k <= -2.0 + tol::trace) return {K::Generic, R::AtMinus2};
  if (k < 2.0 - tol::trace) return {K::Generic, R::Between};
  return {K::Generic, R::Above2};
}

// ---------------------------------------------------------------------------
// Realization of characters

// A matrix pair with the given character; exact in each coordinate. Throws
// NotRealizable outside the character variety.
inline std::pair<Isometry, Isometry> realize(const CharacterTriple& t) {
  if (!in_character_variety(t)) throw NotRealizable("triple is not a character");

  int imax = 0;
  for (int i = 1; i < 3; ++i)
    if (std::fabs(t[i]) > std::fabs(t[imax])) imax = i;

  if (std::fabs(t[imax]) >= 2.0) {
    // move the large coordinate into the z slot, realize, move back
    std::array<int, 3> to_z{0, 1, 2};
    std::swap(to_z[imax], to_z[2]);
    CharacterTriple s = {t[to_z[0]], t[to_z[1]], t[to_z[2]]};
    double zeta = (s.z + (s.z < 0 ? -1 : 1) * std::sqrt(s.z * s.z - 4.0)) / 2.0;
    Isometry g{s.x, -1.0, 1.0, 0.0};
    Isometry h{0.0, zeta, -1.0 / zeta, s.y};
    if (imax == 2) return {g, h};
    return apply_word(words::permutation(to_z), g, h);  // transposition, self-inverse
  }

  // all |coordinates| < 2 and kappa >= 2: two elliptic rotations
  double aa = std::acos(std::clamp(t.x / 2.0, -1.0, 1.0));
  double b0 = std::acos(std::clamp(t.y / 2.0, -1.0, 1.0));
  double sa = std::sin(aa);
  for (double sb : {std::sin(b0), -std::sin(b0)}) {
    double denom = 2.0 * sa * sb;
    if (std::fabs(denom) < 1e-14) continue;
    double ch = (2.0 * std::cos(aa) * std::cos(b0) - t.z) / denom;
    if (ch < 1.0 - 1e-9) continue;
    double s = safe_acosh(std::max(1.0, ch));
    double e = std::exp(s / 2.0);
    Isometry g{std::cos(aa), sa, -sa, std::cos(aa)};
    Isometry tr{e, 0, 0, 1.0 / e};
    Isometry rot{std::cos(b0), sb, -sb, std::cos(b0)};
    return {g, tr * rot * tr.inverse()};
  }
  throw NotRealizable("no elliptic realization found");
}

}  // namespace holonomy
