#include <doctest.h>

#include <random>

#include "holonomy/construct.hpp"
#include "oracles.hpp"

using namespace holonomy;

namespace {

void check_verified(const ConstructionResult& r) {
  CHECK(is_simple(r.pentagon));
  CHECK(r.theta > 0);
  CHECK(r.theta < 3 * pi);
  CHECK(std::fabs(r.theta - (3 * pi - std::fabs(r.twist))) < 1e-6);
  CHECK(std::fabs(std::fabs(signed_area(r.pentagon)) + r.theta - 3 * pi) < 1e-6);
  CHECK(check_identifications(r.g_eff, r.h_eff, r.pentagon));
  CHECK((r.orientation == Orientation::Left) == (r.twist > 0));
  CHECK(r.corner_order < 1.0);
  CHECK(r.theta == doctest::Approx(two_pi * (0.5 + r.corner_order)).epsilon(1e-12));
}

}  // namespace

TEST_CASE("dispatch: abelian and V rejections") {
  Isometry a{2, 0, 0, 0.5}, b{3, 0, 0, 1.0 / 3};
  auto out = construct(a, b);
  auto* nh = std::get_if<NotHolonomy>(&out);
  REQUIRE(nh);
  CHECK(nh->reason == NotHolonomy::Reason::Abelian);

  std::mt19937_64 rng(51);
  for (int k = 0; k < 50; ++k) {
    auto [g, h] = oracles::v_pair(rng);
    auto o = construct(g, h);
    auto* r = std::get_if<NotHolonomy>(&o);
    REQUIRE(r);
    CHECK(r->reason == NotHolonomy::Reason::VirtuallyAbelian);
  }
}

TEST_CASE("case HypNeg: theta = pi at offset 0, valid offsets, huge offset fails") {
  auto [g, h] = realize(CharacterTriple{3, 3, 5});
  auto out = construct(g, h);
  auto* r = std::get_if<ConstructionResult>(&out);
  REQUIRE(r);
  CHECK(r->case_tag == CaseTag::HypNeg);
  CHECK(std::fabs(r->theta - pi) < 1e-9);
  check_verified(*r);
  CoverRegion reg = r->commutator_region;
  bool hyp1 = reg == CoverRegion{CoverRegion::Kind::Hyp, 1};
  CHECK((r->orientation == Orientation::Left) == hyp1);

  auto out2 = construct(g, h, {0.4, 0});
  auto* r2 = std::get_if<ConstructionResult>(&out2);
  REQUIRE(r2);
  CHECK(std::fabs(r2->theta - pi) > 1e-6);
  check_verified(*r2);

  auto out3 = construct(g, h, {-0.4, 0});
  auto* r3 = std::get_if<ConstructionResult>(&out3);
  REQUIRE(r3);
  check_verified(*r3);
  // opposite sides of the axis: angles land on opposite sides of pi
  CHECK((r2->theta - pi) * (r3->theta - pi) < 0);

  CHECK_THROWS_AS((void)construct(g, h, {50.0, 0}), ConstructionFailed);
}

TEST_CASE("case ParNeg: (3,3,3) pair, flattening corner angle") {
  Isometry g{1, 1, 1, 2}, h{1, -1, -1, 2};
  auto out = construct(g, h);
  auto* r = std::get_if<ConstructionResult>(&out);
  REQUIRE(r);
  CHECK(r->case_tag == CaseTag::ParNeg);
  check_verified(*r);

  double prev = 10;
  for (double d = 1; d <= 10; d += 1) {
    auto o = construct(g, h, {d, 0});
    auto* rd = std::get_if<ConstructionResult>(&o);
    REQUIRE(rd);
    double gap = std::fabs(rd->theta - pi);
    CHECK(gap < prev);
    prev = gap;
  }
  CHECK(prev < 1e-3);
}

TEST_CASE("case Elliptic: sub-ranges split by the rotation angle") {
  std::mt19937_64 rng(52);
  std::uniform_real_distribution<double> U(-1.99, 1.99);
  int small_rot = 0, large_rot = 0;
  while (small_rot < 20 || large_rot < 20) {
    CharacterTriple t = oracles::char_with_kappa(rng, U(rng));
    if (!(std::fabs(kappa(t)) < 2 - 1e-6)) continue;
    auto [g, h] = oracles::conjugate_pair(realize(t), oracles::random_conjugator(rng));
    auto out = construct(g, h);
    auto* r = std::get_if<ConstructionResult>(&out);
    REQUIRE(r);
    CHECK(r->case_tag == CaseTag::Elliptic);
    check_verified(*r);
    CHECK(r->theta > pi);
    CHECK(r->theta < 3 * pi);
    // rotation angle of the commutator lift at its fixed point
    Isometry cinv = commutator(g.inverse(), h.inverse());
    auto ef = std::get<EllipticFixedPoint>(fixed_points(cinv));
    double rot = std::fabs(detail::commutator_real_twist(g, h, ef.point));
    if (rot > pi + 1e-3) {
      ++large_rot;
      CHECK(r->theta <= 2 * pi + 1e-6);
    } else if (rot < pi - 1e-3) {
      ++small_rot;
      CHECK(r->theta >= 2 * pi - 1e-6);
    }
  }
}

TEST_CASE("case Elliptic: p = r is rejected by degeneracy") {
  auto [g, h] = realize(CharacterTriple{2.5, 2.5, 3.0});
  Isometry cinv = commutator(g.inverse(), h.inverse());
  auto ef = std::get<EllipticFixedPoint>(fixed_points(cinv));
  Pentagon P = build_pentagon(g, h, ef.point);
  CHECK(is_degenerate(P));  // the boundary edge collapses
  CHECK_FALSE(is_simple(P));
}

TEST_CASE("case Reducible: both shapes, orientations, any basepoint in p/h shape") {
  Isometry rg{1, 1, 0, 1}, rh{2, 0, 0, 0.5};
  auto out = construct(rg, rh);
  auto* r = std::get_if<ConstructionResult>(&out);
  REQUIRE(r);
  CHECK(r->case_tag == CaseTag::ReducibleNonAbelian);
  check_verified(*r);
  CHECK(r->theta > 2 * pi);
  CHECK(r->theta < 3 * pi);
  bool par_plus = r->commutator_region == CoverRegion{CoverRegion::Kind::ParPlus, 0};
  CHECK((r->orientation == Orientation::Left) == par_plus);

  double s3 = std::sqrt(3.0);
  Isometry rg2{2, 0, 0, 0.5}, rh2{s3, s3, 0, 1 / s3};
  auto out2 = construct(rg2, rh2);
  auto* r2 = std::get_if<ConstructionResult>(&out2);
  REQUIRE(r2);
  CHECK(r2->case_tag == CaseTag::ReducibleNonAbelian);
  check_verified(*r2);
  CHECK(r2->theta > 2 * pi);
  CHECK(r2->theta < 3 * pi);
  bool par_plus2 = r2->commutator_region == CoverRegion{CoverRegion::Kind::ParPlus, 0};
  CHECK((r2->orientation == Orientation::Left) == par_plus2);

  // parabolic/hyperbolic shape: every basepoint gives a simple pentagon
  std::mt19937_64 rng(53);
  std::uniform_real_distribution<double> X(-3, 3), H(0.1, 3);
  for (int k = 0; k < 100; ++k) {
    Pentagon P = build_pentagon(rg, rh, PlanePoint{X(rng), H(rng)});
    CHECK(is_simple(P));
  }

  // randomized conjugated shapes
  for (int k = 0; k < 60; ++k) {
    auto [g, h] = oracles::reducible_pair(rng);
    auto o = construct(g, h);
    auto* rr = std::get_if<ConstructionResult>(&o);
    REQUIRE(rr);
    CHECK(rr->case_tag == CaseTag::ReducibleNonAbelian);
    check_verified(*rr);
    CHECK(rr->theta > 2 * pi);
  }
}

TEST_CASE("case HypPos: (2,2,3) end to end with word replay") {
  Isometry g{1, 1, 0, 1}, h{1, 0, 1, 1};
  auto out = construct(g, h);
  auto* r = std::get_if<ConstructionResult>(&out);
  REQUIRE(r);
  CHECK(r->case_tag == CaseTag::HypPosI);
  CHECK_FALSE(r->word.steps.empty());
  check_verified(*r);
  CHECK(r->theta > 2 * pi);
  CHECK(r->theta < 3 * pi);

  // the stored word reproduces (g_eff, h_eff) up to sign
  auto [gw, hw] = apply_word(r->word, g, h);
  CHECK(psl_equal(gw, r->g_eff, 1e-9));
  CHECK(psl_equal(hw, r->h_eff, 1e-9));

  // normalized character realizes (3,4,10) up to sign equivalence
  CharacterTriple t = character_of(r->g_eff, r->h_eff);
  CHECK(t.x == doctest::Approx(3.0).epsilon(1e-9));
  CHECK(t.y == doctest::Approx(4.0).epsilon(1e-9));
  CHECK(t.z == doctest::Approx(10.0).epsilon(1e-9));
}

TEST_CASE("case HypPos: arrangements (ii) and (iii) via direct dispatch") {
  std::mt19937_64 rng(54);
  std::uniform_real_distribution<double> Ut(0.05, 0.95), Ul(1.1, 6.0);
  int got2 = 0, got3 = 0;
  while (got2 < 25 || got3 < 25) {
    double t = Ut(rng), lam = Ul(rng), mu = Ul(rng);
    Isometry g{lam, 0, 0, 1 / lam};
    Isometry M{t, -1, 1, -1};
    Isometry D{mu, 0, 0, 1 / mu};
    Isometry h = M * D * M.inverse();
    CharacterTriple ch = character_of(g, h);
    if (!(ch.x > 2 && ch.y > 2 && ch.z > 2 && commutator(g, h).trace() > 2 + 1e-6)) continue;
    double C = cross_ratio(g, h);
    if (!(C > 0 && C < 1)) continue;
    ConstructionResult r = detail::hyp_pos_arranged(MoveWord{}, g, h);
    check_verified(r);
    CHECK(r.theta > 2 * pi);
    CHECK(r.theta < 3 * pi);
    if (r.case_tag == CaseTag::HypPosII) ++got2;
    else if (r.case_tag == CaseTag::HypPosIII) ++got3;
    else CHECK(false);
  }
}

TEST_CASE("totality on random non-virtually-abelian pairs") {
  std::mt19937_64 rng(55);
  int done = 0, rejected = 0;
  while (done < 500) {
    Isometry g = oracles::random_isometry(rng), h = oracles::random_isometry(rng);
    auto out = construct(g, h);
    if (auto* r = std::get_if<ConstructionResult>(&out)) {
      ++done;
      check_verified(*r);
      auto [gw, hw] = apply_word(r->word, g, h);
      CHECK(psl_equal(gw, r->g_eff, 1e-9));
      CHECK(psl_equal(hw, r->h_eff, 1e-9));
    } else {
      ++rejected;
    }
  }
  CHECK(rejected < 100);  // generic pairs are rarely abelian or in V
}
