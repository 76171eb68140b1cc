// Tests for Weierstrass models: invariants, coordinate changes, integral
// clearing, global minimal models, and the logarithmic model height.

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "effdio/weierstrass.hpp"
#include "reference_data.hpp"

namespace effdio {
namespace {

WeierstrassModel curve(const char* a1, const char* a2, const char* a3,
                       const char* a4, const char* a6) {
  return WeierstrassModel{parse_rational(a1), parse_rational(a2),
                          parse_rational(a3), parse_rational(a4),
                          parse_rational(a6)};
}

WeierstrassModel curve_z(long a1, long a2, long a3, long a4, long a6) {
  return WeierstrassModel{Rational(a1), Rational(a2), Rational(a3),
                          Rational(a4), Rational(a6)};
}

WeierstrassModel ref_model(const testref::RefCurve& rc) {
  return curve(rc.a[0], rc.a[1], rc.a[2], rc.a[3], rc.a[4]);
}

TEST(Invariants, LegendreLambdaTwoExample) {
  // y^2 = x(x-1)(x-2): discriminant 64 and j-invariant 1728.
  CurveInvariants inv = invariants(curve_z(0, -3, 0, 2, 0));
  EXPECT_EQ(inv.disc, Rational(64));
  EXPECT_EQ(inv.j, Rational(1728));
}

TEST(Invariants, AlgebraicIdentitiesOnRandomModels) {
  std::mt19937 rng(20260815);
  std::uniform_int_distribution<long> coef(-50, 50);
  int checked = 0;
  while (checked < 200) {
    WeierstrassModel w =
        curve_z(coef(rng), coef(rng), coef(rng), coef(rng), coef(rng));
    CurveInvariants inv = detail::raw_invariants(w);
    EXPECT_EQ(inv.c6 * inv.c6, inv.c4 * inv.c4 * inv.c4 - 1728 * inv.disc);
    EXPECT_EQ(4 * inv.b8, inv.b2 * inv.b6 - inv.b4 * inv.b4);
    if (inv.disc != 0) {
      EXPECT_EQ(invariants(w).j * inv.disc, inv.c4 * inv.c4 * inv.c4);
    }
    ++checked;
  }
}

TEST(Invariants, SingularModelRejected) {
  EXPECT_THROW(invariants(curve_z(0, 0, 0, 0, 0)), SingularCurve);
  EXPECT_THROW(invariants(curve_z(0, 0, 0, -3, 2)), SingularCurve);
}

TEST(Transform, IdentityFixesModel) {
  WeierstrassModel w = curve_z(1, -1, 1, -10, -10);
  EXPECT_EQ(transform(w, Rational(1), Rational(0), Rational(0), Rational(0)), w);
}

TEST(Transform, ScalingLawForDiscriminant) {
  WeierstrassModel w = curve_z(0, -1, 1, -10, -20);
  CurveInvariants before = invariants(w);
  CurveInvariants after = invariants(
      transform(w, Rational(2), Rational(0), Rational(0), Rational(0)));
  EXPECT_EQ(after.disc * 4096, before.disc);
  EXPECT_EQ(after.c4 * 16, before.c4);
  EXPECT_EQ(after.c6 * 64, before.c6);
  EXPECT_EQ(after.j, before.j);
}

TEST(Transform, ZeroScaleRejected) {
  WeierstrassModel w = curve_z(0, 0, 1, -1, 0);
  EXPECT_THROW(transform(w, Rational(0), Rational(1), Rational(1), Rational(1)),
               DomainError);
}

TEST(Transform, RoundTripRestoresModel) {
  std::mt19937 rng(424242);
  std::uniform_int_distribution<long> coef(-9, 9);
  std::uniform_int_distribution<long> den(1, 5);
  for (int i = 0; i < 100; ++i) {
    WeierstrassModel w =
        curve_z(coef(rng), coef(rng), coef(rng), coef(rng), coef(rng));
    Rational u = make_rational(coef(rng), den(rng));
    if (u == 0) u = make_rational(3, 2);
    Rational r = make_rational(coef(rng), den(rng));
    Rational s = make_rational(coef(rng), den(rng));
    Rational t = make_rational(coef(rng), den(rng));
    WeierstrassModel moved = transform(w, u, r, s, t);
    // Inverse change of coordinates: (1/u, -r/u^2, -s/u, (r s - t)/u^3).
    WeierstrassModel back =
        transform(moved, 1 / u, -r / (u * u), -s / u, (r * s - t) / (u * u * u));
    EXPECT_EQ(back, w);
  }
}

TEST(IntegralModel, ClearsDenominatorsAdmissibly) {
  // A model with rational coefficients; clearing must preserve j and use
  // the u-scaling law.
  WeierstrassModel w = curve("1/2", "-2/3", "1", "-1/6", "5");
  auto [cleared, u] = integral_model(w);
  EXPECT_TRUE(is_integral(cleared));
  EXPECT_EQ(invariants(cleared).j, invariants(w).j);
  EXPECT_EQ(cleared, transform(w, u, Rational(0), Rational(0), Rational(0)));
}

TEST(IntegralModel, IntegralInputUntouched) {
  WeierstrassModel w = curve_z(1, 2, 3, 4, 5);
  auto [cleared, u] = integral_model(w);
  EXPECT_EQ(cleared, w);
  EXPECT_EQ(u, Rational(1));
}

TEST(MinimalModel, AlreadyMinimalFixedPoint) {
  WeierstrassModel w = curve_z(0, 0, 1, -1, 0);
  EXPECT_EQ(minimal_model(w), w);
}

TEST(MinimalModel, PowerOfTwoSixthReduces) {
  // y^2 = x^3 + 2^12 descends by u = 4 to y^2 = x^3 + 1 with |disc| = 432.
  WeierstrassModel w = curve_z(0, 0, 0, 0, 4096);
  MinimalModelResult res = minimal_model_with_scale(w);
  EXPECT_EQ(res.model, curve_z(0, 0, 0, 0, 1));
  EXPECT_EQ(res.u, Rational(4));
  mpz_class dmin = ::abs(invariants(res.model).disc.get_num());
  EXPECT_EQ(dmin, mpz_class(432));
  mpz_class draw = ::abs(invariants(w).disc.get_num());
  EXPECT_EQ(draw / dmin, mpz_class(1) << 24);  // disc drops by u^12 = 2^24
}

TEST(MinimalModel, CorpusModelsAreFixedPoints) {
  for (const auto& rc : testref::kCurves) {
    WeierstrassModel w = ref_model(rc);
    EXPECT_EQ(minimal_model(w), w) << rc.label;
  }
}

TEST(MinimalModel, RecoversCanonicalModelAfterTransforms) {
  std::mt19937 rng(777);
  std::uniform_int_distribution<long> small(-4, 4);
  std::uniform_int_distribution<long> den(1, 3);
  for (const auto& rc : testref::kCurves) {
    WeierstrassModel w = ref_model(rc);
    for (int rep = 0; rep < 4; ++rep) {
      Rational u = make_rational(den(rng), den(rng));
      Rational r = make_rational(small(rng), den(rng));
      Rational s = make_rational(small(rng), den(rng));
      Rational t = make_rational(small(rng), den(rng));
      WeierstrassModel moved = transform(w, u, r, s, t);
      MinimalModelResult res = minimal_model_with_scale(moved);
      EXPECT_EQ(res.model, w) << rc.label;
      // The recovered scale is admissible: it maps moved back onto a model
      // with the minimal discriminant.
      CurveInvariants mv = invariants(moved);
      CurveInvariants mn = invariants(res.model);
      Rational upow(1);
      for (int k = 0; k < 12; ++k) upow *= res.u;
      EXPECT_EQ(mn.disc * upow, mv.disc) << rc.label;
    }
  }
}

TEST(MinimalModel, Idempotent) {
  std::mt19937 rng(31337);
  std::uniform_int_distribution<long> coef(-30, 30);
  int checked = 0;
  while (checked < 40) {
    WeierstrassModel w =
        curve_z(coef(rng), coef(rng), coef(rng), coef(rng), coef(rng));
    if (detail::raw_invariants(w).disc == 0) continue;
    WeierstrassModel m1 = minimal_model(w);
    EXPECT_EQ(minimal_model(m1), m1);
    EXPECT_EQ(invariants(m1).j, invariants(w).j);
    ++checked;
  }
}

TEST(MinimalModel, SingularRejected) {
  EXPECT_THROW(minimal_model(curve_z(0, 0, 0, 0, 0)), SingularCurve);
}

TEST(ModelHeight, DefinitionExamples) {
  // y^2 = x^3 + 1: c4 = 0, c6 = -864, height (1/6) log 864.
  Real h1 = model_height(curve_z(0, 0, 0, 0, 1), 192);
  EXPECT_NEAR(h1.to_double(), std::log(864.0) / 6.0, 1e-12);
  // y^2 = x^3 + x: c4 = -48, c6 = 0, height (1/4) log 48.
  Real h2 = model_height(curve_z(0, 0, 0, 1, 0), 192);
  EXPECT_NEAR(h2.to_double(), std::log(48.0) / 4.0, 1e-12);
}

TEST(ModelHeight, NonnegativeOnCorpus) {
  for (const auto& rc : testref::kCurves) {
    Real h = model_height(ref_model(rc), 128);
    EXPECT_GE(h.to_double(), 0.0) << rc.label;
  }
}

TEST(ModelHeight, RejectsNonIntegralAndSingular) {
  EXPECT_THROW(model_height(curve("1/2", "0", "0", "0", "1")), NonIntegralModel);
  EXPECT_THROW(model_height(curve_z(0, 0, 0, 0, 0)), SingularCurve);
}

}  // namespace
}  // namespace effdio
