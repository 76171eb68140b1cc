// Tests for local reduction data and the global conductor, validated
// against a frozen 25-curve corpus with known Kodaira types, conductor
// exponents, component counts, and minimal discriminants.

#include <gtest/gtest.h>

#include <string>

#include "effdio/tate.hpp"
#include "reference_data.hpp"

namespace effdio {
namespace {

WeierstrassModel ref_model(const testref::RefCurve& rc) {
  return WeierstrassModel{parse_rational(rc.a[0]), parse_rational(rc.a[1]),
                          parse_rational(rc.a[2]), parse_rational(rc.a[3]),
                          parse_rational(rc.a[4])};
}

WeierstrassModel curve_z(long a1, long a2, long a3, long a4, long a6) {
  return WeierstrassModel{Rational(a1), Rational(a2), Rational(a3),
                          Rational(a4), Rational(a6)};
}

TEST(TateLocal, CorpusLocalDataMatches) {
  for (const auto& rc : testref::kCurves) {
    WeierstrassModel w = ref_model(rc);
    for (int i = 0; i < rc.n_locals; ++i) {
      const testref::RefLocal& ref = rc.locals[i];
      LocalReductionData got = tate_local(w, mpz_class(ref.p));
      EXPECT_EQ(got.p, mpz_class(ref.p)) << rc.label;
      EXPECT_EQ(got.v_delta_min, ref.vdelta) << rc.label << " p=" << ref.p;
      EXPECT_EQ(got.f, ref.f) << rc.label << " p=" << ref.p;
      EXPECT_EQ(got.components, ref.m) << rc.label << " p=" << ref.p;
      EXPECT_EQ(got.kodaira, std::string(ref.kodaira)) << rc.label << " p=" << ref.p;
      EXPECT_EQ(std::string(to_string(got.kind)), std::string(ref.kind))
          << rc.label << " p=" << ref.p;
    }
  }
}

TEST(TateLocal, SpecAnchors) {
  LocalReductionData a = tate_local(curve_z(0, -1, 1, -10, -20), mpz_class(11));
  EXPECT_EQ(a.kind, ReductionKind::multiplicative);
  EXPECT_EQ(a.f, 1);
  LocalReductionData b = tate_local(curve_z(0, 0, 1, -1, 0), mpz_class(37));
  EXPECT_EQ(b.kind, ReductionKind::multiplicative);
  EXPECT_EQ(b.f, 1);
  LocalReductionData c = tate_local(curve_z(0, 0, 0, 0, 1), mpz_class(5));
  EXPECT_EQ(c.kind, ReductionKind::good);
  EXPECT_EQ(c.f, 0);
  EXPECT_EQ(c.kodaira, "I0");
  EXPECT_EQ(c.v_delta_min, 0);
}

TEST(TateLocal, GoodPrimeAwayFromDiscriminant) {
  LocalReductionData d = tate_local(curve_z(0, -1, 1, 0, 0), mpz_class(7));
  EXPECT_EQ(d.kind, ReductionKind::good);
  EXPECT_EQ(d.f, 0);
  EXPECT_EQ(d.components, 1);
}

TEST(TateLocal, NonMinimalModelsRejected) {
  // u = 1/2 scaling of a minimal model: integral but reducible at 2.
  WeierstrassModel big2 = transform(curve_z(0, 0, 1, -1, 0), Rational(1, 2),
                                    Rational(0), Rational(0), Rational(0));
  EXPECT_TRUE(is_integral(big2));
  EXPECT_THROW(tate_local(big2, mpz_class(2)), NotMinimalAtP);
  // Same away from 2 and 3, where no Kraus condition can rescue the model.
  WeierstrassModel big5 = transform(curve_z(0, -1, 1, 0, 0), Rational(1, 5),
                                    Rational(0), Rational(0), Rational(0));
  EXPECT_THROW(tate_local(big5, mpz_class(5)), NotMinimalAtP);
  // The scaled model is still fine at primes where it stayed minimal.
  EXPECT_EQ(tate_local(big5, mpz_class(11)).f, 1);
}

TEST(TateLocal, InputValidation) {
  EXPECT_THROW(tate_local(WeierstrassModel{Rational(1, 2), Rational(0),
                                           Rational(0), Rational(0), Rational(1)},
                          mpz_class(2)),
               NonIntegralModel);
  EXPECT_THROW(tate_local(curve_z(0, 0, 1, -1, 0), mpz_class(6)), DomainError);
  EXPECT_THROW(tate_local(curve_z(0, 0, 0, 0, 0), mpz_class(2)), SingularCurve);
}

TEST(Conductor, CorpusGlobalDataMatches) {
  for (const auto& rc : testref::kCurves) {
    WeierstrassModel w = ref_model(rc);
    GlobalCurveData g = conductor(w);
    EXPECT_EQ(g.minimal, w) << rc.label;
    EXPECT_EQ(g.conductor, mpz_class(rc.conductor)) << rc.label;
    EXPECT_EQ(g.minimal_discriminant, mpz_class(rc.abs_disc_min)) << rc.label;
    ASSERT_EQ(static_cast<int>(g.locals.size()), rc.n_locals) << rc.label;
    for (int i = 0; i < rc.n_locals; ++i) {
      EXPECT_EQ(g.locals[i].p, mpz_class(rc.locals[i].p)) << rc.label;
    }
  }
}

TEST(Conductor, SpecAnchors) {
  EXPECT_EQ(conductor(curve_z(0, -1, 1, -10, -20)).conductor, mpz_class(11));
  EXPECT_EQ(conductor(curve_z(0, 0, 1, -1, 0)).conductor, mpz_class(37));
  EXPECT_EQ(conductor(curve_z(0, 0, 0, 0, 1)).conductor, mpz_class(36));
}

TEST(Conductor, ProductStructure) {
  for (const auto& rc : testref::kCurves) {
    GlobalCurveData g = conductor(ref_model(rc));
    mpz_class n(1), d(1);
    for (const auto& loc : g.locals) {
      mpz_class pf, pv;
      mpz_pow_ui(pf.get_mpz_t(), loc.p.get_mpz_t(),
                 static_cast<unsigned long>(loc.f));
      mpz_pow_ui(pv.get_mpz_t(), loc.p.get_mpz_t(),
                 static_cast<unsigned long>(loc.v_delta_min));
      n *= pf;
      d *= pv;
      // Ogg: f = v(disc) - m + 1 at every bad prime.
      EXPECT_EQ(loc.f, loc.v_delta_min - loc.components + 1) << rc.label;
    }
    EXPECT_EQ(n, g.conductor) << rc.label;
    EXPECT_EQ(d, g.minimal_discriminant) << rc.label;
  }
}

TEST(Conductor, ExponentCapsHold) {
  for (const auto& rc : testref::kCurves) {
    GlobalCurveData g = conductor(ref_model(rc));
    for (const auto& loc : g.locals) {
      int cap = loc.p == 2 ? 8 : (loc.p == 3 ? 5 : 2);
      EXPECT_LE(loc.f, cap) << rc.label << " p=" << loc.p.get_str();
      EXPECT_GE(loc.f, 1) << rc.label;
    }
  }
}

TEST(Conductor, InvariantUnderTransforms) {
  // N and minimal |disc| are isomorphism invariants.
  for (const auto& rc : {testref::kCurves[6], testref::kCurves[9],
                         testref::kCurves[19]}) {
    WeierstrassModel w = ref_model(rc);
    GlobalCurveData g0 = conductor(w);
    WeierstrassModel moved =
        transform(w, Rational(2, 3), Rational(1, 2), Rational(3), Rational(-1));
    GlobalCurveData g1 = conductor(moved);
    EXPECT_EQ(g0.conductor, g1.conductor) << rc.label;
    EXPECT_EQ(g0.minimal_discriminant, g1.minimal_discriminant) << rc.label;
    EXPECT_EQ(g0.minimal, g1.minimal) << rc.label;
  }
}

TEST(Conductor, ExtremeWildExponents) {
  // f = 8 at p = 2 (cap attained) and f = 5 at p = 3 (cap attained).
  GlobalCurveData a = conductor(curve_z(0, 0, 0, -2, 0));  // N = 256
  ASSERT_EQ(a.locals.size(), 1u);
  EXPECT_EQ(a.locals[0].f, 8);
  EXPECT_EQ(a.conductor, mpz_class(256));
  GlobalCurveData b = conductor(curve_z(0, 0, 0, 0, 3));  // y^2 = x^3 + 3
  bool saw3 = false;
  for (const auto& loc : b.locals) {
    if (loc.p == 3) {
      saw3 = true;
      EXPECT_LE(loc.f, 5);
    }
  }
  EXPECT_TRUE(saw3);
}

}  // namespace
}  // namespace effdio
