// Weierstrass models of elliptic curves over Q: b/c-invariants, coordinate
// changes, integral clearing, global minimal models (Laska-Kraus-Connell),
// and the logarithmic model height (1/12) h(c4^3, c6^2).
//
// All invariant arithmetic is exact rational/integer arithmetic; the model
// height is the only real-valued output.

#pragma once

#include <gmpxx.h>

#include <array>
#include <utility>
#include <vector>

#include "effdio/errors.hpp"
#include "effdio/factor.hpp"
#include "effdio/rational.hpp"
#include "effdio/real.hpp"

namespace effdio {

struct WeierstrassModel {
  Rational a1, a2, a3, a4, a6;

  bool operator==(const WeierstrassModel& o) const {
    return a1 == o.a1 && a2 == o.a2 && a3 == o.a3 && a4 == o.a4 && a6 == o.a6;
  }
};

struct CurveInvariants {
  Rational b2, b4, b6, b8, c4, c6, disc, j;
};

namespace detail {

// b- and c-invariants plus discriminant; no singularity check.
inline CurveInvariants raw_invariants(const WeierstrassModel& w) {
  CurveInvariants inv;
  const Rational &a1 = w.a1, &a2 = w.a2, &a3 = w.a3, &a4 = w.a4, &a6 = w.a6;
  inv.b2 = a1 * a1 + 4 * a2;
  inv.b4 = 2 * a4 + a1 * a3;
  inv.b6 = a3 * a3 + 4 * a6;
  inv.b8 = a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4;
  inv.c4 = inv.b2 * inv.b2 - 24 * inv.b4;
  inv.c6 = -inv.b2 * inv.b2 * inv.b2 + 36 * inv.b2 * inv.b4 - 216 * inv.b6;
  inv.disc = -inv.b2 * inv.b2 * inv.b8 - 8 * inv.b4 * inv.b4 * inv.b4 -
             27 * inv.b6 * inv.b6 + 9 * inv.b2 * inv.b4 * inv.b6;
  return inv;
}

}  // namespace detail

// All eight invariants of a nonsingular model. Throws SingularCurve when the
// discriminant vanishes.
inline CurveInvariants invariants(const WeierstrassModel& w) {
  CurveInvariants inv = detail::raw_invariants(w);
  if (inv.disc == 0) throw SingularCurve("discriminant is zero");
  inv.j = inv.c4 * inv.c4 * inv.c4 / inv.disc;
  return inv;
}

// Change of Weierstrass coordinates x = u^2 x' + r, y = u^3 y' + s u^2 x' + t.
inline WeierstrassModel transform(const WeierstrassModel& w, const Rational& u,
                                  const Rational& r, const Rational& s,
                                  const Rational& t) {
  if (u == 0) throw DomainError("transform with u = 0");
  Rational u2 = u * u, u3 = u2 * u;
  WeierstrassModel out;
  out.a1 = (w.a1 + 2 * s) / u;
  out.a2 = (w.a2 - s * w.a1 + 3 * r - s * s) / u2;
  out.a3 = (w.a3 + r * w.a1 + 2 * t) / u3;
  out.a4 = (w.a4 - s * w.a3 + 2 * r * w.a2 - (t + r * s) * w.a1 + 3 * r * r -
            2 * s * t) /
           (u2 * u2);
  out.a6 = (w.a6 + r * w.a4 + r * r * w.a2 + r * r * r - t * w.a3 - t * t -
            r * t * w.a1) /
           (u3 * u3);
  return out;
}

inline bool is_integral(const WeierstrassModel& w) {
  return w.a1.get_den() == 1 && w.a2.get_den() == 1 && w.a3.get_den() == 1 &&
         w.a4.get_den() == 1 && w.a6.get_den() == 1;
}

// Clears denominators by an admissible u-scaling (u = 1/m with the smallest
// m making every coefficient integral). Returns the model and the u used.
inline std::pair<WeierstrassModel, Rational> integral_model(
    const WeierstrassModel& w) {
  mpz_class den_lcm(1);
  for (const Rational* a : {&w.a1, &w.a2, &w.a3, &w.a4, &w.a6}) {
    mpz_lcm(den_lcm.get_mpz_t(), den_lcm.get_mpz_t(), a->get_den().get_mpz_t());
  }
  if (den_lcm == 1) return {w, Rational(1)};
  mpz_class m(1);
  const std::array<std::pair<const Rational*, long>, 5> weighted = {
      {{&w.a1, 1}, {&w.a2, 2}, {&w.a3, 3}, {&w.a4, 4}, {&w.a6, 6}}};
  for (const auto& [p, e] : factorize(den_lcm).factors) {
    unsigned long need = 0;
    for (const auto& [a, i] : weighted) {
      if (*a == 0) continue;
      unsigned long v = valuation_z(a->get_den(), p);
      if (v == 0) continue;
      unsigned long li = static_cast<unsigned long>(i);
      unsigned long lp = (v + li - 1) / li;  // ceil(v / i)
      if (lp > need) need = lp;
    }
    mpz_class pe;
    mpz_pow_ui(pe.get_mpz_t(), p.get_mpz_t(), need);
    m *= pe;
  }
  Rational u = make_rational(1, m);
  return {transform(w, u, 0, 0, 0), u};
}

namespace detail {

// Kraus criterion: (c4, c6) arise from an integral model at p.
// At p = 3: v3(c6) != 2. At p = 2: c6 = -1 (mod 4), or c4 = 0 (mod 16) and
// c6 in {0, 8} (mod 32). No condition elsewhere.
inline bool kraus_ok(const mpz_class& c4, const mpz_class& c6, const mpz_class& p) {
  if (p == 3) {
    return c6 == 0 || valuation_z(c6, 3) != 2;
  }
  if (p == 2) {
    mpz_class r4 = c6 % 4;
    if (r4 < 0) r4 += 4;
    if (r4 == 3) return true;
    mpz_class r16 = c4 % 16;
    if (r16 < 0) r16 += 16;
    mpz_class r32 = c6 % 32;
    if (r32 < 0) r32 += 32;
    return r16 == 0 && (r32 == 0 || r32 == 8);
  }
  return true;
}

inline mpz_class exact_div(const mpz_class& a, const mpz_class& b) {
  mpz_class q, r;
  mpz_tdiv_qr(q.get_mpz_t(), r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  if (r != 0) throw Error("internal: inexact division in model recovery");
  return q;
}

// Rebuilds the canonical reduced integral model from minimal (c4, c6):
// a1, a3 in {0,1}, a2 in {-1,0,1}.
inline WeierstrassModel model_from_c_invariants(const mpz_class& c4,
                                                const mpz_class& c6) {
  // b2 is the residue of -c6 mod 12 in (-6, 6].
  mpz_class b2 = (-c6) % 12;
  if (b2 < 0) b2 += 12;
  if (b2 > 6) b2 -= 12;
  mpz_class b4 = exact_div(b2 * b2 - c4, 24);
  mpz_class b6 = exact_div(-b2 * b2 * b2 + 36 * b2 * b4 - c6, 216);
  mpz_class a1 = ((b2 % 2) + 2) % 2;
  mpz_class a2 = exact_div(b2 - a1, 4);
  mpz_class a3 = ((b6 % 2) + 2) % 2;
  mpz_class a4 = exact_div(b4 - a1 * a3, 2);
  mpz_class a6 = exact_div(b6 - a3, 4);
  WeierstrassModel out{Rational(a1), Rational(a2), Rational(a3), Rational(a4),
                       Rational(a6)};
  CurveInvariants check = raw_invariants(out);
  if (check.c4 != c4 || check.c6 != c6) {
    throw Error("internal: minimal-model recovery failed");
  }
  return out;
}

}  // namespace detail

struct MinimalModelResult {
  WeierstrassModel model;  // globally minimal, canonically reduced
  Rational u;              // transform scale from the input to the output
};

// Global minimal model over Q by Laska-Kraus-Connell: clear denominators,
// then divide (c4, c6, disc) by the largest (p^4, p^6, p^12) powers allowed
// by the Kraus criterion, and rebuild the reduced model.
inline MinimalModelResult minimal_model_with_scale(
    const WeierstrassModel& w, const FactorOptions& opts = FactorOptions{}) {
  CurveInvariants pre = detail::raw_invariants(w);
  if (pre.disc == 0) throw SingularCurve("discriminant is zero");
  auto [wi, u0] = integral_model(w);
  CurveInvariants inv = detail::raw_invariants(wi);
  mpz_class c4 = inv.c4.get_num();
  mpz_class c6 = inv.c6.get_num();
  mpz_class disc = inv.disc.get_num();
  // Candidate primes must divide c4 (unless 0), c6 (unless 0), and disc.
  mpz_class g;
  mpz_gcd(g.get_mpz_t(), c4.get_mpz_t(), c6.get_mpz_t());
  mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), disc.get_mpz_t());
  mpz_class u1(1);
  if (g > 1) {
    for (const auto& [p, e] : factorize(g, opts).factors) {
      unsigned long d = valuation_z(disc, p) / 12;
      if (c4 != 0) d = std::min(d, valuation_z(c4, p) / 4);
      if (c6 != 0) d = std::min(d, valuation_z(c6, p) / 6);
      if (p == 2 || p == 3) {
        while (d > 0) {
          mpz_class p4, p6;
          mpz_pow_ui(p4.get_mpz_t(), p.get_mpz_t(), 4 * d);
          mpz_pow_ui(p6.get_mpz_t(), p.get_mpz_t(), 6 * d);
          if (detail::kraus_ok(c4 / p4, c6 / p6, p)) break;
          --d;
        }
      }
      if (d > 0) {
        mpz_class pd;
        mpz_pow_ui(pd.get_mpz_t(), p.get_mpz_t(), d);
        u1 *= pd;
      }
    }
  }
  mpz_class u1_4 = u1 * u1 * u1 * u1;
  mpz_class u1_6 = u1_4 * u1 * u1;
  MinimalModelResult out;
  out.model = detail::model_from_c_invariants(detail::exact_div(c4, u1_4),
                                              detail::exact_div(c6, u1_6));
  out.u = u0 * Rational(u1);
  return out;
}

inline WeierstrassModel minimal_model(const WeierstrassModel& w,
                                      const FactorOptions& opts = FactorOptions{}) {
  return minimal_model_with_scale(w, opts).model;
}

// Logarithmic height of an integral Weierstrass model:
// (1/12) * h(c4^3, c6^2) with the affine vector height.
inline Real model_height(const WeierstrassModel& w, mpfr_prec_t prec = 128,
                         mpfr_rnd_t rnd = MPFR_RNDN) {
  if (!is_integral(w)) throw NonIntegralModel("model height needs integral model");
  CurveInvariants inv = invariants(w);  // throws SingularCurve if needed
  Rational c4cubed = inv.c4 * inv.c4 * inv.c4;
  Rational c6squared = inv.c6 * inv.c6;
  return div_si(weil_height_vector({c4cubed, c6squared}, prec, rnd), 12, rnd);
}

}  // namespace effdio
