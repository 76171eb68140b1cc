// Local reduction data of elliptic curves over Q: Kodaira type, conductor
// exponent, and minimal-discriminant valuation at each prime, plus the
// global conductor assembled from them.
//
// At p in {2, 3} the full reduction-type case analysis runs on the integer
// model (brute-force singular point over F_p, explicit normalizing shifts,
// and the I_n* sub-loop); this is where the wild conductor contribution
// lives. At p >= 5 a valuation table on (c4, disc) decides the type. The
// conductor exponent comes from the component count via Ogg's formula
// f = v(disc) - m + 1.

#pragma once

#include <gmpxx.h>

#include <array>
#include <string>
#include <vector>

#include "effdio/errors.hpp"
#include "effdio/factor.hpp"
#include "effdio/weierstrass.hpp"

namespace effdio {

enum class ReductionKind { good, multiplicative, additive };

inline const char* to_string(ReductionKind k) {
  switch (k) {
    case ReductionKind::good: return "good";
    case ReductionKind::multiplicative: return "multiplicative";
    default: return "additive";
  }
}

struct LocalReductionData {
  mpz_class p;
  int f = 0;            // conductor exponent
  long v_delta_min = 0; // valuation of the minimal discriminant
  long components = 0;  // Kodaira-Neron component count m
  std::string kodaira;  // "I0", "I5", "II", ..., "I2*", "II*"
  ReductionKind kind = ReductionKind::good;
};

struct GlobalCurveData {
  WeierstrassModel minimal;          // canonical global minimal model
  mpz_class conductor = 1;           // N_E
  mpz_class minimal_discriminant = 1;  // |disc| of the minimal model
  std::vector<LocalReductionData> locals;  // bad primes, ascending
};

// v_p(n) with a large sentinel for n = 0 (used in valuation tables).
inline long valuation_z_or_max(const mpz_class& n, const mpz_class& p) {
  if (n == 0) return 1L << 30;
  return static_cast<long>(valuation_z(n, p));
}

namespace detail {

using IntModel = std::array<mpz_class, 5>;  // a1, a2, a3, a4, a6

inline mpz_class mod_nonneg(const mpz_class& a, const mpz_class& m) {
  mpz_class r = a % m;
  if (r < 0) r += m;
  return r;
}

// Integer-coefficient coordinate change with u = 1 (shifts only).
inline IntModel int_shift(const IntModel& a, const mpz_class& r,
                          const mpz_class& s, const mpz_class& t) {
  const mpz_class &a1 = a[0], &a2 = a[1], &a3 = a[2], &a4 = a[3], &a6 = a[4];
  IntModel out;
  out[0] = a1 + 2 * s;
  out[1] = a2 - s * a1 + 3 * r - s * s;
  out[2] = a3 + r * a1 + 2 * t;
  out[3] = a4 - s * a3 + 2 * r * a2 - (t + r * s) * a1 + 3 * r * r - 2 * s * t;
  out[4] = a6 + r * a4 + r * r * a2 + r * r * r - t * a3 - t * t - r * t * a1;
  return out;
}

inline mpz_class int_disc(const IntModel& a) {
  const mpz_class &a1 = a[0], &a2 = a[1], &a3 = a[2], &a4 = a[3], &a6 = a[4];
  mpz_class b2 = a1 * a1 + 4 * a2;
  mpz_class b4 = 2 * a4 + a1 * a3;
  mpz_class b6 = a3 * a3 + 4 * a6;
  mpz_class b8 = a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4;
  return -b2 * b2 * b8 - 8 * b4 * b4 * b4 - 27 * b6 * b6 + 9 * b2 * b4 * b6;
}

// a^(-1) mod m for small m (m is p or p^2 with p in {2,3}; gcd(a,m) = 1).
inline mpz_class inv_mod(const mpz_class& a, const mpz_class& m) {
  mpz_class r;
  if (mpz_invert(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t()) == 0) {
    throw Error("internal: non-invertible residue in local analysis");
  }
  return r;
}

// p^e as mpz.
inline mpz_class zpow(const mpz_class& p, unsigned long e) {
  mpz_class r;
  mpz_pow_ui(r.get_mpz_t(), p.get_mpz_t(), e);
  return r;
}

// Multiplicity of r as a root of the monic cubic T^3 + c2 T^2 + c1 T + c0
// over F_p, by repeated synthetic division (formal derivatives are not
// reliable in characteristic 2 or 3).
inline int cubic_root_multiplicity(const mpz_class& c2, const mpz_class& c1,
                                   const mpz_class& c0, const mpz_class& r,
                                   const mpz_class& p) {
  std::vector<mpz_class> coeffs = {1, c2, c1, c0};
  int m = 0;
  while (true) {
    std::vector<mpz_class> quot;
    mpz_class rem(0);
    for (const mpz_class& c : coeffs) {
      rem = mod_nonneg(rem * r + c, p);
      quot.push_back(rem);
    }
    if (quot.back() != 0) return m;
    quot.pop_back();
    ++m;
    coeffs = quot;
    if (coeffs.empty()) return m;
  }
}

// Full reduction-type analysis at p (used for p in {2, 3}; correct for any
// p but quadratic in p due to the singular-point search). Assumes the model
// is integral and minimal at p with v_p(disc) = n >= 1.
inline LocalReductionData tate_small_prime(IntModel a, const mpz_class& p, long n) {
  LocalReductionData out;
  out.p = p;
  out.v_delta_min = n;

  // Explicit mpz_class returns: the gmpxx expression templates reference
  // temporaries and must not escape the lambda bodies.
  auto F = [&](const mpz_class& x, const mpz_class& y) -> mpz_class {
    return y * y + a[0] * x * y + a[2] * y - x * x * x - a[1] * x * x -
           a[3] * x - a[4];
  };
  auto Fx = [&](const mpz_class& x, const mpz_class& y) -> mpz_class {
    return a[0] * y - 3 * x * x - 2 * a[1] * x - a[3];
  };
  auto Fy = [&](const mpz_class& x, const mpz_class& y) -> mpz_class {
    return 2 * y + a[0] * x + a[2];
  };

  // Translate the singular point of the reduction to the origin.
  bool found = false;
  for (mpz_class x(0); x < p && !found; ++x) {
    for (mpz_class y(0); y < p && !found; ++y) {
      if (mod_nonneg(F(x, y), p) == 0 && mod_nonneg(Fx(x, y), p) == 0 &&
          mod_nonneg(Fy(x, y), p) == 0) {
        a = int_shift(a, x, 0, y);
        found = true;
      }
    }
  }
  if (!found) throw Error("internal: no singular point despite p | disc");

  mpz_class b2 = a[0] * a[0] + 4 * a[1];
  mpz_class b6 = a[2] * a[2] + 4 * a[4];
  mpz_class b8 =
      a[0] * a[0] * a[4] + 4 * a[1] * a[4] - a[0] * a[2] * a[3] +
      a[1] * a[2] * a[2] - a[3] * a[3];

  if (mod_nonneg(b2, p) != 0) {
    out.kodaira = "I" + std::to_string(n);
    out.components = n;
    out.f = 1;
    out.kind = ReductionKind::multiplicative;
    return out;
  }
  out.kind = ReductionKind::additive;

  if (valuation_z_or_max(a[4], p) < 2) {
    out.kodaira = "II";
    out.components = 1;
    out.f = static_cast<int>(n);
    return out;
  }
  if (valuation_z_or_max(b8, p) < 3) {
    out.kodaira = "III";
    out.components = 2;
    out.f = static_cast<int>(n) - 1;
    return out;
  }
  if (valuation_z_or_max(b6, p) < 3) {
    out.kodaira = "IV";
    out.components = 3;
    out.f = static_cast<int>(n) - 2;
    return out;
  }

  // Normalize so that p | a1, a2; p^2 | a3, a4; p^3 | a6.
  mpz_class p2 = p * p;
  if (p == 2) {
    mpz_class s = mod_nonneg(a[1], 2);
    mpz_class t(0);
    if (mod_nonneg(a[4], 8) != 0) t = 2 * mod_nonneg(a[4] / 4, 2);
    a = int_shift(a, 0, s, t);
  } else {
    mpz_class s = mod_nonneg(-a[0] * inv_mod(2, p), p);
    mpz_class t = mod_nonneg(-a[2] * inv_mod(2, p2), p2);
    a = int_shift(a, 0, s, t);
  }
  if (valuation_z_or_max(a[0], p) < 1 || valuation_z_or_max(a[1], p) < 1 ||
      valuation_z_or_max(a[2], p) < 2 || valuation_z_or_max(a[3], p) < 2 ||
      valuation_z_or_max(a[4], p) < 3) {
    throw Error("internal: step-6 normalization failed");
  }

  // P(T) = T^3 + (a2/p) T^2 + (a4/p^2) T + (a6/p^3) over F_p.
  mpz_class c2 = mod_nonneg(a[1] / p, p);
  mpz_class c1 = mod_nonneg(a[3] / p2, p);
  mpz_class c0 = mod_nonneg(a[4] / (p2 * p), p);
  int maxmult = 0;
  mpz_class which_root(-1);
  for (mpz_class r(0); r < p; ++r) {
    int m = cubic_root_multiplicity(c2, c1, c0, r, p);
    if (m > maxmult) {
      maxmult = m;
      which_root = r;
    }
  }

  if (maxmult <= 1) {
    // Distinct roots (some possibly outside F_p): type I0*.
    out.kodaira = "I0*";
    out.components = 5;
    out.f = static_cast<int>(n) - 4;
    return out;
  }

  if (maxmult == 2) {
    // Double root: shift to 0, then walk the I_n* chain.
    a = int_shift(a, p * which_root, 0, 0);
    long nstar = 0;
    unsigned long k = 1;
    while (true) {
      // Odd step (n* = 2k-1): Y^2 + (a3/p^(k+1)) Y - a6/p^(2k+2) over F_p.
      mpz_class g1 = mod_nonneg(a[2] / zpow(p, k + 1), p);
      mpz_class g0 = mod_nonneg(a[4] / zpow(p, 2 * k + 2), p);
      if (mod_nonneg(g1 * g1 + 4 * g0, p) != 0) {
        nstar = 2 * static_cast<long>(k) - 1;
        break;
      }
      mpz_class y0 = (p == 2) ? g0 : mod_nonneg(g1 * inv_mod(2, p) * (p - 1), p);
      a = int_shift(a, 0, 0, y0 * zpow(p, k + 1));
      // Even step (n* = 2k): (a2/p) X^2 + (a4/p^(k+2)) X + a6/p^(2k+3).
      mpz_class h2 = mod_nonneg(a[1] / p, p);
      mpz_class h1 = mod_nonneg(a[3] / zpow(p, k + 2), p);
      mpz_class h0 = mod_nonneg(a[4] / zpow(p, 2 * k + 3), p);
      if (mod_nonneg(h1 * h1 - 4 * h2 * h0, p) != 0) {
        nstar = 2 * static_cast<long>(k);
        break;
      }
      mpz_class x0 = (p == 2) ? mod_nonneg(h0 * inv_mod(h2, p), p)
                              : mod_nonneg(-h1 * inv_mod(2 * h2, p), p);
      a = int_shift(a, x0 * zpow(p, k + 1), 0, 0);
      ++k;
    }
    out.kodaira = "I" + std::to_string(nstar) + "*";
    out.components = 5 + nstar;
    out.f = static_cast<int>(n - 4 - nstar);
    return out;
  }

  // Triple root: shift to 0, then split by the quadratic in Y.
  a = int_shift(a, p * which_root, 0, 0);
  mpz_class g1 = mod_nonneg(a[2] / p2, p);
  mpz_class g0 = mod_nonneg(a[4] / (p2 * p2), p);
  if (mod_nonneg(g1 * g1 + 4 * g0, p) != 0) {
    out.kodaira = "IV*";
    out.components = 7;
    out.f = static_cast<int>(n) - 6;
    return out;
  }
  mpz_class y0 = (p == 2) ? g0 : mod_nonneg(g1 * inv_mod(2, p) * (p - 1), p);
  a = int_shift(a, 0, 0, y0 * p2);
  if (valuation_z_or_max(a[3], p) == 3) {
    out.kodaira = "III*";
    out.components = 8;
    out.f = static_cast<int>(n) - 7;
    return out;
  }
  if (valuation_z_or_max(a[4], p) == 5) {
    out.kodaira = "II*";
    out.components = 9;
    out.f = static_cast<int>(n) - 8;
    return out;
  }
  throw NotMinimalAtP("model is not minimal at " + p.get_str());
}

}  // namespace detail

// Local reduction data at p for a model that is integral and minimal at p.
// Throws NotMinimalAtP when the model admits a further p-scaling, and
// NonIntegralModel / SingularCurve on malformed input.
inline LocalReductionData tate_local(const WeierstrassModel& w, const mpz_class& p) {
  if (!is_integral(w)) throw NonIntegralModel("tate_local needs an integral model");
  if (!is_prime(p)) throw DomainError("tate_local at composite p");
  CurveInvariants inv = invariants(w);  // SingularCurve if disc = 0
  mpz_class c4 = inv.c4.get_num();
  mpz_class c6 = inv.c6.get_num();
  mpz_class disc = inv.disc.get_num();

  // Minimality at p via the Kraus-Laska-Connell criterion: the model can be
  // scaled down by u = p^dd iff p^{4dd} | c4, p^{6dd} | c6, p^{12dd} | disc
  // and (at p = 2, 3) the scaled pair still satisfies the Kraus conditions.
  unsigned long dmax = valuation_z(disc, p) / 12;
  if (c4 != 0) dmax = std::min(dmax, valuation_z(c4, p) / 4);
  if (c6 != 0) dmax = std::min(dmax, valuation_z(c6, p) / 6);
  for (unsigned long dd = 1; dd <= dmax; ++dd) {
    if (p != 2 && p != 3) throw NotMinimalAtP("model is not minimal at " + p.get_str());
    mpz_class p4 = detail::zpow(p, 4 * dd), p6 = detail::zpow(p, 6 * dd);
    if (detail::kraus_ok(c4 / p4, c6 / p6, p)) {
      throw NotMinimalAtP("model is not minimal at " + p.get_str());
    }
  }

  long n = static_cast<long>(valuation_z(disc, p));
  if (n == 0) {
    LocalReductionData out;
    out.p = p;
    out.kodaira = "I0";
    out.components = 1;
    out.f = 0;
    out.kind = ReductionKind::good;
    return out;
  }

  if (p == 2 || p == 3) {
    detail::IntModel a = {w.a1.get_num(), w.a2.get_num(), w.a3.get_num(),
                          w.a4.get_num(), w.a6.get_num()};
    return detail::tate_small_prime(a, p, n);
  }

  // p >= 5: tame case, decided by (v(c4), v(disc)).
  long vc4 = valuation_z_or_max(c4, p);
  LocalReductionData out;
  out.p = p;
  out.v_delta_min = n;
  if (vc4 == 0) {
    out.kodaira = "I" + std::to_string(n);
    out.components = n;
    out.f = 1;
    out.kind = ReductionKind::multiplicative;
    return out;
  }
  out.kind = ReductionKind::additive;
  out.f = 2;
  if (n == 2) {
    out.kodaira = "II";
    out.components = 1;
  } else if (n == 3) {
    out.kodaira = "III";
    out.components = 2;
  } else if (n == 4) {
    out.kodaira = "IV";
    out.components = 3;
  } else if (n == 6) {
    out.kodaira = "I0*";
    out.components = 5;
  } else if (n >= 7 && vc4 == 2) {
    out.kodaira = "I" + std::to_string(n - 6) + "*";
    out.components = n - 1;
  } else if (n == 8) {
    out.kodaira = "IV*";
    out.components = 7;
  } else if (n == 9) {
    out.kodaira = "III*";
    out.components = 8;
  } else if (n == 10) {
    out.kodaira = "II*";
    out.components = 9;
  } else {
    throw NotMinimalAtP("model is not minimal at " + p.get_str());
  }
  return out;
}

// Global conductor, minimal discriminant, and all local data of any
// rational Weierstrass model (non-integral input is cleared first).
inline GlobalCurveData conductor(const WeierstrassModel& w,
                                 const FactorOptions& opts = FactorOptions{}) {
  GlobalCurveData out;
  out.minimal = minimal_model(w, opts);
  CurveInvariants inv = invariants(out.minimal);
  out.minimal_discriminant = ::abs(inv.disc.get_num());
  for (const auto& [p, e] : factorize(out.minimal_discriminant, opts).factors) {
    LocalReductionData local = tate_local(out.minimal, p);
    // Consistency guards: Ogg's formula and the conductor-exponent caps.
    if (local.f != static_cast<int>(local.v_delta_min - local.components + 1)) {
      throw Error("internal: Ogg consistency failure at p = " + p.get_str());
    }
    int cap = p == 2 ? 8 : (p == 3 ? 5 : 2);
    if (local.f > cap || local.f < 1) {
      throw Error("internal: conductor exponent out of range at p = " + p.get_str());
    }
    mpz_class pf;
    mpz_pow_ui(pf.get_mpz_t(), p.get_mpz_t(), static_cast<unsigned long>(local.f));
    out.conductor *= pf;
    out.locals.push_back(std::move(local));
  }
  return out;
}

}  // namespace effdio
