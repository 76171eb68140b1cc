// Analytic invariants of elliptic curves over Q: the normalized period
// ratio tau in the fundamental domain, the modular discriminant Delta(tau),
// and the relative and stable Faltings heights.
//
// tau is computed from the roots of the b-invariant cubic by the complex
// arithmetic-geometric mean, always taking the optimal AGM branch
// (|a - b| <= |a + b|). Correctness is certified a posteriori: the computed
// tau is accepted only when the q-expansion value j(tau) reproduces the
// exact rational j-invariant, with the first-order error estimate
// 4 |j(tau) - j| / |j'(tau)| below 2^(-precision_bits/2). Root orderings
// are retried and the working precision doubled once before PrecisionLoss
// is raised; no uncertified digits are ever returned.
//
// Heights use the identity
//   log Delta_E = 12 h(E) + log |(2 pi)^12 Delta(tau) im(tau)^6|
// for the relative height, and the decomposition Delta_E = Delta_1 Delta_2
// with Delta_2 = den(j) for the stable one: over Q the stabilizing base
// change removes exactly the unstable local contributions, and a prime is
// unstable precisely where v_p(Delta_E) exceeds max(0, -v_p(j)), so
//   h_F(E) = h(E) - (1/12) (log Delta_E - log Delta_2),
// the subtracted term being the exact logarithm of the positive integer
// Delta_E / den(j).

#pragma once

#include <gmpxx.h>

#include <array>
#include <complex>
#include <string>
#include <vector>

#include "effdio/complex.hpp"
#include "effdio/errors.hpp"
#include "effdio/real.hpp"
#include "effdio/weierstrass.hpp"

namespace effdio {

struct LatticeTau {
  Complex tau;                  // fundamental-domain representative
  long precision_bits = 0;      // certification level requested
  Real error_bound;             // certified upper bound on |tau - tau_true|
};

struct HeightReport {
  Real h_relative;
  Real h_stable;
  LatticeTau tau;
  mpz_class delta_E = 1;        // |minimal discriminant|
  Real unstable_correction;     // log(Delta_E / den(j)) >= 0
  Real error_bound;             // certified error on both heights
};

namespace detail {

inline Complex complex_zero(mpfr_prec_t prec) { return Complex(Real(prec), Real(prec)); }

inline Complex half(const Complex& z) {
  return Complex(div_si(z.re, 2, MPFR_RNDN), div_si(z.im, 2, MPFR_RNDN));
}

inline Complex reciprocal(const Complex& z) {
  Real n = norm2(z);
  return Complex(z.re / n, -(z.im / n));
}

// sigma_k(n) for n = 1..N (divisor-power sums), exact.
inline std::vector<mpz_class> divisor_power_sums(int N, unsigned long k) {
  std::vector<mpz_class> sig(static_cast<size_t>(N) + 1, mpz_class(0));
  for (int d = 1; d <= N; ++d) {
    mpz_class dk;
    mpz_ui_pow_ui(dk.get_mpz_t(), static_cast<unsigned long>(d), k);
    for (int m = d; m <= N; m += d) sig[static_cast<size_t>(m)] += dk;
  }
  return sig;
}

// Series length giving a comfortably sub-2^(-bits) truncation everywhere in
// the fundamental domain, where |q| <= exp(-pi sqrt(3)) gains 7.8 bits/term.
inline int series_terms(mpfr_prec_t bits) {
  return static_cast<int>(static_cast<double>(bits) / 7.8) + 16;
}

// q = exp(2 pi i tau), computed from real exp/cos/sin.
inline Complex q_from_tau(const Complex& tau, mpfr_prec_t wp) {
  Real two_pi = mul_si(Real::pi(wp, MPFR_RNDN), 2, MPFR_RNDN);
  Real radius = exp(-(two_pi * tau.im), MPFR_RNDN);
  Real angle = two_pi * tau.re;
  return Complex(radius * cos(angle, MPFR_RNDN), radius * sin(angle, MPFR_RNDN));
}

struct ModularSeries {
  Complex e4, e6, delta;  // E4(q), E6(q), Delta(tau)
};

// E4, E6 by sigma-series and Delta by the 24th-power q-product, all at the
// working precision of q.
inline ModularSeries modular_series(const Complex& q, mpfr_prec_t wp) {
  int N = series_terms(wp);
  std::vector<mpz_class> s3 = divisor_power_sums(N, 3);
  std::vector<mpz_class> s5 = divisor_power_sums(N, 5);
  Complex e4 = Complex(Real::of(1, wp), Real(wp));
  Complex e6 = e4;
  Complex prod = e4;
  Complex one = e4;
  Complex qp = q;
  for (int n = 1; n <= N; ++n) {
    Real c3 = Real::of(mpz_class(240 * s3[static_cast<size_t>(n)]), wp, MPFR_RNDN);
    Real c5 = Real::of(mpz_class(504 * s5[static_cast<size_t>(n)]), wp, MPFR_RNDN);
    e4 = e4 + c3 * qp;
    e6 = e6 - c5 * qp;
    prod = prod * (one - qp);
    qp = qp * q;
  }
  Complex p2 = prod * prod;          // prod^2
  Complex p4 = p2 * p2;              // prod^4
  Complex p8 = p4 * p4;              // prod^8
  Complex p24 = p8 * p8 * p8;        // prod^24
  return ModularSeries{e4, e6, q * p24};
}

// log |Delta(tau)| = -2 pi im(tau) + 24 sum log |1 - q^n|, real arithmetic
// except for the powers of q.
inline Real log_abs_delta(const Complex& tau, mpfr_prec_t wp) {
  Complex q = q_from_tau(tau, wp);
  int N = series_terms(wp);
  Real acc(wp);
  Complex one = Complex(Real::of(1, wp), Real(wp));
  Complex qp = q;
  for (int n = 1; n <= N; ++n) {
    acc = acc + log(abs(one - qp), MPFR_RNDN);
    qp = qp * q;
  }
  Real two_pi = mul_si(Real::pi(wp, MPFR_RNDN), 2, MPFR_RNDN);
  return -(two_pi * tau.im) + mul_si(acc, 24, MPFR_RNDN);
}

// Optimal-branch complex AGM: at every step the sign of the geometric mean
// is chosen so that |a - b| <= |a + b|.
inline Complex complex_agm(Complex a, Complex b, mpfr_prec_t wp) {
  Real eps = Real::pow2(-static_cast<long>(wp) + 6, wp);
  for (int iter = 0; iter < 4 * 64 && !a.is_zero(); ++iter) {
    if (abs(a - b) <= eps * abs(a)) break;
    Complex m = half(a + b);
    Complex g = sqrt(a * b);
    if (abs(m - g) > abs(m + g)) g = -g;
    a = m;
    b = g;
  }
  return a;
}

// Roots of 4 x^3 + b2 x^2 + 2 b4 x + b6 at full precision: double-precision
// Cardano seeds on an exactly 2^k-rescaled cubic, then Newton polishing on
// the exact rational coefficients.
inline std::array<Complex, 3> cubic_roots(const Rational& b2, const Rational& b4,
                                          const Rational& b6, mpfr_prec_t wp) {
  // Power-of-two scale so the rescaled roots are O(1).
  auto mag2 = [](const Rational& r) -> long {
    if (r == 0) return -1;
    double d;
    long e;
    d = mpfr_get_d_2exp(&e, Real::of(r, 64, MPFR_RNDN).raw(), MPFR_RNDN);
    (void)d;
    return e;
  };
  long k = 0;
  k = std::max(k, mag2(b2));
  k = std::max(k, (mag2(b4) + 1) / 2);
  k = std::max(k, mag2(b6) / 3);
  Rational two_k(mpz_class(1) << static_cast<unsigned long>(k));
  // Monic rescaled cubic y^3 + A y^2 + B y + C, y = x / 2^k.
  Rational A = b2 / (4 * two_k);
  Rational B = 2 * b4 / (4 * two_k * two_k);
  Rational C = b6 / (4 * two_k * two_k * two_k);
  using CD = std::complex<double>;
  CD a(A.get_d()), b(B.get_d()), c(C.get_d());
  CD p = b - a * a / 3.0;
  CD q = 2.0 * a * a * a / 27.0 - a * b / 3.0 + c;
  CD s = std::sqrt(q * q / 4.0 + p * p * p / 27.0);
  CD u = std::pow(-q / 2.0 + s, 1.0 / 3.0);
  if (std::abs(u) < 1e-30) u = std::pow(-q / 2.0 - s, 1.0 / 3.0);
  std::array<CD, 3> seeds;
  if (std::abs(u) < 1e-30) {
    seeds = {CD(0), CD(0), CD(0)};
  } else {
    CD omega(-0.5, 0.8660254037844386);
    CD uk = u;
    for (int i = 0; i < 3; ++i) {
      seeds[static_cast<size_t>(i)] = uk - p / (3.0 * uk);
      uk *= omega;
    }
  }
  // Newton iteration on the exact monic cubic at working precision.
  Real rA = Real::of(A, wp, MPFR_RNDN), rB = Real::of(B, wp, MPFR_RNDN),
       rC = Real::of(C, wp, MPFR_RNDN);
  Real three = Real::of(3, wp), two = Real::of(2, wp);
  auto f = [&](const Complex& z) -> Complex {
    return ((z + Complex(rA, Real(wp))) * z + Complex(rB, Real(wp))) * z +
           Complex(rC, Real(wp));
  };
  auto fp = [&](const Complex& z) -> Complex {
    return (three * z + two * Complex(rA, Real(wp))) * z + Complex(rB, Real(wp));
  };
  std::array<Complex, 3> roots{complex_zero(wp), complex_zero(wp), complex_zero(wp)};
  Real step_eps = Real::pow2(-static_cast<long>(wp) + 8, wp);
  for (int i = 0; i < 3; ++i) {
    Complex z(Real::of_double(seeds[static_cast<size_t>(i)].real(), wp),
              Real::of_double(seeds[static_cast<size_t>(i)].imag(), wp));
    for (int it = 0; it < 200; ++it) {
      Complex d = fp(z);
      if (d.is_zero()) break;
      Complex step = f(z) / d;
      z = z - step;
      if (abs(step) <= step_eps * (Real::of(1, wp) + abs(z))) break;
    }
    roots[static_cast<size_t>(i)] = z;
  }
  // If two Newton runs collapsed into one root, recover the missing root
  // from the exact root sum -A.
  Real sep = Real::pow2(-30, wp);
  for (int i = 0; i < 3; ++i) {
    int j = (i + 1) % 3, l = (i + 2) % 3;
    const Complex& zi = roots[static_cast<size_t>(i)];
    const Complex& zj = roots[static_cast<size_t>(j)];
    if (abs(zi - zj) < sep * (Real::of(1, wp) + abs(zi))) {
      roots[static_cast<size_t>(j)] =
          -(Complex(rA, Real(wp)) + zi + roots[static_cast<size_t>(l)]);
    }
  }
  // Undo the 2^k rescaling.
  Real scale = Real::pow2(k, wp);
  for (auto& r : roots) r = scale * r;
  return roots;
}

// Reduce tau to the fundamental domain: |re| <= 1/2, |tau| >= 1, with ties
// at |tau| = 1 and at re = 1/2 resolved toward re <= 0.
inline void sl2_reduce(Complex& t, mpfr_prec_t wp) {
  Real half_c = Real::of(mpq_class(1, 2), wp, MPFR_RNDN);
  Real one = Real::of(1, wp);
  Real tol = Real::pow2(-static_cast<long>(wp) / 3, wp);
  for (int iter = 0; iter < 300; ++iter) {
    mpz_class n = (t.re + half_c).floor_z();
    if (n != 0) t.re = t.re - Real::of(n, wp, MPFR_RNDN);
    if (norm2(t) < one - tol) {
      t = -reciprocal(t);
      Real im = t.im;
      t.im = im < Real(wp) ? -im : im;  // numerical safety; im stays positive
    } else {
      break;
    }
  }
  // Boundary ties: push re = +1/2 to -1/2, and re > 0 on |tau| = 1 to re < 0.
  if (t.re > half_c - tol) t.re = t.re - one;
  if (abs(norm2(t) - one) < tol && t.re > tol) t = -reciprocal(t);
}

struct JEvaluation {
  Complex j;
  Complex jprime;
};

inline JEvaluation j_from_tau(const Complex& tau, mpfr_prec_t wp) {
  Complex q = q_from_tau(tau, wp);
  ModularSeries ms = modular_series(q, wp);
  Complex e4cubed = ms.e4 * ms.e4 * ms.e4;
  Complex e6sq = ms.e6 * ms.e6;
  Complex j = Real::of(1728, wp) * e4cubed / (e4cubed - e6sq);
  // j'(tau) = -2 pi i E4^2 E6 / Delta.
  Real two_pi = mul_si(Real::pi(wp, MPFR_RNDN), 2, MPFR_RNDN);
  Complex minus_two_pi_i(Real(wp), -two_pi);
  Complex jp = minus_two_pi_i * ms.e4 * ms.e4 * ms.e6 / ms.delta;
  return JEvaluation{j, jp};
}

}  // namespace detail

// Normalized period ratio tau of the lattice of W, certified against the
// exact j-invariant. precision_bits >= 64 required; the certified
// error_bound is below 2^(-precision_bits/2) or PrecisionLoss is thrown.
inline LatticeTau period_tau(const WeierstrassModel& w, long precision_bits) {
  if (precision_bits < 64) {
    throw DomainError("period computation needs precision_bits >= 64");
  }
  CurveInvariants inv = invariants(w);  // throws SingularCurve

  // Exact corner lattices: j = 0 and j = 1728 pin tau up to SL2.
  if (inv.j == 0 || inv.j == 1728) {
    mpfr_prec_t wp = static_cast<mpfr_prec_t>(precision_bits) + 64;
    LatticeTau out;
    out.precision_bits = precision_bits;
    out.error_bound = Real::pow2(-static_cast<long>(wp) + 4, 64);
    if (inv.j == 0) {
      Real s3 = sqrt(Real::of(3, wp), MPFR_RNDN);
      out.tau = Complex(Real::of(mpq_class(-1, 2), wp, MPFR_RNDN),
                        div_si(s3, 2, MPFR_RNDN));
    } else {
      out.tau = Complex(Real(wp), Real::of(1, wp));
    }
    return out;
  }

  Real target = Real::pow2(-(precision_bits / 2), 64);
  static constexpr int kPerm[6][3] = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2},
                                      {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
  for (int attempt = 0; attempt < 2; ++attempt) {
    mpfr_prec_t wp =
        (static_cast<mpfr_prec_t>(precision_bits) + 64) << attempt;
    std::array<Complex, 3> roots =
        detail::cubic_roots(inv.b2, inv.b4, inv.b6, wp);
    Complex j_exact(Real::of(inv.j, wp, MPFR_RNDN), Real(wp));
    for (const auto& perm : kPerm) {
      const Complex& r1 = roots[static_cast<size_t>(perm[0])];
      const Complex& r2 = roots[static_cast<size_t>(perm[1])];
      const Complex& r3 = roots[static_cast<size_t>(perm[2])];
      Complex ca = sqrt(r1 - r3), cb = sqrt(r1 - r2), cc = sqrt(r2 - r3);
      if (ca.is_zero() || cb.is_zero() || cc.is_zero()) continue;
      Complex A = detail::complex_agm(ca, cb, wp);
      Complex B = detail::complex_agm(ca, cc, wp);
      if (A.is_zero() || B.is_zero()) continue;
      Complex ratio = A / B;
      Complex t(-ratio.im, ratio.re);  // i * A / B
      if (!(t.im > Real(wp))) t = detail::reciprocal(t);
      if (!(t.im > Real(wp))) continue;
      detail::sl2_reduce(t, wp);
      detail::JEvaluation je = detail::j_from_tau(t, wp);
      Real den = abs(je.jprime);
      if (den.is_zero()) continue;
      Real err = mul_si(abs(je.j - j_exact) / den, 4, MPFR_RNDN) +
                 Real::pow2(-static_cast<long>(wp) + 12, 64);
      if (err < target) {
        LatticeTau out;
        out.tau = t;
        out.precision_bits = precision_bits;
        out.error_bound = err;
        return out;
      }
    }
  }
  throw PrecisionLoss("period ratio could not be certified at the requested precision");
}

// Delta(tau) by the q-product, truncated where the tail bound
// 24 |q|^(N+1) / (1 - |q|)^2 drops below the working-precision target.
inline Complex modular_discriminant(const LatticeTau& lt) {
  mpfr_prec_t wp = lt.tau.prec();
  Complex q = detail::q_from_tau(lt.tau, wp);
  double aq = abs(q).to_double();
  if (!(aq < 0.5)) {
    throw PrecisionLoss("q-product truncation cannot be certified: |q| too large");
  }
  double bits_per_term = -std::log2(aq);
  int N = static_cast<int>(static_cast<double>(wp + 12) / bits_per_term) + 4;
  Complex one(Real::of(1, wp), Real(wp));
  Complex prod = one;
  Complex qp = q;
  for (int n = 1; n <= N; ++n) {
    prod = prod * (one - qp);
    qp = qp * q;
  }
  Complex p2 = prod * prod;
  Complex p4 = p2 * p2;
  Complex p8 = p4 * p4;
  return q * p8 * p8 * p8;
}

// Both Faltings heights of (the minimal model of) W: the relative height
// from log Delta_E = 12 h(E) + log |(2 pi)^12 Delta(tau) im(tau)^6| and the
// stable height h_F = h - (1/12) log(Delta_E / den(j)) (see header comment
// for the derivation of the unstable correction).
inline HeightReport stable_faltings_height(const WeierstrassModel& w,
                                           long precision_bits,
                                           const FactorOptions& opts = FactorOptions{}) {
  if (precision_bits < 64) {
    throw DomainError("height computation needs precision_bits >= 64");
  }
  mpfr_prec_t wp = static_cast<mpfr_prec_t>(precision_bits) + 64;
  WeierstrassModel m = minimal_model(w, opts);
  CurveInvariants inv = invariants(m);

  HeightReport rep;
  rep.delta_E = ::abs(inv.disc.get_num());
  rep.tau = period_tau(m, precision_bits + 16);

  Real log_delta_e = log(Real::of(rep.delta_E, wp, MPFR_RNDN), MPFR_RNDN);
  Real two_pi = mul_si(Real::pi(wp, MPFR_RNDN), 2, MPFR_RNDN);
  Real archimedean = mul_si(log(two_pi, MPFR_RNDN), 12, MPFR_RNDN) +
                     detail::log_abs_delta(rep.tau.tau, wp) +
                     mul_si(log(rep.tau.tau.im, MPFR_RNDN), 6, MPFR_RNDN);
  rep.h_relative = div_si(log_delta_e - archimedean, 12, MPFR_RNDN);

  // Unstable part: Delta_E / den(j) is a positive integer.
  mpz_class delta2 = inv.j.get_den();
  mpz_class unstable_q, unstable_r;
  mpz_tdiv_qr(unstable_q.get_mpz_t(), unstable_r.get_mpz_t(),
              rep.delta_E.get_mpz_t(), delta2.get_mpz_t());
  if (unstable_r != 0) {
    throw Error("internal: den(j) does not divide the minimal discriminant");
  }
  rep.unstable_correction =
      log(Real::of(unstable_q, wp, MPFR_RNDN), MPFR_RNDN);
  rep.h_stable = rep.h_relative - div_si(rep.unstable_correction, 12, MPFR_RNDN);

  // First-order propagation from the certified tau error (sensitivity of
  // h in tau is < 1.2 on the fundamental domain), with 4x safety margin
  // already inside the tau bound; rounding slack is far below target.
  rep.error_bound = mul_si(rep.tau.error_bound, 2, MPFR_RNDN) +
                    Real::pow2(-(precision_bits + 16), 64);
  return rep;
}

inline HeightReport relative_faltings_height(const WeierstrassModel& w,
                                             long precision_bits,
                                             const FactorOptions& opts = FactorOptions{}) {
  return stable_faltings_height(w, precision_bits, opts);
}

}  // namespace effdio
