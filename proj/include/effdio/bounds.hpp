// Certified upper-bound evaluation.
//
// Each operation here evaluates one of the explicit bounds exported by the
// toolkit: S-unit equation bounds, Mordell equation bounds, curve-counting
// bounds, modular-degree and Jacobian-height estimates, GL(2) finiteness
// bounds, and the conductor bounds that feed the explicit constructions.
// Results are packaged as BoundValue records suitable for serialization.
//
// Soundness contract: the reported value is never below the true value of
// the stated formula. Counting formulas run in exact integer/rational
// arithmetic. Transcendental formulas run in MPFR round-up mode; every
// intermediate quantity in them is nonnegative and every formula is
// monotone nondecreasing in its intermediates, so per-operation upward
// rounding yields a true upper bound. The single division by an inexact
// quantity (the 2*log 2 denominator in the S-unit exponent bound) rounds
// its denominator down. Because coarser upward rounding of the same
// monotone pipeline can only overshoot further, re-evaluating any bound at
// higher precision never yields a larger value.
//
// Bounds whose magnitude is a double exponential (or whose exact integer
// form would be absurdly large) are reported on a log10 scale: `value`
// then holds log10 of the bound and log10_scale is true.

#pragma once

#include <gmpxx.h>
#include <mpfr.h>

#include <algorithm>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "effdio/errors.hpp"
#include "effdio/factor.hpp"
#include "effdio/prime_set.hpp"
#include "effdio/rational.hpp"
#include "effdio/real.hpp"

namespace effdio {

// One evaluated bound. `paper_anchor` carries the defining formula as
// self-describing text so a certificate consumer can audit what was
// evaluated; `inputs` echoes the inputs in canonical "key=value,..." form.
struct BoundValue {
  std::string name;
  std::string paper_anchor;
  std::string inputs;
  Real value{64};           // the bound (log10 of it when log10_scale)
  bool log10_scale = false; // true => value holds log10 of the bound
  bool exact = false;       // true => the bound is exactly exact_value
  mpz_class exact_value{0}; // meaningful only when exact
};

namespace detail {

inline void check_bound_precision(mpfr_prec_t prec) {
  if (prec < 64 || prec > (mpfr_prec_t(1) << 20)) {
    throw DomainError("bound evaluation precision must lie in [64, 2^20]");
  }
}

inline mpz_class zpow_ul(const mpz_class& base, unsigned long e) {
  mpz_class r;
  mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), e);
  return r;
}

inline mpz_class zfactorial(unsigned long n) {
  mpz_class r;
  mpz_fac_ui(r.get_mpz_t(), n);
  return r;
}

// ceil(num/den) for den > 0.
inline mpz_class ceil_q(const mpq_class& q) {
  mpz_class r;
  mpz_cdiv_q(r.get_mpz_t(), q.get_num().get_mpz_t(), q.get_den().get_mpz_t());
  return r;
}

// Upper bound of log z for an exact integer z >= 1.
inline Real ulog(const mpz_class& z, mpfr_prec_t prec) {
  return log(Real::of(z, prec, MPFR_RNDU), MPFR_RNDU);
}

// Upper bound of log10 z for an exact integer z >= 1.
inline Real ulog10(const mpz_class& z, mpfr_prec_t prec) {
  return log10(Real::of(z, prec, MPFR_RNDU), MPFR_RNDU);
}

inline BoundValue make_exact(std::string name, std::string anchor,
                             std::string inputs, const mpz_class& v,
                             mpfr_prec_t prec) {
  BoundValue b;
  b.name = std::move(name);
  b.paper_anchor = std::move(anchor);
  b.inputs = std::move(inputs);
  b.value = Real::of(v, prec, MPFR_RNDU);
  b.exact = true;
  b.exact_value = v;
  return b;
}

inline BoundValue make_real(std::string name, std::string anchor,
                            std::string inputs, Real v,
                            bool log10_scale = false) {
  BoundValue b;
  b.name = std::move(name);
  b.paper_anchor = std::move(anchor);
  b.inputs = std::move(inputs);
  b.value = std::move(v);
  b.log10_scale = log10_scale;
  return b;
}

// A bound of the shape prod_i base_i^{exp_i} with all base_i >= 1. Kept as
// an exact integer while the result stays below ~2^20 bits; beyond that it
// is reported as log10. The representation chosen depends only on the
// inputs, never on the working precision.
inline BoundValue power_product_bound(std::string name, std::string anchor,
                                      std::string inputs,
                                      const std::vector<std::pair<mpz_class, mpz_class>>& factors,
                                      mpfr_prec_t prec) {
  double bits = 0.0;
  bool exponents_fit = true;
  for (const auto& [base, e] : factors) {
    if (base < 1 || e < 0) throw DomainError("power-product bound needs base >= 1, exponent >= 0");
    if (base == 1 || e == 0) continue;
    if (!e.fits_ulong_p()) exponents_fit = false;
    bits += e.get_d() * static_cast<double>(mpz_sizeinbase(base.get_mpz_t(), 2));
  }
  if (exponents_fit && bits <= double(1L << 20)) {
    mpz_class v(1);
    for (const auto& [base, e] : factors) {
      if (base == 1 || e == 0) continue;
      v *= zpow_ul(base, e.get_ui());
    }
    return make_exact(std::move(name), std::move(anchor), std::move(inputs), v, prec);
  }
  Real l(prec);
  for (const auto& [base, e] : factors) {
    if (base == 1 || e == 0) continue;
    l = add(l, mul(Real::of(e, prec, MPFR_RNDU), ulog10(base, prec), MPFR_RNDU), MPFR_RNDU);
  }
  return make_real(std::move(name), std::move(anchor), std::move(inputs), std::move(l), true);
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Conductor exponent bound
// ---------------------------------------------------------------------------

// lambda_p(n) = sum_i i * r_i * p^i where n = sum_i r_i p^i in base p.
inline mpz_class base_p_weighted_digit_sum(mpz_class n, const mpz_class& p) {
  mpz_class s(0), pw(1);
  unsigned long i = 0;
  while (n > 0) {
    mpz_class r = n % p;
    s += mpz_class(i) * r * pw;
    n /= p;
    pw *= p;
    ++i;
  }
  return s;
}

// Largest possible exponent of p in the conductor of a g-dimensional
// abelian variety over a local field with absolute ramification index e:
// 2g + e*(p*n + (p-1)*lambda_p(n)) with n = floor(2g/(p-1)). For
// p > 2g+1 this collapses to the tame value 2g.
inline mpz_class conductor_exponent_value(const mpz_class& g, const mpz_class& p,
                                          const mpz_class& e) {
  if (g < 1) throw DomainError("conductor exponent bound needs g >= 1");
  if (e < 1) throw DomainError("conductor exponent bound needs e >= 1");
  if (!is_prime(p)) throw DomainError("conductor exponent bound needs p prime");
  if (p > 2 * g + 1) return 2 * g;
  mpz_class n = (2 * g) / (p - 1);
  return 2 * g + e * (p * n + (p - 1) * base_p_weighted_digit_sum(n, p));
}

inline BoundValue conductor_exponent_bound(const mpz_class& g, const mpz_class& p,
                                           const mpz_class& e,
                                           mpfr_prec_t prec = 192) {
  detail::check_bound_precision(prec);
  std::string inputs = "g=" + g.get_str() + ",p=" + p.get_str() + ",e=" + e.get_str();
  return detail::make_exact(
      "conductor_exponent",
      "2g + e*(p*n + (p-1)*lambda_p(n)), n = floor(2g/(p-1)); 2g when p > 2g+1",
      std::move(inputs), conductor_exponent_value(g, p, e), prec);
}

// ---------------------------------------------------------------------------
// S-unit equation bounds
// ---------------------------------------------------------------------------

struct SUnitBounds {
  mpz_class n_S;       // 2^7 * N_S
  BoundValue height;   // h(x), h(y) <= (3/2) n_S (log n_S)^2 + 65
  BoundValue exponent; // max exponent <= (3/(2 log 2)) n_S (log n_S)^2 + 94
  BoundValue count;    // number of solutions <= 4 n_S prod_{p in S}(1+1/p)
};

inline SUnitBounds sunit_bounds(const PrimeSet& S, mpfr_prec_t prec = 192) {
  detail::check_bound_precision(prec);
  SUnitBounds out;
  out.n_S = S.n_small();
  const std::string inputs = "S=" + S.brace_str();

  Real l2 = sqr(detail::ulog(out.n_S, prec), MPFR_RNDU);
  // n_S is even, so (3/2) n_S is an exact integer.
  Real h = mul(Real::of(mpz_class(3 * out.n_S / 2), prec, MPFR_RNDU), l2, MPFR_RNDU);
  out.height = detail::make_real(
      "sunit_height", "(3/2)*n_S*(log n_S)^2 + 65, n_S = 2^7*N_S", inputs,
      add_si(h, 65, MPFR_RNDU));

  // Quotient by 2 log 2: round the denominator down so the quotient
  // stays an upper bound.
  Real den = mul_si(log(Real::of(2L, prec), MPFR_RNDD), 2, MPFR_RNDD);
  Real num = mul(Real::of(mpz_class(3 * out.n_S), prec, MPFR_RNDU), l2, MPFR_RNDU);
  out.exponent = detail::make_real(
      "sunit_exponent", "(3/(2*log 2))*n_S*(log n_S)^2 + 94", inputs,
      add_si(div(num, den, MPFR_RNDU), 94, MPFR_RNDU));

  mpq_class cnt(4 * out.n_S);
  for (const mpz_class& p : S.primes()) cnt *= mpq_class(p + 1, p);
  cnt.canonicalize();
  out.count = detail::make_exact("sunit_count",
                                 "ceil(4*n_S*prod_{p in S}(1+1/p))", inputs,
                                 detail::ceil_q(cnt), prec);
  return out;
}

// ---------------------------------------------------------------------------
// Mordell equation bounds
// ---------------------------------------------------------------------------

// r2(a) = prod p^{min(2, ord_p(a))} over primes p not in S with
// ord_p(a) > 0 (denominator primes do not contribute).
inline mpz_class mordell_radical(const Rational& a, const PrimeSet& S) {
  if (a == 0) throw ZeroA("Mordell bounds need a != 0");
  mpz_class num = ::abs(a.get_num());
  mpz_class r(1);
  for (const auto& [p, ord] : factorize(num).factors) {
    if (S.contains(p)) continue;
    r *= detail::zpow_ul(p, std::min<unsigned long>(2, ord));
  }
  return r;
}

// a_S = 2^8 * 3^5 * N_S^2 * r2(a).
inline mpz_class mordell_a_S(const Rational& a, const PrimeSet& S) {
  mpz_class N = S.N();
  return mpz_class(256 * 243) * N * N * mordell_radical(a, S);
}

struct MordellBounds {
  mpz_class a_S;
  BoundValue height; // h(x), h(y) <= h(a) + 4 a_S (log a_S)^2
  BoundValue count;  // number of solutions <= (2/3) a_S prod_{p | a_S}(1+1/p)
};

inline MordellBounds mordell_bounds(const Rational& a, const PrimeSet& S,
                                    mpfr_prec_t prec = 192) {
  detail::check_bound_precision(prec);
  MordellBounds out;
  out.a_S = mordell_a_S(a, S);
  const std::string inputs =
      "a=" + format_rational(a) + ",S=" + S.brace_str();

  Real l2 = sqr(detail::ulog(out.a_S, prec), MPFR_RNDU);
  Real v = add(weil_height(a, prec, MPFR_RNDU),
               mul(Real::of(mpz_class(4 * out.a_S), prec, MPFR_RNDU), l2, MPFR_RNDU),
               MPFR_RNDU);
  out.height = detail::make_real(
      "mordell_height",
      "h(a) + 4*a_S*(log a_S)^2, a_S = 2^8*3^5*N_S^2*r2(a)", inputs,
      std::move(v));

  mpq_class cnt(2 * out.a_S, 3);
  for (const auto& [p, ord] : factorize(out.a_S).factors) {
    (void)ord;
    cnt *= mpq_class(p + 1, p);
  }
  cnt.canonicalize();
  out.count = detail::make_exact("mordell_count",
                                 "ceil((2/3)*a_S*prod_{p | a_S}(1+1/p))",
                                 inputs, detail::ceil_q(cnt), prec);
  return out;
}

// ---------------------------------------------------------------------------
// Curve-counting bounds over Z_S (Shafarevich-type) and moduli heights
// ---------------------------------------------------------------------------

struct ShafarevichBounds {
  mpz_class nu;            // nu_S = 12^3 * N_S^2
  BoundValue nu_value;
  BoundValue height;       // h(W) <= (1/2) nu (log nu)^2
  BoundValue count;        // #curves <= (2/3) nu prod_{p | nu}(1+1/p)
  BoundValue moduli_height; // h_M(P) <= (1/4) nu (log nu)^2 + 9
};

inline ShafarevichBounds shafarevich_bounds(const PrimeSet& S,
                                            mpfr_prec_t prec = 192) {
  detail::check_bound_precision(prec);
  ShafarevichBounds out;
  mpz_class N = S.N();
  out.nu = 1728 * N * N;
  const std::string inputs = "S=" + S.brace_str();

  out.nu_value = detail::make_exact("nu_S", "12^3*N_S^2", inputs, out.nu, prec);

  Real l2 = sqr(detail::ulog(out.nu, prec), MPFR_RNDU);
  out.height = detail::make_real(
      "shafarevich_height", "(1/2)*nu_S*(log nu_S)^2", inputs,
      mul(Real::of(mpz_class(out.nu / 2), prec, MPFR_RNDU), l2, MPFR_RNDU));

  mpq_class cnt(2 * out.nu, 3);
  for (const auto& [p, ord] : factorize(out.nu).factors) {
    (void)ord;
    cnt *= mpq_class(p + 1, p);
  }
  cnt.canonicalize();
  out.count = detail::make_exact("shafarevich_count",
                                 "ceil((2/3)*nu_S*prod_{p | nu_S}(1+1/p))",
                                 inputs, detail::ceil_q(cnt), prec);

  out.moduli_height = detail::make_real(
      "moduli_height", "(1/4)*nu_S*(log nu_S)^2 + 9", inputs,
      add_si(mul(Real::of(mpz_class(out.nu / 4), prec, MPFR_RNDU), l2, MPFR_RNDU),
             9, MPFR_RNDU));
  return out;
}

// ---------------------------------------------------------------------------
// Ramanujan tau and modular bounds
// ---------------------------------------------------------------------------

// tau(1..count) via the pentagonal-number expansion of prod(1-q^n) raised
// to the 24th power by square-and-multiply. Index 0 of the result is unused.
inline std::vector<mpz_class> ramanujan_tau(std::size_t count) {
  const std::size_t n_terms = count + 1;
  std::vector<mpz_class> euler(n_terms, 0);
  euler[0] = 1;
  for (unsigned long k = 1;; ++k) {
    unsigned long g1 = k * (3 * k - 1) / 2;
    unsigned long g2 = k * (3 * k + 1) / 2;
    if (g1 >= n_terms && g2 >= n_terms) break;
    int sgn = (k % 2) ? -1 : 1;
    if (g1 < n_terms) euler[g1] += sgn;
    if (g2 < n_terms) euler[g2] += sgn;
  }
  auto polymul = [n_terms](const std::vector<mpz_class>& f,
                           const std::vector<mpz_class>& g) {
    std::vector<mpz_class> h(n_terms, 0);
    for (std::size_t i = 0; i < n_terms; ++i) {
      if (f[i] == 0) continue;
      for (std::size_t j = 0; i + j < n_terms; ++j) {
        if (g[j] != 0) h[i + j] += f[i] * g[j];
      }
    }
    return h;
  };
  std::vector<mpz_class> p2 = polymul(euler, euler);
  std::vector<mpz_class> p4 = polymul(p2, p2);
  std::vector<mpz_class> p8 = polymul(p4, p4);
  std::vector<mpz_class> p16 = polymul(p8, p8);
  std::vector<mpz_class> p24 = polymul(p16, p8);
  std::vector<mpz_class> tau(n_terms, 0);
  for (std::size_t n = 1; n < n_terms; ++n) tau[n] = p24[n - 1];
  return tau;
}

struct ModularBounds {
  mpz_class degree_index;    // d = N prod_{p | N}(1+1/p)
  mpz_class genus;           // floor(d/12)
  BoundValue index;
  BoundValue genus_value;
  BoundValue degree_log;     // log m_f <= (1/2) N (log N)^2
  BoundValue degree_refined; // m_f <= sqrt(g! l!) prod of g largest |tau(j)|
  BoundValue jacobian_j0;    // h_F(J_0(N)) <= 7*10^7 (N log N)^6
  BoundValue jacobian_j1;    // h_F(J_1(N)) <= 17*10^3 N^12
  BoundValue jacobian_full;  // h_F(J(N))  <= 17*10^3 N^18
};

inline ModularBounds modular_bounds(const mpz_class& N, mpfr_prec_t prec = 192) {
  detail::check_bound_precision(prec);
  if (N < 1) throw DomainError("modular bounds need N >= 1");
  ModularBounds out;
  const std::string inputs = "N=" + N.get_str();

  out.degree_index = N;
  if (N > 1) {
    for (const auto& [p, ord] : factorize(N).factors) {
      (void)ord;
      out.degree_index = out.degree_index * (p + 1) / p;
    }
  }
  out.genus = out.degree_index / 12;
  out.index = detail::make_exact("modular_degree_index",
                                 "d = N*prod_{p | N}(1+1/p)", inputs,
                                 out.degree_index, prec);
  out.genus_value = detail::make_exact("modular_genus", "floor(d/12)", inputs,
                                       out.genus, prec);

  Real logN = detail::ulog(N, prec);
  Real l2 = sqr(logN, MPFR_RNDU);
  out.degree_log = detail::make_real(
      "modular_degree_log", "(1/2)*N*(log N)^2", inputs,
      div(mul(Real::of(N, prec, MPFR_RNDU), l2, MPFR_RNDU),
          Real::of(2L, prec), MPFR_RNDU));

  // l = 1 + floor(d/6); multiply the g largest |tau(j)|, j <= l.
  if (!mpz_class(out.degree_index / 6 + 1).fits_ulong_p() ||
      !out.genus.fits_ulong_p()) {
    throw DomainError("refined modular-degree bound needs floor(d/6) to fit a machine word");
  }
  unsigned long ell = mpz_class(out.degree_index / 6 + 1).get_ui();
  unsigned long g = out.genus.get_ui();
  std::vector<mpz_class> tau = ramanujan_tau(ell);
  std::vector<mpz_class> mags;
  mags.reserve(ell);
  for (unsigned long j = 1; j <= ell; ++j) mags.push_back(::abs(tau[j]));
  std::sort(mags.begin(), mags.end(), [](const mpz_class& a, const mpz_class& b) {
    return a > b;
  });
  mpz_class worst(1);
  for (unsigned long i = 0; i < g; ++i) worst *= mags[i];
  Real refined = mul(sqrt(Real::of(mpz_class(detail::zfactorial(g) * detail::zfactorial(ell)),
                                   prec, MPFR_RNDU), MPFR_RNDU),
                     Real::of(worst, prec, MPFR_RNDU), MPFR_RNDU);
  out.degree_refined = detail::make_real(
      "modular_degree_refined",
      "sqrt(g!*l!)*prod of the g largest |tau(j)|, j <= l = 1+floor(d/6)",
      inputs, std::move(refined));

  Real nlogn6 = pow_ui(mul(Real::of(N, prec, MPFR_RNDU), logN, MPFR_RNDU), 6,
                       MPFR_RNDU);
  out.jacobian_j0 = detail::make_real(
      "jacobian_height_j0", "7*10^7*(N*log N)^6", inputs,
      mul(Real::of(70000000L, prec), nlogn6, MPFR_RNDU));
  out.jacobian_j1 = detail::make_exact("jacobian_height_j1", "17*10^3*N^12",
                                       inputs, 17000 * detail::zpow_ul(N, 12),
                                       prec);
  out.jacobian_full = detail::make_exact("jacobian_height_full", "17*10^3*N^18",
                                         inputs, 17000 * detail::zpow_ul(N, 18),
                                         prec);
  return out;
}

// ---------------------------------------------------------------------------
// Height and discriminant bounds from the conductor
// ---------------------------------------------------------------------------

struct ConductorHeightBounds {
  BoundValue height;       // h(E) <= (1/4) N (log N)^2 + 9
  BoundValue discriminant; // log|Delta_E| <= 3 N (log N)^2 + 124
  BoundValue height_poly;  // h(E) <= 10^8 (N log N)^6
};

inline ConductorHeightBounds height_conductor_bounds(const mpz_class& N,
                                                     mpfr_prec_t prec = 192) {
  detail::check_bound_precision(prec);
  if (N < 1) throw DomainError("conductor-height bounds need N >= 1");
  ConductorHeightBounds out;
  const std::string inputs = "N=" + N.get_str();

  Real logN = detail::ulog(N, prec);
  Real l2 = sqr(logN, MPFR_RNDU);
  Real nl2 = mul(Real::of(N, prec, MPFR_RNDU), l2, MPFR_RNDU);
  out.height = detail::make_real(
      "height_from_conductor", "(1/4)*N*(log N)^2 + 9", inputs,
      add_si(div(nl2, Real::of(4L, prec), MPFR_RNDU), 9, MPFR_RNDU));
  out.discriminant = detail::make_real(
      "disc_from_conductor", "3*N*(log N)^2 + 124", inputs,
      add_si(mul_si(nl2, 3, MPFR_RNDU), 124, MPFR_RNDU));
  Real nlogn6 = pow_ui(mul(Real::of(N, prec, MPFR_RNDU), logN, MPFR_RNDU), 6,
                       MPFR_RNDU);
  out.height_poly = detail::make_real(
      "height_from_conductor_poly", "10^8*(N*log N)^6", inputs,
      mul(Real::of(100000000L, prec), nlogn6, MPFR_RNDU));
  return out;
}

// ---------------------------------------------------------------------------
// Number-field constant kappa
// ---------------------------------------------------------------------------

// kappa = log(D_K)/(2d) + 79 R_K (r_K!) r_K^{3/2} log d; zero for the
// rationals (D_K = d = 1, r_K = 0).
inline BoundValue kappa_bound(const mpz_class& DK, const mpz_class& d,
                              const Rational& RK, const mpz_class& rK,
                              mpfr_prec_t prec = 192) {
  detail::check_bound_precision(prec);
  if (DK < 1 || d < 1) throw DomainError("kappa needs D_K >= 1 and d >= 1");
  if (RK < 0 || rK < 0) throw DomainError("kappa needs R_K >= 0 and r_K >= 0");
  if (!rK.fits_ulong_p()) throw DomainError("kappa needs r_K to fit a machine word");
  const std::string inputs = "DK=" + DK.get_str() + ",d=" + d.get_str() +
                             ",RK=" + format_rational(RK) + ",rK=" + rK.get_str();
  Real first = div(detail::ulog(DK, prec), Real::of(mpz_class(2 * d), prec, MPFR_RNDU),
                   MPFR_RNDU);
  unsigned long r = rK.get_ui();
  mpz_class coeff = 79 * detail::zfactorial(r);
  Real second = mul(Real::of(RK, prec, MPFR_RNDU), Real::of(coeff, prec, MPFR_RNDU),
                    MPFR_RNDU);
  second = mul(second, sqrt(Real::of(detail::zpow_ul(rK, 3), prec, MPFR_RNDU),
                            MPFR_RNDU), MPFR_RNDU);
  second = mul(second, detail::ulog(d, prec), MPFR_RNDU);
  return detail::make_real("kappa",
                           "log(D_K)/(2d) + 79*R_K*(r_K!)*r_K^(3/2)*log d",
                           inputs, add(first, second, MPFR_RNDU));
}

// ---------------------------------------------------------------------------
// GL(2) finiteness, height, and isogeny bounds
// ---------------------------------------------------------------------------

struct GL2Bounds {
  mpz_class nu0;  // (2g+1)^{6 rho} N_S^2
  long rho = 0;   // #{p prime : p not in S, p <= 2g+1}
  BoundValue finiteness;          // h_F <= (3g)^{144g} N_S^24
  BoundValue nu0_value;
  BoundValue height;              // h_F <= g(18*10^3 nu0^12 + (8g)^6 log nu0)
  BoundValue semistable;          // h_F <= g(3 N_S)^12 + (6g)^7 log N_S
  BoundValue isogeny_degree;      // log10 scale: (14g)^{(12g)^5} N_S^{(37g)^3}
  BoundValue isogeny_height;      // (30g)^3 log N_S + (9g)^6
  BoundValue quotient_finiteness; // log10 scale: (14g)^{(9g)^6} N_S^{(18g)^4}
};

inline GL2Bounds gl2_bounds(const mpz_class& g, const PrimeSet& S,
                            mpfr_prec_t prec = 192) {
  detail::check_bound_precision(prec);
  if (g < 1) throw DomainError("GL(2) bounds need g >= 1");
  if (!g.fits_ulong_p()) throw DomainError("GL(2) bounds need g to fit a machine word");
  GL2Bounds out;
  const std::string inputs = "g=" + g.get_str() + ",S=" + S.brace_str();
  const mpz_class N = S.N();

  out.finiteness = detail::power_product_bound(
      "gl2_finiteness", "(3g)^(144g)*N_S^24", inputs,
      {{3 * g, 144 * g}, {N, 24}}, prec);

  for (mpz_class q(2); q <= 2 * g + 1; ++q) {
    if (is_prime(q) && !S.contains(q)) ++out.rho;
  }
  out.nu0 = detail::zpow_ul(2 * g + 1, 6 * static_cast<unsigned long>(out.rho)) * N * N;
  out.nu0_value = detail::make_exact(
      "nu_0", "(2g+1)^(6*rho)*N_S^2, rho = #{p prime : p not in S, p <= 2g+1}",
      inputs, out.nu0, prec);

  mpz_class a = g * 18000 * detail::zpow_ul(out.nu0, 12);
  mpz_class b = g * detail::zpow_ul(8 * g, 6);
  out.height = detail::make_real(
      "gl2_height", "g*(18*10^3*nu_0^12 + (8g)^6*log nu_0)", inputs,
      add(Real::of(a, prec, MPFR_RNDU),
          mul(Real::of(b, prec, MPFR_RNDU), detail::ulog(out.nu0, prec), MPFR_RNDU),
          MPFR_RNDU));

  a = g * detail::zpow_ul(3 * N, 12);
  b = detail::zpow_ul(6 * g, 7);
  out.semistable = detail::make_real(
      "gl2_semistable", "g*(3*N_S)^12 + (6g)^7*log N_S", inputs,
      add(Real::of(a, prec, MPFR_RNDU),
          mul(Real::of(b, prec, MPFR_RNDU), detail::ulog(N, prec), MPFR_RNDU),
          MPFR_RNDU));

  Real iso = mul(Real::of(detail::zpow_ul(12 * g, 5), prec, MPFR_RNDU),
                 detail::ulog10(14 * g, prec), MPFR_RNDU);
  iso = add(iso, mul(Real::of(detail::zpow_ul(37 * g, 3), prec, MPFR_RNDU),
                     detail::ulog10(N, prec), MPFR_RNDU), MPFR_RNDU);
  out.isogeny_degree = detail::make_real(
      "gl2_isogeny_degree", "log10 of (14g)^((12g)^5)*N_S^((37g)^3)", inputs,
      std::move(iso), true);

  out.isogeny_height = detail::make_real(
      "gl2_isogeny_height", "(30g)^3*log N_S + (9g)^6", inputs,
      add(mul(Real::of(detail::zpow_ul(30 * g, 3), prec, MPFR_RNDU),
              detail::ulog(N, prec), MPFR_RNDU),
          Real::of(detail::zpow_ul(9 * g, 6), prec, MPFR_RNDU), MPFR_RNDU));

  Real qf = mul(Real::of(detail::zpow_ul(9 * g, 6), prec, MPFR_RNDU),
                detail::ulog10(14 * g, prec), MPFR_RNDU);
  qf = add(qf, mul(Real::of(detail::zpow_ul(18 * g, 4), prec, MPFR_RNDU),
                   detail::ulog10(N, prec), MPFR_RNDU), MPFR_RNDU);
  out.quotient_finiteness = detail::make_real(
      "gl2_quotient_finiteness", "log10 of (14g)^((9g)^6)*N_S^((18g)^4)", inputs,
      std::move(qf), true);

  return out;
}

// Isogenies between quotients: (3g)^{32g^2} N_T^{4g}.
inline BoundValue gl2_quotient_isogeny_bound(const mpz_class& g, const PrimeSet& T,
                                             mpfr_prec_t prec = 192) {
  detail::check_bound_precision(prec);
  if (g < 1) throw DomainError("GL(2) bounds need g >= 1");
  const std::string inputs = "g=" + g.get_str() + ",T=" + T.brace_str();
  return detail::power_product_bound(
      "gl2_quotient_isogenies", "(3g)^(32g^2)*N_T^(4g)", inputs,
      {{3 * g, 32 * g * g}, {T.N(), 4 * g}}, prec);
}

// Height change under an isogeny network:
// 2^10 g^3 log((14g)^{64g^2} * d * max(h, log d, 1)^2), expanded as
// 2^10 g^3 (64g^2 log(14g) + log d + 2 log max(h, log d, 1)) so no
// oversized integer power is ever formed.
inline BoundValue abelian_height_difference_bound(const mpz_class& g,
                                                  const mpz_class& d,
                                                  const Rational& h,
                                                  mpfr_prec_t prec = 192) {
  detail::check_bound_precision(prec);
  if (g < 1 || d < 1) throw DomainError("height-difference bound needs g >= 1 and d >= 1");
  if (h < 0) throw DomainError("height-difference bound needs h >= 0");
  const std::string inputs = "g=" + g.get_str() + ",d=" + d.get_str() +
                             ",h=" + format_rational(h);
  Real logd = detail::ulog(d, prec);
  Real mx = max(Real::of(h, prec, MPFR_RNDU), max(logd, Real::of(1L, prec)));
  Real inner = mul(Real::of(mpz_class(64 * g * g), prec, MPFR_RNDU),
                   detail::ulog(14 * g, prec), MPFR_RNDU);
  inner = add(inner, logd, MPFR_RNDU);
  inner = add(inner, mul_si(log(mx, MPFR_RNDU), 2, MPFR_RNDU), MPFR_RNDU);
  return detail::make_real(
      "abelian_height_difference",
      "2^10*g^3*log((14g)^(64g^2)*d*max(h, log d, 1)^2)", inputs,
      mul(Real::of(mpz_class(1024 * g * g * g), prec, MPFR_RNDU), inner, MPFR_RNDU));
}

// Faltings-height shift along a single isogeny: (1/2) log deg.
inline BoundValue isogeny_height_shift_bound(const mpz_class& deg,
                                             mpfr_prec_t prec = 192) {
  detail::check_bound_precision(prec);
  if (deg < 1) throw DomainError("isogeny height shift needs deg >= 1");
  const std::string inputs = "deg=" + deg.get_str();
  return detail::make_real("isogeny_height_shift", "(1/2)*log(deg)", inputs,
                           div(detail::ulog(deg, prec), Real::of(2L, prec),
                               MPFR_RNDU));
}

// ---------------------------------------------------------------------------
// Conductor bounds for the explicit constructions over number fields
// ---------------------------------------------------------------------------

namespace detail {

inline void check_positive(const mpz_class& v, const char* what) {
  if (v < 1) throw DomainError(std::string("conductor bound needs ") + what + " >= 1");
}

}  // namespace detail

// Legendre-curve construction: N_E <= 2^{6d} 3^{5d} N_T^2.
inline BoundValue parshin_legendre_conductor_bound(const mpz_class& d,
                                                   const mpz_class& NT,
                                                   mpfr_prec_t prec = 192) {
  detail::check_bound_precision(prec);
  detail::check_positive(d, "d");
  detail::check_positive(NT, "N_T");
  const std::string inputs = "d=" + d.get_str() + ",NT=" + NT.get_str();
  return detail::power_product_bound("parshin_legendre_conductor",
                                     "2^(6d)*3^(5d)*N_T^2", inputs,
                                     {{2, 6 * d}, {3, 5 * d}, {NT, 2}}, prec);
}

// Class-field construction: N_E' <= 2^{7d} 3^{5d} D_K^{h_K-1} N_T.
inline BoundValue parshin_class_conductor_bound(const mpz_class& d,
                                                const mpz_class& DK,
                                                const mpz_class& hK,
                                                const mpz_class& NT,
                                                mpfr_prec_t prec = 192) {
  detail::check_bound_precision(prec);
  detail::check_positive(d, "d");
  detail::check_positive(DK, "D_K");
  detail::check_positive(hK, "h_K");
  detail::check_positive(NT, "N_T");
  const std::string inputs = "d=" + d.get_str() + ",DK=" + DK.get_str() +
                             ",hK=" + hK.get_str() + ",NT=" + NT.get_str();
  return detail::power_product_bound("parshin_class_conductor",
                                     "2^(7d)*3^(5d)*D_K^(h_K-1)*N_T", inputs,
                                     {{2, 7 * d}, {3, 5 * d}, {DK, hK - 1}, {NT, 1}},
                                     prec);
}

// Mordell-curve construction: N_E <= 2^{6d} 3^{3d} N_T^2.
inline BoundValue parshin_mordell_conductor_bound(const mpz_class& d,
                                                  const mpz_class& NT,
                                                  mpfr_prec_t prec = 192) {
  detail::check_bound_precision(prec);
  detail::check_positive(d, "d");
  detail::check_positive(NT, "N_T");
  const std::string inputs = "d=" + d.get_str() + ",NT=" + NT.get_str();
  return detail::power_product_bound("parshin_mordell_conductor",
                                     "2^(6d)*3^(3d)*N_T^2", inputs,
                                     {{2, 6 * d}, {3, 3 * d}, {NT, 2}}, prec);
}

// General Mordell construction: N_E <= 2^{8d} 3^{5d} D_K N_S^2 r2(a).
inline BoundValue parshin_mordell_general_bound(const mpz_class& d,
                                                const mpz_class& DK,
                                                const mpz_class& NS,
                                                const mpz_class& r2,
                                                mpfr_prec_t prec = 192) {
  detail::check_bound_precision(prec);
  detail::check_positive(d, "d");
  detail::check_positive(DK, "D_K");
  detail::check_positive(NS, "N_S");
  detail::check_positive(r2, "r2");
  const std::string inputs = "d=" + d.get_str() + ",DK=" + DK.get_str() +
                             ",NS=" + NS.get_str() + ",r2=" + r2.get_str();
  return detail::power_product_bound("parshin_mordell_general",
                                     "2^(8d)*3^(5d)*D_K*N_S^2*r2(a)", inputs,
                                     {{2, 8 * d}, {3, 5 * d}, {DK, 1}, {NS, 2}, {r2, 1}},
                                     prec);
}

// ---------------------------------------------------------------------------
// Name-keyed registry
// ---------------------------------------------------------------------------

namespace detail {

// Splits "k1=v1,k2=v2,S={2,3}" into key/value pairs; commas inside braces
// do not split. An empty string parses to no pairs.
inline std::vector<std::pair<std::string, std::string>> parse_inputs(
    const std::string& text) {
  std::vector<std::pair<std::string, std::string>> out;
  std::size_t pos = 0;
  int depth = 0;
  std::string token;
  auto flush = [&]() {
    if (token.empty()) return;
    std::size_t eq = token.find('=');
    if (eq == std::string::npos || eq == 0) {
      throw DomainError("bad input token \"" + token + "\" (expected key=value)");
    }
    out.emplace_back(token.substr(0, eq), token.substr(eq + 1));
    token.clear();
  };
  for (; pos < text.size(); ++pos) {
    char c = text[pos];
    if (c == ' ') continue;
    if (c == '{') ++depth;
    if (c == '}') --depth;
    if (c == ',' && depth == 0) {
      flush();
      continue;
    }
    token += c;
  }
  if (depth != 0) throw DomainError("unbalanced braces in \"" + text + "\"");
  flush();
  return out;
}

// Typed access to parsed inputs with canonical-order echoing.
class BoundInputs {
 public:
  explicit BoundInputs(const std::string& text) : pairs_(parse_inputs(text)) {}

  mpz_class integer(const std::string& key) {
    try {
      return mpz_class(take(key));
    } catch (const std::invalid_argument&) {
      throw DomainError("input " + key + " is not an integer");
    }
  }

  Rational rational(const std::string& key) { return parse_rational(take(key)); }

  // Set-valued inputs default to the empty set when absent.
  PrimeSet prime_set(const std::string& key) {
    for (auto it = pairs_.begin(); it != pairs_.end(); ++it) {
      if (it->first == key) {
        std::string v = it->second;
        pairs_.erase(it);
        return PrimeSet::parse(v);
      }
    }
    return PrimeSet();
  }

  void finish() const {
    if (!pairs_.empty()) {
      throw DomainError("unexpected input key \"" + pairs_.front().first + "\"");
    }
  }

 private:
  std::string take(const std::string& key) {
    for (auto it = pairs_.begin(); it != pairs_.end(); ++it) {
      if (it->first == key) {
        std::string v = it->second;
        pairs_.erase(it);
        return v;
      }
    }
    throw DomainError("missing input key \"" + key + "\"");
  }

  std::vector<std::pair<std::string, std::string>> pairs_;
};

}  // namespace detail

// Evaluates the named bound from a "key=value,..." input string. Every
// bound exported by the library is reachable here by its registry name;
// this is the entry point the command-line front end drives.
inline BoundValue evaluate_bound(const std::string& name,
                                 const std::string& inputs,
                                 mpfr_prec_t prec = 192) {
  detail::check_bound_precision(prec);
  detail::BoundInputs in(inputs);
  auto done = [&in](BoundValue b) {
    in.finish();
    return b;
  };

  if (name == "conductor_exponent") {
    mpz_class g = in.integer("g"), p = in.integer("p"), e = in.integer("e");
    return done(conductor_exponent_bound(g, p, e, prec));
  }
  if (name == "sunit_height" || name == "sunit_exponent" || name == "sunit_count") {
    PrimeSet S = in.prime_set("S");
    SUnitBounds b = sunit_bounds(S, prec);
    return done(name == "sunit_height" ? b.height
                : name == "sunit_exponent" ? b.exponent
                                           : b.count);
  }
  if (name == "mordell_height" || name == "mordell_count") {
    Rational a = in.rational("a");
    PrimeSet S = in.prime_set("S");
    MordellBounds b = mordell_bounds(a, S, prec);
    return done(name == "mordell_height" ? b.height : b.count);
  }
  if (name == "nu_S" || name == "shafarevich_height" ||
      name == "shafarevich_count" || name == "moduli_height") {
    PrimeSet S = in.prime_set("S");
    ShafarevichBounds b = shafarevich_bounds(S, prec);
    return done(name == "nu_S"                ? b.nu_value
                : name == "shafarevich_height" ? b.height
                : name == "shafarevich_count"  ? b.count
                                               : b.moduli_height);
  }
  if (name == "modular_degree_index" || name == "modular_genus" ||
      name == "modular_degree_log" || name == "modular_degree_refined" ||
      name == "jacobian_height_j0" || name == "jacobian_height_j1" ||
      name == "jacobian_height_full") {
    mpz_class N = in.integer("N");
    ModularBounds b = modular_bounds(N, prec);
    return done(name == "modular_degree_index"   ? b.index
                : name == "modular_genus"         ? b.genus_value
                : name == "modular_degree_log"    ? b.degree_log
                : name == "modular_degree_refined" ? b.degree_refined
                : name == "jacobian_height_j0"    ? b.jacobian_j0
                : name == "jacobian_height_j1"    ? b.jacobian_j1
                                                  : b.jacobian_full);
  }
  if (name == "height_from_conductor" || name == "disc_from_conductor" ||
      name == "height_from_conductor_poly") {
    mpz_class N = in.integer("N");
    ConductorHeightBounds b = height_conductor_bounds(N, prec);
    return done(name == "height_from_conductor" ? b.height
                : name == "disc_from_conductor" ? b.discriminant
                                                : b.height_poly);
  }
  if (name == "kappa") {
    mpz_class DK = in.integer("DK"), d = in.integer("d");
    Rational RK = in.rational("RK");
    mpz_class rK = in.integer("rK");
    return done(kappa_bound(DK, d, RK, rK, prec));
  }
  if (name == "gl2_finiteness" || name == "nu_0" || name == "gl2_height" ||
      name == "gl2_semistable" || name == "gl2_isogeny_degree" ||
      name == "gl2_isogeny_height" || name == "gl2_quotient_finiteness") {
    mpz_class g = in.integer("g");
    PrimeSet S = in.prime_set("S");
    GL2Bounds b = gl2_bounds(g, S, prec);
    return done(name == "gl2_finiteness"          ? b.finiteness
                : name == "nu_0"                   ? b.nu0_value
                : name == "gl2_height"             ? b.height
                : name == "gl2_semistable"         ? b.semistable
                : name == "gl2_isogeny_degree"     ? b.isogeny_degree
                : name == "gl2_isogeny_height"     ? b.isogeny_height
                                                   : b.quotient_finiteness);
  }
  if (name == "gl2_quotient_isogenies") {
    mpz_class g = in.integer("g");
    PrimeSet T = in.prime_set("T");
    return done(gl2_quotient_isogeny_bound(g, T, prec));
  }
  if (name == "abelian_height_difference") {
    mpz_class g = in.integer("g"), d = in.integer("d");
    Rational h = in.rational("h");
    return done(abelian_height_difference_bound(g, d, h, prec));
  }
  if (name == "isogeny_height_shift") {
    return done(isogeny_height_shift_bound(in.integer("deg"), prec));
  }
  if (name == "parshin_legendre_conductor") {
    mpz_class d = in.integer("d"), NT = in.integer("NT");
    return done(parshin_legendre_conductor_bound(d, NT, prec));
  }
  if (name == "parshin_class_conductor") {
    mpz_class d = in.integer("d"), DK = in.integer("DK"),
              hK = in.integer("hK"), NT = in.integer("NT");
    return done(parshin_class_conductor_bound(d, DK, hK, NT, prec));
  }
  if (name == "parshin_mordell_conductor") {
    mpz_class d = in.integer("d"), NT = in.integer("NT");
    return done(parshin_mordell_conductor_bound(d, NT, prec));
  }
  if (name == "parshin_mordell_general") {
    mpz_class d = in.integer("d"), DK = in.integer("DK"),
              NS = in.integer("NS"), r2 = in.integer("r2");
    return done(parshin_mordell_general_bound(d, DK, NS, r2, prec));
  }
  throw DomainError("unknown bound name \"" + name + "\"");
}

// Registry names accepted by evaluate_bound, sorted.
inline const std::vector<std::string>& bound_names() {
  static const std::vector<std::string> names = {
      "abelian_height_difference", "conductor_exponent", "disc_from_conductor",
      "gl2_finiteness", "gl2_height", "gl2_isogeny_degree",
      "gl2_isogeny_height", "gl2_quotient_finiteness",
      "gl2_quotient_isogenies", "gl2_semistable", "height_from_conductor",
      "height_from_conductor_poly", "isogeny_height_shift",
      "jacobian_height_full", "jacobian_height_j0", "jacobian_height_j1",
      "kappa", "moduli_height", "modular_degree_index", "modular_degree_log",
      "modular_degree_refined", "modular_genus", "mordell_count",
      "mordell_height", "nu_0", "nu_S", "parshin_class_conductor",
      "parshin_legendre_conductor", "parshin_mordell_conductor",
      "parshin_mordell_general", "shafarevich_count", "shafarevich_height",
      "sunit_count", "sunit_exponent", "sunit_height"};
  return names;
}

}  // namespace effdio
