// Exact rational arithmetic helpers: parsing, formatting, p-adic valuations,
// Weil heights, and S-unit membership.
//
// Rationals are GMP mpq_class values kept in lowest terms with positive
// denominator (construction helpers canonicalize). Heights are returned as
// arbitrary-precision reals at a caller-chosen precision and rounding mode;
// the default follows the library convention of round-to-nearest at 128 bits.

#pragma once

#include <gmpxx.h>

#include <string>
#include <vector>

#include "effdio/errors.hpp"
#include "effdio/real.hpp"

namespace effdio {

using Rational = mpq_class;

// Builds num/den in canonical form. Throws DomainError for den = 0.
inline Rational make_rational(const mpz_class& num, const mpz_class& den) {
  if (den == 0) throw DomainError("rational with zero denominator");
  Rational q(num, den);
  q.canonicalize();
  return q;
}

// Parses "p", "-p", or "p/q" (decimal digits only). Throws DomainError on
// malformed input or zero denominator.
inline Rational parse_rational(const std::string& s) {
  if (s.empty()) throw DomainError("empty rational literal");
  std::size_t slash = s.find('/');
  auto is_int = [](const std::string& t) {
    if (t.empty()) return false;
    std::size_t i = (t[0] == '-' || t[0] == '+') ? 1 : 0;
    if (i == t.size()) return false;
    for (; i < t.size(); ++i) {
      if (t[i] < '0' || t[i] > '9') return false;
    }
    return true;
  };
  std::string num_part = slash == std::string::npos ? s : s.substr(0, slash);
  std::string den_part = slash == std::string::npos ? "1" : s.substr(slash + 1);
  if (!is_int(num_part) || !is_int(den_part)) {
    throw DomainError("unparseable rational literal: \"" + s + "\"");
  }
  return make_rational(mpz_class(num_part), mpz_class(den_part));
}

// Canonical "p" / "p/q" rendering (lowest terms, positive denominator).
inline std::string format_rational(const Rational& q) { return q.get_str(); }

// ord_p of a nonzero integer (number of factors p).
inline unsigned long valuation_z(const mpz_class& n, const mpz_class& p) {
  if (n == 0) throw DomainError("valuation of zero");
  mpz_class left;
  return mpz_remove(left.get_mpz_t(), n.get_mpz_t(), p.get_mpz_t());
}

// ord_p of a nonzero rational: ord_p(num) - ord_p(den).
inline long valuation(const Rational& q, const mpz_class& p) {
  if (q == 0) throw DomainError("valuation of zero");
  return static_cast<long>(valuation_z(q.get_num(), p)) -
         static_cast<long>(valuation_z(q.get_den(), p));
}

// Absolute logarithmic Weil height: log max(|num|, den) in lowest terms.
inline Real weil_height(const Rational& q, mpfr_prec_t prec = 128,
                        mpfr_rnd_t rnd = MPFR_RNDN) {
  if (q == 0) return Real(prec);
  mpz_class n = ::abs(q.get_num());
  const mpz_class& d = q.get_den();
  const mpz_class& m = n > d ? n : d;
  if (m == 1) return Real(prec);
  return log(Real::of(m, prec, rnd), rnd);
}

// The multiplicative size exp(h(q)) as an exact integer: max(|num|, den).
inline mpz_class weil_size(const Rational& q) {
  if (q == 0) return mpz_class(1);
  mpz_class n = ::abs(q.get_num());
  return n > q.get_den() ? n : q.get_den();
}

// Affine vector height of a tuple: clear the common denominator L so that
// (L*q_1, ..., L*q_k, L) are coprime integers, then take
// log max(1, |entries|, L). Agrees with weil_height on singletons and is 0
// on the all-zero tuple.
inline Real weil_height_vector(const std::vector<Rational>& v,
                               mpfr_prec_t prec = 128,
                               mpfr_rnd_t rnd = MPFR_RNDN) {
  if (v.empty()) throw DomainError("vector height of empty tuple");
  mpz_class L(1);
  for (const Rational& q : v) mpz_lcm(L.get_mpz_t(), L.get_mpz_t(), q.get_den().get_mpz_t());
  mpz_class g = L;
  std::vector<mpz_class> cleared;
  cleared.reserve(v.size());
  for (const Rational& q : v) {
    mpz_class z = q.get_num() * (L / q.get_den());
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), z.get_mpz_t());
    cleared.push_back(std::move(z));
  }
  mpz_class m = L / g;
  for (mpz_class& z : cleared) {
    z = ::abs(z) / g;
    if (z > m) m = z;
  }
  if (m <= 1) return Real(prec);
  return log(Real::of(m, prec, rnd), rnd);
}

// True iff q != 0 and all primes of numerator and denominator lie in S
// (passed as a plain sorted prime list; PrimeSet forwards here). Uses
// divide-out rather than factorization, so it never exhausts a budget.
inline bool is_s_unit_z(const mpz_class& n, const std::vector<mpz_class>& s_primes) {
  mpz_class m = ::abs(n);
  if (m == 0) return false;
  for (const mpz_class& p : s_primes) {
    mpz_class reduced;
    mpz_remove(reduced.get_mpz_t(), m.get_mpz_t(), p.get_mpz_t());
    m = reduced;
  }
  return m == 1;
}

inline bool is_s_unit(const Rational& q, const std::vector<mpz_class>& s_primes) {
  if (q == 0) return false;
  return is_s_unit_z(q.get_num(), s_primes) && is_s_unit_z(q.get_den(), s_primes);
}

// True iff q is an S-integer: every prime of the denominator lies in S.
inline bool is_s_integer(const Rational& q, const std::vector<mpz_class>& s_primes) {
  if (q == 0) return true;
  return is_s_unit_z(q.get_den(), s_primes);
}

}  // namespace effdio
