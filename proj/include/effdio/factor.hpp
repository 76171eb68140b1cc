// Integer factorization: trial division, deterministic Miller-Rabin
// primality (13 prime bases, valid below 3.317e24; strong probable-prime
// testing above), and Brent's cycle-finding variant of Pollard rho with a
// deterministic parameter schedule and an explicit iteration budget.
//
// The discriminants and conductors this library factors are smooth or
// small, so trial division does almost all the work; rho exists for the
// occasional large semiprime cofactor and throws FactorizationExhausted
// instead of running unbounded.

#pragma once

#include <gmpxx.h>

#include <algorithm>
#include <cstdint>
#include <utility>
#include <vector>

#include "effdio/errors.hpp"

namespace effdio {

struct FactorOptions {
  unsigned long trial_limit = 1000000;     // trial-divide by primes below this
  std::uint64_t rho_iterations = 50000000; // total rho f-evaluations allowed
};

struct Factorization {
  int sign = 1;                                          // +1 or -1
  std::vector<std::pair<mpz_class, unsigned long>> factors;  // (p, e), p ascending

  // Multiplies the factorization back together.
  mpz_class value() const {
    mpz_class v(sign);
    for (const auto& [p, e] : factors) {
      mpz_class pe;
      mpz_pow_ui(pe.get_mpz_t(), p.get_mpz_t(), e);
      v *= pe;
    }
    return v;
  }
};

namespace detail {

// Primes below 10^6, built once (thread-safe function-local static).
inline const std::vector<std::uint32_t>& small_primes() {
  static const std::vector<std::uint32_t> primes = [] {
    const std::uint32_t limit = 1000000;
    std::vector<bool> composite(limit, false);
    std::vector<std::uint32_t> out;
    for (std::uint32_t i = 2; i < limit; ++i) {
      if (composite[i]) continue;
      out.push_back(i);
      for (std::uint64_t j = static_cast<std::uint64_t>(i) * i; j < limit; j += i) {
        composite[static_cast<std::size_t>(j)] = true;
      }
    }
    return out;
  }();
  return primes;
}

// One strong-pseudoprime round for odd n = d * 2^s + 1.
inline bool miller_rabin_round(const mpz_class& n, const mpz_class& d,
                               unsigned long s, unsigned long base) {
  mpz_class a(base), x;
  mpz_powm(x.get_mpz_t(), a.get_mpz_t(), d.get_mpz_t(), n.get_mpz_t());
  if (x == 1 || x == n - 1) return true;
  for (unsigned long i = 1; i < s; ++i) {
    x = (x * x) % n;
    if (x == n - 1) return true;
  }
  return false;
}

}  // namespace detail

// Deterministic below the Sorenson-Webster threshold 3.3 * 10^24 (strong
// pseudoprime to the first 13 prime bases); BPSW-backed probable-prime
// testing from GMP above it.
inline bool is_prime(const mpz_class& n) {
  if (n < 2) return false;
  static const unsigned long bases[] = {2,  3,  5,  7,  11, 13, 17,
                                        19, 23, 29, 31, 37, 41};
  for (unsigned long b : bases) {
    if (n == b) return true;
    if (mpz_divisible_ui_p(n.get_mpz_t(), b)) return false;
  }
  static const mpz_class deterministic_limit("3317044064679887385961981");
  if (n >= deterministic_limit) {
    return mpz_probab_prime_p(n.get_mpz_t(), 40) != 0;
  }
  mpz_class d = n - 1;
  unsigned long s = mpz_remove(d.get_mpz_t(), d.get_mpz_t(), mpz_class(2).get_mpz_t());
  for (unsigned long b : bases) {
    if (!detail::miller_rabin_round(n, d, s, b)) return false;
  }
  return true;
}

namespace detail {

// Brent's variant of Pollard rho with polynomial x^2 + c. The parameter c
// walks 1, 2, 3, ... so the whole procedure is deterministic. Returns a
// nontrivial factor of composite odd n, consuming from `budget`; throws
// FactorizationExhausted when the budget runs out.
inline mpz_class brent_rho(const mpz_class& n, std::uint64_t& budget) {
  for (unsigned long c = 1;; ++c) {
    mpz_class y(2), g(1), q(1), x, ys;
    unsigned long r = 1;
    const unsigned long m = 128;
    while (g == 1) {
      x = y;
      for (unsigned long i = 0; i < r; ++i) {
        if (budget == 0) throw FactorizationExhausted("rho budget exhausted");
        --budget;
        y = (y * y + c) % n;
      }
      for (unsigned long k = 0; k < r && g == 1; k += m) {
        ys = y;
        unsigned long steps = std::min(m, r - k);
        for (unsigned long i = 0; i < steps; ++i) {
          if (budget == 0) throw FactorizationExhausted("rho budget exhausted");
          --budget;
          y = (y * y + c) % n;
          mpz_class diff = x - y;
          q = (q * ::abs(diff)) % n;
        }
        mpz_gcd(g.get_mpz_t(), q.get_mpz_t(), n.get_mpz_t());
      }
      r *= 2;
    }
    if (g == n) {
      // Backtrack one step at a time from the saved point.
      g = 1;
      while (g == 1) {
        if (budget == 0) throw FactorizationExhausted("rho budget exhausted");
        --budget;
        ys = (ys * ys + c) % n;
        mpz_class diff = x - ys;
        mpz_class ad = ::abs(diff);
        mpz_gcd(g.get_mpz_t(), ad.get_mpz_t(), n.get_mpz_t());
      }
    }
    if (g != n) return g;  // nontrivial split found
    // Degenerate cycle for this c; retry with the next polynomial.
  }
}

}  // namespace detail

// Exact factorization of a nonzero integer with deterministic output order.
inline Factorization factorize(const mpz_class& n,
                               const FactorOptions& opts = FactorOptions{}) {
  if (n == 0) throw DomainError("factorize(0)");
  Factorization out;
  out.sign = n < 0 ? -1 : 1;
  mpz_class m = ::abs(n);
  std::vector<std::pair<mpz_class, unsigned long>> found;
  for (std::uint32_t p : detail::small_primes()) {
    if (p >= opts.trial_limit) break;
    if (mpz_class(p) * p > m) break;
    if (mpz_divisible_ui_p(m.get_mpz_t(), p)) {
      mpz_class reduced;
      unsigned long e =
          mpz_remove(reduced.get_mpz_t(), m.get_mpz_t(), mpz_class(p).get_mpz_t());
      m = reduced;
      found.emplace_back(mpz_class(p), e);
    }
  }
  std::uint64_t budget = opts.rho_iterations;
  std::vector<mpz_class> pending;
  if (m > 1) pending.push_back(m);
  while (!pending.empty()) {
    mpz_class c = pending.back();
    pending.pop_back();
    if (is_prime(c)) {
      found.emplace_back(c, 1);
      continue;
    }
    mpz_class d = detail::brent_rho(c, budget);
    pending.push_back(d);
    pending.push_back(c / d);
  }
  std::sort(found.begin(), found.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  for (auto& [p, e] : found) {
    if (!out.factors.empty() && out.factors.back().first == p) {
      out.factors.back().second += e;
    } else {
      out.factors.emplace_back(std::move(p), e);
    }
  }
  return out;
}

// Product of the distinct primes dividing |n|; radical(+-1) = 1.
inline mpz_class radical(const mpz_class& n,
                         const FactorOptions& opts = FactorOptions{}) {
  Factorization f = factorize(n, opts);
  mpz_class r(1);
  for (const auto& [p, e] : f.factors) r *= p;
  return r;
}

}  // namespace effdio
