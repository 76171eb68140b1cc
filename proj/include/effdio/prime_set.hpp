// Finite sets of rational primes and their derived products.
//
// A PrimeSet S carries N_S = prod_{p in S} p (empty product = 1) and
// n_S = 2^7 * N_S, the two quantities feeding the S-unit bounds.

#pragma once

#include <gmpxx.h>

#include <algorithm>
#include <string>
#include <vector>

#include "effdio/errors.hpp"
#include "effdio/factor.hpp"

namespace effdio {

class PrimeSet {
 public:
  PrimeSet() = default;

  // Validates primality, sorts, and collapses duplicates.
  explicit PrimeSet(std::vector<mpz_class> primes) : primes_(std::move(primes)) {
    for (const mpz_class& p : primes_) {
      if (!is_prime(p)) {
        throw DomainError("PrimeSet element is not prime: " + p.get_str());
      }
    }
    std::sort(primes_.begin(), primes_.end());
    primes_.erase(std::unique(primes_.begin(), primes_.end()), primes_.end());
  }

  // Parses a comma-separated prime list; "" or "{}" denotes the empty set.
  // Braces are optional: "2,3", "{2,3}", and "{}" are all accepted.
  static PrimeSet parse(const std::string& text) {
    std::string s = text;
    if (s.size() >= 2 && s.front() == '{' && s.back() == '}') {
      s = s.substr(1, s.size() - 2);
    }
    std::vector<mpz_class> ps;
    std::size_t pos = 0;
    while (pos < s.size()) {
      std::size_t comma = s.find(',', pos);
      std::string tok = s.substr(pos, comma == std::string::npos ? std::string::npos
                                                                 : comma - pos);
      if (tok.empty()) throw DomainError("empty prime token in \"" + text + "\"");
      for (char c : tok) {
        if (c < '0' || c > '9') {
          throw DomainError("bad prime token \"" + tok + "\"");
        }
      }
      ps.emplace_back(tok);
      if (comma == std::string::npos) break;
      pos = comma + 1;
    }
    return PrimeSet(std::move(ps));
  }

  const std::vector<mpz_class>& primes() const { return primes_; }
  bool empty() const { return primes_.empty(); }
  std::size_t size() const { return primes_.size(); }

  bool contains(const mpz_class& p) const {
    return std::binary_search(primes_.begin(), primes_.end(), p);
  }

  // N_S = product of the members (1 for the empty set).
  mpz_class N() const {
    mpz_class v(1);
    for (const mpz_class& p : primes_) v *= p;
    return v;
  }

  // n_S = 2^7 * N_S.
  mpz_class n_small() const { return 128 * N(); }

  // "{2,3}" (used when echoing inputs into bound certificates).
  std::string brace_str() const {
    std::string out = "{";
    for (std::size_t i = 0; i < primes_.size(); ++i) {
      if (i) out += ",";
      out += primes_[i].get_str();
    }
    return out + "}";
  }

 private:
  std::vector<mpz_class> primes_;
};

}  // namespace effdio
