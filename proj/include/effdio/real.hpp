// Arbitrary-precision real numbers: a value-semantic RAII wrapper over MPFR.
//
// Every arithmetic helper takes an explicit MPFR rounding mode, so callers
// choose between round-to-nearest (analytic computations that carry their own
// error accounting) and directed rounding (certified one-sided bounds). The
// result of a binary operation carries the larger of the two operand
// precisions. Convenience *_up helpers (always MPFR_RNDU) keep the
// bound-evaluation code visibly one-sided.

#pragma once

#include <gmpxx.h>
#include <mpfr.h>

#include <string>
#include <utility>

#include "effdio/errors.hpp"

namespace effdio {

class Real {
 public:
  // Value 0 at the given precision.
  explicit Real(mpfr_prec_t prec = 128) {
    mpfr_init2(v_, clamp_prec(prec));
    mpfr_set_zero(v_, 1);
  }

  Real(const Real& o) {
    mpfr_init2(v_, mpfr_get_prec(o.v_));
    mpfr_set(v_, o.v_, MPFR_RNDN);
  }

  Real(Real&& o) noexcept {
    mpfr_init2(v_, mpfr_get_prec(o.v_));
    mpfr_swap(v_, o.v_);
  }

  Real& operator=(const Real& o) {
    if (this != &o) {
      mpfr_set_prec(v_, mpfr_get_prec(o.v_));
      mpfr_set(v_, o.v_, MPFR_RNDN);
    }
    return *this;
  }

  Real& operator=(Real&& o) noexcept {
    if (this != &o) mpfr_swap(v_, o.v_);
    return *this;
  }

  ~Real() { mpfr_clear(v_); }

  // ---- factories ------------------------------------------------------

  static Real of(long x, mpfr_prec_t prec) {
    Real r(prec);
    mpfr_set_si(r.v_, x, MPFR_RNDN);  // exact for |x| < 2^prec
    return r;
  }

  static Real of(const mpz_class& z, mpfr_prec_t prec, mpfr_rnd_t rnd) {
    Real r(prec);
    mpfr_set_z(r.v_, z.get_mpz_t(), rnd);
    return r;
  }

  static Real of(const mpq_class& q, mpfr_prec_t prec, mpfr_rnd_t rnd) {
    Real r(prec);
    mpfr_set_q(r.v_, q.get_mpq_t(), rnd);
    return r;
  }

  static Real of_double(double x, mpfr_prec_t prec) {
    Real r(prec);
    mpfr_set_d(r.v_, x, MPFR_RNDN);
    return r;
  }

  // Parses a decimal string (integer, fixed, or scientific notation).
  static Real parse(const std::string& s, mpfr_prec_t prec, mpfr_rnd_t rnd) {
    Real r(prec);
    if (s.empty() || mpfr_set_str(r.v_, s.c_str(), 10, rnd) != 0) {
      throw DomainError("unparseable real literal: \"" + s + "\"");
    }
    return r;
  }

  static Real pi(mpfr_prec_t prec, mpfr_rnd_t rnd) {
    Real r(prec);
    mpfr_const_pi(r.v_, rnd);
    return r;
  }

  // 2^e (exact).
  static Real pow2(long e, mpfr_prec_t prec) {
    Real r(prec);
    mpfr_set_si_2exp(r.v_, 1, static_cast<mpfr_exp_t>(e), MPFR_RNDN);
    return r;
  }

  // ---- observers ------------------------------------------------------

  mpfr_prec_t prec() const { return mpfr_get_prec(v_); }
  mpfr_ptr raw() { return v_; }
  mpfr_srcptr raw() const { return v_; }

  bool is_zero() const { return mpfr_zero_p(v_) != 0; }
  bool is_finite() const { return mpfr_number_p(v_) != 0; }
  int sgn() const { return mpfr_sgn(v_); }

  double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }

  // Largest integer <= value / smallest integer >= value.
  mpz_class floor_z() const {
    mpz_class z;
    mpfr_get_z(z.get_mpz_t(), v_, MPFR_RNDD);
    return z;
  }
  mpz_class ceil_z() const {
    mpz_class z;
    mpfr_get_z(z.get_mpz_t(), v_, MPFR_RNDU);
    return z;
  }

  // Exact comparisons (no rounding involved).
  int cmp(const Real& o) const { return mpfr_cmp(v_, o.v_); }
  bool operator<(const Real& o) const { return cmp(o) < 0; }
  bool operator<=(const Real& o) const { return cmp(o) <= 0; }
  bool operator>(const Real& o) const { return cmp(o) > 0; }
  bool operator>=(const Real& o) const { return cmp(o) >= 0; }
  bool operator==(const Real& o) const { return cmp(o) == 0; }
  bool cmp_si_le(long x) const { return mpfr_cmp_si(v_, x) <= 0; }

  // Decimal rendering with `digits` significant digits. Uses fixed notation
  // for moderate exponents and normalized scientific notation otherwise;
  // the output is deterministic for a given (value, digits, rnd).
  std::string str(std::size_t digits = 40, mpfr_rnd_t rnd = MPFR_RNDN) const {
    if (mpfr_nan_p(v_)) return "nan";
    if (mpfr_inf_p(v_)) return sgn() < 0 ? "-inf" : "inf";
    if (is_zero()) return "0.0";
    if (digits < 2) digits = 2;
    mpfr_exp_t e = 0;
    char* raw_digits = mpfr_get_str(nullptr, &e, 10, digits, v_, rnd);
    std::string d(raw_digits);
    mpfr_free_str(raw_digits);
    std::string sign;
    if (!d.empty() && d[0] == '-') {
      sign = "-";
      d.erase(0, 1);
    }
    // d is a bare digit string; value = 0.d * 10^e.
    std::string out;
    long exp10 = static_cast<long>(e);
    if (exp10 >= 1 && exp10 <= static_cast<long>(digits)) {
      // Fixed notation with the point inside or at the end of the digits.
      out = d.substr(0, static_cast<std::size_t>(exp10));
      std::string frac = d.substr(static_cast<std::size_t>(exp10));
      out += "." + (frac.empty() ? "0" : frac);
    } else if (exp10 <= 0 && exp10 >= -4) {
      out = "0." + std::string(static_cast<std::size_t>(-exp10), '0') + d;
    } else {
      out = d.substr(0, 1) + "." + (d.size() > 1 ? d.substr(1) : "0") + "e" +
            (exp10 - 1 >= 0 ? "+" : "") + std::to_string(exp10 - 1);
    }
    return sign + out;
  }

 private:
  static mpfr_prec_t clamp_prec(mpfr_prec_t p) {
    if (p < MPFR_PREC_MIN) return MPFR_PREC_MIN;
    return p;
  }

  mpfr_t v_;
};

namespace detail {
inline mpfr_prec_t join_prec(const Real& a, const Real& b) {
  return a.prec() > b.prec() ? a.prec() : b.prec();
}
}  // namespace detail

// ---- explicit-rounding arithmetic --------------------------------------

inline Real add(const Real& a, const Real& b, mpfr_rnd_t rnd) {
  Real r(detail::join_prec(a, b));
  mpfr_add(r.raw(), a.raw(), b.raw(), rnd);
  return r;
}

inline Real sub(const Real& a, const Real& b, mpfr_rnd_t rnd) {
  Real r(detail::join_prec(a, b));
  mpfr_sub(r.raw(), a.raw(), b.raw(), rnd);
  return r;
}

inline Real mul(const Real& a, const Real& b, mpfr_rnd_t rnd) {
  Real r(detail::join_prec(a, b));
  mpfr_mul(r.raw(), a.raw(), b.raw(), rnd);
  return r;
}

inline Real div(const Real& a, const Real& b, mpfr_rnd_t rnd) {
  Real r(detail::join_prec(a, b));
  mpfr_div(r.raw(), a.raw(), b.raw(), rnd);
  return r;
}

inline Real neg(const Real& a) {
  Real r(a.prec());
  mpfr_neg(r.raw(), a.raw(), MPFR_RNDN);  // exact
  return r;
}

inline Real abs(const Real& a) {
  Real r(a.prec());
  mpfr_abs(r.raw(), a.raw(), MPFR_RNDN);  // exact
  return r;
}

inline Real sqr(const Real& a, mpfr_rnd_t rnd) {
  Real r(a.prec());
  mpfr_sqr(r.raw(), a.raw(), rnd);
  return r;
}

inline Real sqrt(const Real& a, mpfr_rnd_t rnd) {
  Real r(a.prec());
  mpfr_sqrt(r.raw(), a.raw(), rnd);
  return r;
}

inline Real log(const Real& a, mpfr_rnd_t rnd) {
  Real r(a.prec());
  mpfr_log(r.raw(), a.raw(), rnd);
  return r;
}

inline Real log10(const Real& a, mpfr_rnd_t rnd) {
  Real r(a.prec());
  mpfr_log10(r.raw(), a.raw(), rnd);
  return r;
}

inline Real exp(const Real& a, mpfr_rnd_t rnd) {
  Real r(a.prec());
  mpfr_exp(r.raw(), a.raw(), rnd);
  return r;
}

inline Real sin(const Real& a, mpfr_rnd_t rnd) {
  Real r(a.prec());
  mpfr_sin(r.raw(), a.raw(), rnd);
  return r;
}

inline Real cos(const Real& a, mpfr_rnd_t rnd) {
  Real r(a.prec());
  mpfr_cos(r.raw(), a.raw(), rnd);
  return r;
}

inline Real pow_ui(const Real& a, unsigned long e, mpfr_rnd_t rnd) {
  Real r(a.prec());
  mpfr_pow_ui(r.raw(), a.raw(), e, rnd);
  return r;
}

inline Real pow_z(const Real& a, const mpz_class& e, mpfr_rnd_t rnd) {
  Real r(a.prec());
  mpfr_pow_z(r.raw(), a.raw(), e.get_mpz_t(), rnd);
  return r;
}

inline Real hypot(const Real& a, const Real& b, mpfr_rnd_t rnd) {
  Real r(detail::join_prec(a, b));
  mpfr_hypot(r.raw(), a.raw(), b.raw(), rnd);
  return r;
}

inline Real mul_si(const Real& a, long k, mpfr_rnd_t rnd) {
  Real r(a.prec());
  mpfr_mul_si(r.raw(), a.raw(), k, rnd);
  return r;
}

inline Real div_si(const Real& a, long k, mpfr_rnd_t rnd) {
  Real r(a.prec());
  mpfr_div_si(r.raw(), a.raw(), k, rnd);
  return r;
}

inline Real add_si(const Real& a, long k, mpfr_rnd_t rnd) {
  Real r(a.prec());
  mpfr_add_si(r.raw(), a.raw(), k, rnd);
  return r;
}

inline Real max(const Real& a, const Real& b) { return a < b ? b : a; }
inline Real min(const Real& a, const Real& b) { return a < b ? a : b; }

// ---- round-to-nearest operator sugar (analytic code) -------------------

inline Real operator+(const Real& a, const Real& b) { return add(a, b, MPFR_RNDN); }
inline Real operator-(const Real& a, const Real& b) { return sub(a, b, MPFR_RNDN); }
inline Real operator*(const Real& a, const Real& b) { return mul(a, b, MPFR_RNDN); }
inline Real operator/(const Real& a, const Real& b) { return div(a, b, MPFR_RNDN); }
inline Real operator-(const Real& a) { return neg(a); }

// ---- certified upward helpers (bounds code) -----------------------------

inline Real add_up(const Real& a, const Real& b) { return add(a, b, MPFR_RNDU); }
inline Real sub_up(const Real& a, const Real& b) { return sub(a, b, MPFR_RNDU); }
inline Real mul_up(const Real& a, const Real& b) { return mul(a, b, MPFR_RNDU); }
inline Real div_up(const Real& a, const Real& b) { return div(a, b, MPFR_RNDU); }
inline Real sqr_up(const Real& a) { return sqr(a, MPFR_RNDU); }
inline Real sqrt_up(const Real& a) { return sqrt(a, MPFR_RNDU); }
inline Real log_up(const Real& a) { return log(a, MPFR_RNDU); }
inline Real log10_up(const Real& a) { return log10(a, MPFR_RNDU); }
inline Real exp_up(const Real& a) { return exp(a, MPFR_RNDU); }

}  // namespace effdio
