// Complex numbers over effdio::Real.
//
// A minimal value type used by the analytic module (period lattices,
// q-expansions). All operations round to nearest at the operands' working
// precision; error accumulation is handled by the callers' own first-order
// accounting, with guard bits added at the working-precision level.

#pragma once

#include <mpfr.h>

#include "effdio/real.hpp"

namespace effdio {

struct Complex {
  Real re, im;

  explicit Complex(mpfr_prec_t prec = 128) : re(prec), im(prec) {}
  Complex(Real r, Real i) : re(std::move(r)), im(std::move(i)) {}

  mpfr_prec_t prec() const { return re.prec() > im.prec() ? re.prec() : im.prec(); }
  bool is_zero() const { return re.is_zero() && im.is_zero(); }

  static Complex of(long x, long y, mpfr_prec_t prec) {
    return Complex(Real::of(x, prec), Real::of(y, prec));
  }
};

inline Complex operator+(const Complex& a, const Complex& b) {
  return Complex(a.re + b.re, a.im + b.im);
}

inline Complex operator-(const Complex& a, const Complex& b) {
  return Complex(a.re - b.re, a.im - b.im);
}

inline Complex operator-(const Complex& a) { return Complex(-a.re, -a.im); }

inline Complex operator*(const Complex& a, const Complex& b) {
  return Complex(a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re);
}

inline Complex operator*(const Real& s, const Complex& a) {
  return Complex(s * a.re, s * a.im);
}

inline Complex operator/(const Complex& a, const Complex& b) {
  Real d = b.re * b.re + b.im * b.im;
  return Complex((a.re * b.re + a.im * b.im) / d, (a.im * b.re - a.re * b.im) / d);
}

// |z| computed without overflow at intermediate steps.
inline Real abs(const Complex& z) { return hypot(z.re, z.im, MPFR_RNDN); }

// |z|^2 (exactly re^2 + im^2 rounded to nearest).
inline Real norm2(const Complex& z) { return z.re * z.re + z.im * z.im; }

// Principal square root: the branch with re(sqrt) >= 0, and im(sqrt) >= 0
// when re(sqrt) = 0.
inline Complex sqrt(const Complex& z) {
  mpfr_prec_t p = z.prec();
  if (z.im.is_zero()) {
    if (z.re.sgn() >= 0) {
      return Complex(sqrt(z.re, MPFR_RNDN), Real(p));
    }
    return Complex(Real(p), sqrt(neg(z.re), MPFR_RNDN));
  }
  Real r = abs(z);
  // w = sqrt((r + |re|)/2); the dominant component, computed cancellation-free.
  Real w = sqrt(div_si(r + abs(z.re), 2, MPFR_RNDN), MPFR_RNDN);
  Real half_im_over_w = div_si(z.im / w, 2, MPFR_RNDN);
  if (z.re.sgn() >= 0) {
    return Complex(w, half_im_over_w);
  }
  // re < 0: |im|/(2w) carries the real part; sign of im fixes the branch.
  Real re_part = abs(half_im_over_w);
  return Complex(re_part, z.im.sgn() >= 0 ? w : -w);
}

}  // namespace effdio
