#pragma once
// JSON wire formats for the library's public types.
//
// Conventions: integers with absolute value below 2^53 are emitted as JSON
// numbers (exactly representable everywhere); larger integers become
// decimal strings. Reals are always decimal strings, printed by MPFR with
// enough digits to recover the value exactly, so output is deterministic
// for a given value and precision and never a lossy binary-float literal.

#include <string>
#include <utility>
#include <vector>

#include <gmpxx.h>
#include <mpfr.h>

#include "json.hpp"

#include "effdio/analytic.hpp"
#include "effdio/bounds.hpp"
#include "effdio/parshin.hpp"
#include "effdio/prime_set.hpp"
#include "effdio/rational.hpp"
#include "effdio/real.hpp"
#include "effdio/solvers.hpp"
#include "effdio/tate.hpp"
#include "effdio/weierstrass.hpp"

namespace effdio {

using Json = nlohmann::ordered_json;

inline Json json_integer(const mpz_class& z) {
  static const mpz_class kTwo53("9007199254740992");
  if (::abs(z) < kTwo53) return Json(static_cast<std::int64_t>(z.get_si()));
  return Json(z.get_str());
}

inline std::string real_string(const Real& r) {
  char* s = nullptr;
  mpfr_asprintf(&s, "%Re", r.raw());
  std::string out(s);
  mpfr_free_str(s);
  return out;
}

inline Json to_json(const WeierstrassModel& w) {
  return Json::array({format_rational(w.a1), format_rational(w.a2),
                      format_rational(w.a3), format_rational(w.a4),
                      format_rational(w.a6)});
}

inline Json to_json(const CurveInvariants& inv) {
  Json j;
  j["b2"] = format_rational(inv.b2);
  j["b4"] = format_rational(inv.b4);
  j["b6"] = format_rational(inv.b6);
  j["b8"] = format_rational(inv.b8);
  j["c4"] = format_rational(inv.c4);
  j["c6"] = format_rational(inv.c6);
  j["discriminant"] = format_rational(inv.disc);
  j["j"] = format_rational(inv.j);
  return j;
}

inline Json to_json(const LocalReductionData& loc) {
  Json j;
  j["p"] = json_integer(loc.p);
  j["conductor_exponent"] = loc.f;
  j["minimal_discriminant_valuation"] = loc.v_delta_min;
  j["components"] = loc.components;
  j["kodaira"] = loc.kodaira;
  j["reduction"] = to_string(loc.kind);
  return j;
}

inline Json to_json(const GlobalCurveData& data) {
  Json j;
  j["conductor"] = json_integer(data.conductor);
  j["minimal_discriminant"] = json_integer(data.minimal_discriminant);
  Json locals = Json::array();
  for (const LocalReductionData& loc : data.locals) locals.push_back(to_json(loc));
  j["locals"] = std::move(locals);
  return j;
}

inline Json to_json(const BoundValue& bv) {
  Json j;
  j["name"] = bv.name;
  j["paper_anchor"] = bv.paper_anchor;
  j["inputs"] = bv.inputs;
  if (bv.log10_scale) {
    j["log10_value"] = real_string(bv.value);
  } else if (bv.exact) {
    j["value"] = json_integer(bv.exact_value);
  } else {
    j["value"] = real_string(bv.value);
  }
  j["rounding"] = "up";
  return j;
}

inline Json to_json(const HeightReport& rep) {
  Json j;
  j["h_relative"] = real_string(rep.h_relative);
  j["h_stable"] = real_string(rep.h_stable);
  Json tau;
  tau["re"] = real_string(rep.tau.tau.re);
  tau["im"] = real_string(rep.tau.tau.im);
  tau["precision_bits"] = rep.tau.precision_bits;
  tau["error_bound"] = real_string(rep.tau.error_bound);
  j["tau"] = std::move(tau);
  j["minimal_discriminant"] = json_integer(rep.delta_E);
  j["unstable_correction"] = real_string(rep.unstable_correction);
  j["error_bound"] = real_string(rep.error_bound);
  return j;
}

inline Json to_json(const ConductorCheck& chk) {
  Json j;
  j["curve"] = to_json(chk.curve);
  j["conductor"] = json_integer(chk.data.conductor);
  j["bound"] = json_integer(chk.bound);
  j["ok"] = chk.ok;
  return j;
}

inline Json to_json(const CubicForm& f) {
  return Json::array({json_integer(f.p()), json_integer(f.q()),
                      json_integer(f.r()), json_integer(f.s())});
}

inline Json json_prime_set(const PrimeSet& S) {
  Json arr = Json::array();
  for (const mpz_class& p : S.primes()) arr.push_back(json_integer(p));
  return arr;
}

inline Json to_json(const SolutionCertificate& cert) {
  Json equation;
  equation["type"] = cert.kind;
  if (cert.kind == "sunit") {
    equation["S"] = json_prime_set(cert.S);
  } else if (cert.kind == "mordell") {
    equation["a"] = format_rational(cert.a);
    equation["S"] = json_prime_set(cert.S);
  } else {
    Json f = Json::array();
    for (const mpz_class& c : cert.form) f.push_back(json_integer(c));
    equation["f"] = std::move(f);
    equation["m"] = json_integer(cert.m);
  }
  Json j;
  j["equation"] = std::move(equation);
  j["mode"] = cert.mode == CertificateMode::certified_complete ? "certified_complete"
                                                               : "bounded";
  j["ceiling"] = real_string(cert.search_ceiling);
  j["paper_bound"] = to_json(cert.paper_bound);
  Json sols = Json::array();
  for (const auto& [x, y] : cert.solutions) {
    sols.push_back(Json::array({format_rational(x), format_rational(y)}));
  }
  j["solutions"] = std::move(sols);
  j["checks_passed"] = cert.checks_passed;
  j["count_bound"] = to_json(cert.count_bound);
  return j;
}

}  // namespace effdio
