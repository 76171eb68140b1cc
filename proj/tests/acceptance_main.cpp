// Acceptance suite: one criterion per line, [PASS]/[FAIL] with timing,
// exit status 1 if any criterion fails.
//
//  1. single-prime S-unit resolution at the certified ceiling
//  2. S-unit output equals an independent brute-force enumeration
//  3. every solution from criterion 2 passes the Frey conductor check
//  4. Mordell resolution at desk scale + honest bounded certificates
//  5. height-conductor inequalities and Faltings heights over the corpus
//  6. the archimedean discriminant bound on random fundamental-domain points
//  7. conductor exponent conformance (2-adic, 3-adic, tame)
//  8. bound evaluators are monotone under precision refinement and dominate
//     the observed solution counts
//  9. the cubic-to-Mordell reduction identity, symbolically and at random
// 10. repeated CLI invocations are byte-identical

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <sys/wait.h>

#include "effdio/serde.hpp"
#include "reference_data.hpp"

#ifndef EFFDIO_CLI_PATH
#error "EFFDIO_CLI_PATH must point at the CLI binary"
#endif

namespace {

using namespace effdio;
using Clock = std::chrono::steady_clock;

// ---------------------------------------------------------------------------
// harness
// ---------------------------------------------------------------------------

struct Failure {
  std::string detail;
};

void require(bool ok, const std::string& what) {
  if (!ok) throw Failure{what};
}

struct CliResult {
  std::string out;
  int exit_code = -1;
};

CliResult run_cli(const std::string& args) {
  std::string cmd = EFFDIO_CLI_PATH " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  require(pipe != nullptr, "popen failed for: " + cmd);
  CliResult res;
  char buf[4096];
  std::size_t n = 0;
  while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) res.out.append(buf, n);
  int status = pclose(pipe);
  res.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return res;
}

Json parse_doc(const std::string& text) {
  Json doc = Json::parse(text, nullptr, false);
  require(!doc.is_discarded(), "stdout is not a JSON document");
  return doc;
}

// ---------------------------------------------------------------------------
// criterion bodies (throw Failure to fail)
// ---------------------------------------------------------------------------

// 1. x + y = 1 in {2}-units at the certified ceiling: exactly three
//    solutions, certified complete, through the command-line driver.
void criterion_1() {
  CliResult res = run_cli("sunit 2");
  require(res.exit_code == 0, "exit code " + std::to_string(res.exit_code));
  Json doc = parse_doc(res.out);
  require(doc["mode"] == "certified_complete", "mode is not certified_complete");
  require(doc["solutions"] ==
              Json::parse(R"([["-1","2"],["1/2","1/2"],["2","-1"]])"),
          "solution set is not {(-1,2), (1/2,1/2), (2,-1)}");
  require(doc["checks_passed"] == true, "conformance checks did not pass");
}

// Independent brute-force enumeration of x + y = 1 in S-units with
// max(|num|, den) of both coordinates at most `cap`.
void collect_smooth(const std::vector<mpz_class>& primes, std::size_t idx,
                    const mpz_class& val, const mpz_class& cap,
                    std::vector<mpz_class>& out) {
  if (idx == primes.size()) {
    out.push_back(val);
    return;
  }
  for (mpz_class v = val; v <= cap; v *= primes[idx]) {
    collect_smooth(primes, idx + 1, v, cap, out);
  }
}

std::vector<std::pair<Rational, Rational>> sunit_brute_force(
    const PrimeSet& S, const mpz_class& cap) {
  std::vector<mpz_class> smooth;
  collect_smooth(S.primes(), 0, 1, cap, smooth);
  std::set<std::pair<Rational, Rational>> found;
  for (const mpz_class& n : smooth) {
    for (const mpz_class& d : smooth) {
      if (gcd(n, d) != 1) continue;
      for (int sign = -1; sign <= 1; sign += 2) {
        Rational x = make_rational(sign * n, d);
        if (x == 1) continue;
        Rational y = Rational(1) - x;
        if (weil_size(y) > cap) continue;
        if (!is_s_unit(y, S.primes())) continue;
        found.emplace(x, y);
      }
    }
  }
  std::vector<std::pair<Rational, Rational>> out(found.begin(), found.end());
  std::sort(out.begin(), out.end(), detail::solution_less);
  return out;
}

std::vector<SolutionCertificate> g_criterion2_certs;

// 2. solver output == brute force for S in {{2,3}, {2,5}, {2,3,5}} with
//    num, den <= 10^4 on both coordinates.
void criterion_2() {
  const mpz_class cap(10000);
  for (const char* s : {"2,3", "2,5", "2,3,5"}) {
    PrimeSet S = PrimeSet::parse(s);
    Real ceiling = detail::ulog(cap, 192);
    SolutionCertificate cert = solve_sunit(S, ceiling);
    require(!cert.budget_exhausted, std::string("budget exhausted for S={") +
                                        s + "}");
    std::vector<std::pair<Rational, Rational>> expected =
        sunit_brute_force(S, cap);
    require(cert.solutions == expected,
            std::string("solver and brute force disagree for S={") + s +
                "}: " + std::to_string(cert.solutions.size()) + " vs " +
                std::to_string(expected.size()) + " solutions");
    require(!cert.solutions.empty(), std::string("empty solution set for S={") +
                                         s + "} cannot exercise criterion 3");
    g_criterion2_certs.push_back(std::move(cert));
  }
}

// 3. every solution from criterion 2 passes the Frey conductor check:
//    the attached semistable curve has conductor dividing 2^7 N_S.
void criterion_3() {
  require(!g_criterion2_certs.empty(), "criterion 2 produced no certificates");
  int checked = 0;
  for (const SolutionCertificate& cert : g_criterion2_certs) {
    for (const auto& [x, y] : cert.solutions) {
      ConductorCheck chk = frey_conductor_check(SUnitSolution(x, y), cert.S);
      require(chk.ok, "conductor check failed at x = " + format_rational(x));
      ++checked;
    }
  }
  require(checked >= 30, "corpus unexpectedly small: " +
                             std::to_string(checked) + " solutions");
}

// 4. Mordell resolution at desk scale; the certified ceiling is out of
//    enumeration range and must yield an honest bounded certificate that
//    reports both its own ceiling and the certified bound.
void criterion_4() {
  Real ceiling = detail::ulog(mpz_class(1000), 192);
  SolutionCertificate one = solve_mordell(Rational(1), PrimeSet(), ceiling);
  Json sols = to_json(one)["solutions"];
  require(sols == Json::parse(
                      R"([["-1","0"],["0","-1"],["0","1"],["2","-3"],["2","3"]])"),
          "a = 1 solutions differ from {(-1,0), (0,+-1), (2,+-3)}");

  SolutionCertificate two = solve_mordell(Rational(-2), PrimeSet(), ceiling);
  require(to_json(two)["solutions"] == Json::parse(R"([["3","-5"],["3","5"]])"),
          "a = -2 solutions differ from {(3,+-5)}");

  for (const SolutionCertificate* cert : {&one, &two}) {
    for (const auto& [x, y] : cert->solutions) {
      ConductorCheck chk = mordell_conductor_check(
          MordellSolution(x, y, cert->a), PrimeSet());
      require(chk.ok, "Mordell conductor check failed at x = " +
                          format_rational(x));
      require(chk.data.conductor <= chk.bound, "conductor exceeds a_S");
    }
  }

  // The certified ceiling is astronomically beyond enumeration: the solver
  // must come back flagged bounded, carrying both numbers.
  SolverOptions starved;
  starved.budget = 200000;
  SolutionCertificate big = solve_mordell(Rational(1), PrimeSet(), starved);
  require(big.mode == CertificateMode::bounded,
          "starved certified-ceiling run must report mode bounded");
  require(big.budget_exhausted, "starved run must flag budget exhaustion");
  Json doc = to_json(big);
  require(doc["ceiling"].is_string() && !doc["ceiling"].get<std::string>().empty(),
          "bounded certificate must state its search ceiling");
  require(doc["paper_bound"]["value"].is_string(),
          "bounded certificate must state the certified height bound");
  require(big.paper_bound.value > Real::of(10000000L, 192),
          "certified Mordell height ceiling should exceed 10^7");
}

// 5. corpus conformance: conductors, local data, and Faltings heights match
//    the frozen oracle; h(E) and log Delta_E obey the certified
//    conductor-height inequalities.
void criterion_5() {
  const Real tol = Real::parse("1e-8", 256, MPFR_RNDN);
  int n_curves = 0;
  for (const testref::RefCurve& ref : testref::kCurves) {
    ++n_curves;
    WeierstrassModel w{parse_rational(ref.a[0]), parse_rational(ref.a[1]),
                       parse_rational(ref.a[2]), parse_rational(ref.a[3]),
                       parse_rational(ref.a[4])};
    GlobalCurveData data = conductor(w);
    require(data.conductor == mpz_class(ref.conductor),
            std::string(ref.label) + ": conductor mismatch");
    require(data.minimal_discriminant == mpz_class(ref.abs_disc_min),
            std::string(ref.label) + ": minimal discriminant mismatch");
    require(static_cast<int>(data.locals.size()) == ref.n_locals,
            std::string(ref.label) + ": local place count mismatch");
    for (int i = 0; i < ref.n_locals; ++i) {
      const testref::RefLocal& rl = ref.locals[i];
      const LocalReductionData& loc = data.locals[i];
      require(loc.p == rl.p && loc.f == rl.f && loc.v_delta_min == rl.vdelta &&
                  loc.components == rl.m && loc.kodaira == rl.kodaira &&
                  to_string(loc.kind) == rl.kind,
              std::string(ref.label) + ": local data mismatch at p = " +
                  std::to_string(rl.p));
    }

    HeightReport rep = stable_faltings_height(w, 128);
    Real dr = abs(sub(rep.h_relative, Real::parse(ref.h_rel, 256, MPFR_RNDN),
                      MPFR_RNDN));
    Real ds = abs(sub(rep.h_stable, Real::parse(ref.h_stable, 256, MPFR_RNDN),
                      MPFR_RNDN));
    require(dr <= tol && ds <= tol,
            std::string(ref.label) + ": Faltings height off oracle");

    // h(E) <= (1/4) N (log N)^2 + 9, comparing the upward-rounded left side
    // against the certified upper bound.
    ConductorHeightBounds chb = height_conductor_bounds(data.conductor, 192);
    Real h_up = add(rep.h_relative, rep.error_bound, MPFR_RNDU);
    require(h_up <= chb.height.value,
            std::string(ref.label) + ": height-conductor inequality fails");

    // log Delta_E <= 12 (h(E) + 4/3): certify with the height's error bound.
    Real lhs = log(Real::of(data.minimal_discriminant, 192, MPFR_RNDU),
                   MPFR_RNDU);
    Real h_down = sub(rep.h_relative, rep.error_bound, MPFR_RNDD);
    Real rhs = mul_si(add(h_down, div_si(Real::of(4L, 192), 3, MPFR_RNDD),
                          MPFR_RNDD),
                      12, MPFR_RNDD);
    require(lhs <= rhs,
            std::string(ref.label) + ": discriminant-height inequality fails");
  }
  require(n_curves == 25, "corpus must hold 25 curves");
}

// 6. log |(2 pi)^12 Delta(tau) im(tau)^6| <= 16 on 10^4 deterministic
//    pseudo-random points of the fundamental domain.
void criterion_6() {
  const mpfr_prec_t wp = 96;
  std::mt19937_64 rng(0xEFFD10u);
  const Real sixteen = Real::of(16L, wp);
  const Real one = Real::of(1L, wp);
  Real log_2pi = log(mul_si(Real::pi(wp, MPFR_RNDU), 2, MPFR_RNDU), MPFR_RNDU);
  for (int trial = 0; trial < 10000; ++trial) {
    // re uniform in [-1/2, 1/2] on a 2^20 grid; im = (lowest admissible
    // imaginary part) * (1 + t) with t in [0, 4], so points concentrate
    // near the floor of the domain where the bound is tight.
    long k1 = static_cast<long>(rng() % 1048577u);
    long k2 = static_cast<long>(rng() % 1048577u);
    Real re = sub(div_si(Real::of(k1, wp), 1048576, MPFR_RNDN),
                  div_si(one, 2, MPFR_RNDN), MPFR_RNDN);
    Real re2 = sqr(re, MPFR_RNDD);
    Real floor_sq = sub(one, re2, MPFR_RNDU);  // >= 3/4 since |re| <= 1/2
    Real im_floor = sqrt(floor_sq, MPFR_RNDU);
    Real t = div_si(mul_si(Real::of(k2, wp), 4, MPFR_RNDN), 1048576, MPFR_RNDN);
    Real im = (trial == 0) ? im_floor
                           : mul(im_floor, add(one, t, MPFR_RNDN), MPFR_RNDU);
    Complex tau{re, im};
    Real val = add(add(mul_si(log_2pi, 12, MPFR_RNDU),
                       detail::log_abs_delta(tau, wp), MPFR_RNDU),
                   mul_si(log(im, MPFR_RNDU), 6, MPFR_RNDU), MPFR_RNDU);
    require(val <= sixteen,
            "archimedean bound violated at trial " + std::to_string(trial));
  }
}

// 7. conductor exponents stay within the certified local bounds, and the
//    2-adic / 3-adic anchors evaluate exactly.
void criterion_7() {
  for (const testref::RefCurve& ref : testref::kCurves) {
    for (int i = 0; i < ref.n_locals; ++i) {
      const testref::RefLocal& rl = ref.locals[i];
      int cap = rl.p == 2 ? 8 : rl.p == 3 ? 5 : 2;
      require(rl.f <= cap, std::string(ref.label) +
                               ": conductor exponent exceeds bound at p = " +
                               std::to_string(rl.p));
    }
  }
  BoundValue two = conductor_exponent_bound(1, 2, 1);
  BoundValue three = conductor_exponent_bound(1, 3, 1);
  require(two.exact && two.exact_value == 8, "2-adic exponent bound is not 8");
  require(three.exact && three.exact_value == 5,
          "3-adic exponent bound is not 5");
}

// 8. refining the working precision never raises a published bound, and the
//    counting bounds dominate every observed solution count.
void criterion_8() {
  for (const testref::RefBound& row : testref::kBounds) {
    BoundValue coarse = evaluate_bound(row.name, row.inputs, 192);
    BoundValue fine = evaluate_bound(row.name, row.inputs, 768);
    require(fine.log10_scale == coarse.log10_scale,
            std::string(row.name) + ": scale flag changed with precision");
    require(fine.value <= coarse.value,
            std::string(row.name) + " " + row.inputs +
                ": 4x precision raised the bound");
  }

  mpz_class observed_1(3);  // criterion 1
  require(sunit_bounds(PrimeSet::parse("2")).count.exact_value >= observed_1,
          "S-unit counting bound fails for S={2}");
  for (const SolutionCertificate& cert : g_criterion2_certs) {
    require(sunit_bounds(cert.S).count.exact_value >=
                mpz_class(static_cast<unsigned long>(cert.solutions.size())),
            "S-unit counting bound fails for a criterion-2 set");
  }
  require(mordell_bounds(Rational(1), PrimeSet()).count.exact_value >= 5,
          "Mordell counting bound fails for a = 1");
  require(mordell_bounds(Rational(-2), PrimeSet()).count.exact_value >= 2,
          "Mordell counting bound fails for a = -2");
}

// Convolution of binary-form coefficient vectors (highest power first).
std::vector<mpz_class> form_mul(const std::vector<mpz_class>& a,
                                const std::vector<mpz_class>& b) {
  std::vector<mpz_class> out(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
  }
  return out;
}

// 9. the reduction identity behind the cubic solver. First the syzygy
//    G^2 = -4 H^3 - 27 disc f^2 is proved as a polynomial identity: each
//    coefficient of the degree-6 form on either side is a polynomial of
//    degree <= 6 in each of p, q, r, s, so vanishing of the difference on
//    the full grid {-3..3}^4 forces it to vanish identically. Then 100
//    pseudo-random integral points on irreducible forms are pushed through
//    the reduction and land exactly on y^2 = x^3 - 432 m^2 disc(f).
void criterion_9() {
  for (long p = -3; p <= 3; ++p) {
    for (long q = -3; q <= 3; ++q) {
      for (long r = -3; r <= 3; ++r) {
        for (long s = -3; s <= 3; ++s) {
          mpz_class P(p), Q(q), R(r), S(s);
          mpz_class disc = 18 * P * Q * R * S - 4 * Q * Q * Q * S +
                           Q * Q * R * R - 4 * P * R * R * R -
                           27 * P * P * S * S;
          mpz_class h2 = 3 * P * R - Q * Q;
          mpz_class h1 = 9 * P * S - Q * R;
          mpz_class h0 = 3 * Q * S - R * R;
          std::vector<mpz_class> f = {P, Q, R, S};
          std::vector<mpz_class> H = {h2, h1, h0};
          std::vector<mpz_class> G = {3 * P * h1 - 2 * Q * h2,
                                      6 * P * h0 + Q * h1 - 4 * R * h2,
                                      4 * Q * h0 - R * h1 - 6 * S * h2,
                                      2 * R * h0 - 3 * S * h1};
          std::vector<mpz_class> lhs = form_mul(G, G);
          std::vector<mpz_class> h3 = form_mul(form_mul(H, H), H);
          std::vector<mpz_class> f2 = form_mul(f, f);
          for (std::size_t i = 0; i < 7; ++i) {
            require(lhs[i] == -4 * h3[i] - 27 * disc * f2[i],
                    "syzygy coefficient " + std::to_string(i) +
                        " fails on the interpolation grid");
          }
        }
      }
    }
  }

  std::mt19937_64 rng(0x74313u);
  auto draw = [&rng](long lo, long hi) {
    return lo + static_cast<long>(rng() % static_cast<unsigned long>(
                                            hi - lo + 1));
  };
  int done = 0;
  while (done < 100) {
    long p = draw(-9, 9), q = draw(-9, 9), r = draw(-9, 9), s = draw(-9, 9);
    if (p == 0) continue;
    long u = draw(-20, 20), v = draw(-20, 20);
    if (u == 0 && v == 0) continue;
    try {
      CubicForm f(p, q, r, s);
      mpz_class m = f.eval(u, v);
      if (m == 0) continue;
      MordellSolution img = thue_to_mordell(f, m, u, v);
      // The constructor has already verified y^2 = x^3 + a exactly;
      // pin the parameter to the reduction identity.
      require(img.a == Rational(mpz_class(-432) * m * m * f.disc()),
              "image parameter differs from -432 m^2 disc(f)");
      ++done;
    } catch (const SingularForm&) {
      continue;  // reducible or singular draw; try another form
    }
  }
}

// 10. repeated invocations of the driver produce byte-identical documents.
void criterion_10() {
  const char* commands[] = {
      "sunit 2",
      "sunit 2,3,5 --ceiling 9.22 --jobs 2",
      "mordell 1 \"\" --ceiling 6.91",
      "thue 1,0,0,-2 1",
      "curve 0,0,1,-1,0 --conductor --heights",
      "bounds sunit_height S={2,3,5}",
  };
  for (const char* cmd : commands) {
    CliResult first = run_cli(cmd);
    CliResult second = run_cli(cmd);
    require(first.exit_code == second.exit_code,
            std::string("exit codes differ for: ") + cmd);
    require(!first.out.empty(), std::string("empty stdout for: ") + cmd);
    require(first.out == second.out,
            std::string("stdout differs between runs for: ") + cmd);
    parse_doc(first.out);
  }
}

struct Criterion {
  int id;
  const char* title;
  double limit_s;
  void (*body)();
};

const Criterion kCriteria[] = {
    {1, "single-prime S-unit resolution, certified complete", 30, criterion_1},
    {2, "S-unit solver matches brute force on three prime sets", 180,
     criterion_2},
    {3, "Frey conductor check passes for every criterion-2 solution", 60,
     criterion_3},
    {4, "Mordell resolution at desk scale with honest bounded mode", 10,
     criterion_4},
    {5, "corpus conductors, local data, heights, and height inequalities", 60,
     criterion_5},
    {6, "archimedean discriminant bound on 10^4 fundamental-domain points",
     30, criterion_6},
    {7, "conductor exponent conformance and local anchors", 10, criterion_7},
    {8, "bound monotonicity under refinement; counts dominated", 60,
     criterion_8},
    {9, "cubic reduction identity: symbolic syzygy and 100 random points", 60,
     criterion_9},
    {10, "byte-identical repeated CLI runs", 120, criterion_10},
};

}  // namespace

int main() {
  int failures = 0;
  for (const Criterion& c : kCriteria) {
    auto start = Clock::now();
    std::string detail;
    bool ok = true;
    try {
      c.body();
    } catch (const Failure& f) {
      ok = false;
      detail = f.detail;
    } catch (const std::exception& e) {
      ok = false;
      detail = std::string("unexpected exception: ") + e.what();
    }
    double secs = std::chrono::duration<double>(Clock::now() - start).count();
    if (ok && secs > c.limit_s) {
      ok = false;
      detail = "exceeded the " + std::to_string(c.limit_s) + " s budget";
    }
    std::printf("[%s] criterion %2d: %s (%.2f s)%s%s\n", ok ? "PASS" : "FAIL",
                c.id, c.title, secs, detail.empty() ? "" : " -- ",
                detail.c_str());
    std::fflush(stdout);
    if (!ok) ++failures;
  }
  if (failures != 0) {
    std::printf("acceptance: %d of 10 criteria failed\n", failures);
    return 1;
  }
  std::printf("acceptance: all 10 criteria passed\n");
  return 0;
}
