// effdio — command-line driver for the library.
//
// Subcommands:
//   bounds <name> [inputs]          evaluate a named certified bound
//   curve <a1,a2,a3,a4,a6>          exact invariants; --conductor adds the
//                                   minimal model / conductor / local data,
//                                   --heights adds the Faltings height report
//   frey <lambda>                   Legendre curve of a unit-equation solution;
//                                   --check S runs the conductor check
//   mordell-curve <x> <y> <a>       curve attached to a Mordell solution;
//                                   --check S runs the conductor check
//   sunit <S>                       solve x + y = 1 in S-units
//   mordell <a> <S>                 solve y^2 = x^3 + a in S-integers
//   thue <p,q,r,s> <m>              solve F(u, v) = m for a cubic form F
//
// Contract: stdin is never read; stdout carries exactly one JSON document
// (or its flat table rendering with --format table); all logs and timings go
// to stderr. Exit code 0 on success, 1 when --paper-check finds a violation
// or a conductor check reports ok = false, 2 on domain or usage errors, 3
// when a search budget or certified precision was exhausted. Working
// precision comes from --precision, else the EFFDIO_PRECISION_BITS
// environment variable, else 192 bits.

#include <algorithm>
#include <cinttypes>
#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"

#include "effdio/serde.hpp"

namespace {

using namespace effdio;

constexpr const char* kUsage =
    "usage: effdio <subcommand> [options]\n"
    "  bounds <name> [inputs]            e.g. effdio bounds nu_S \"\"\n"
    "  curve <a1,a2,a3,a4,a6> [--conductor] [--heights]\n"
    "  frey <lambda> [--check <S>]\n"
    "  mordell-curve <x> <y> <a> [--check <S>]\n"
    "  sunit <S> [--ceiling <c|paper>] [--budget n] [--jobs n] [--paper-check]\n"
    "  mordell <a> <S> [--ceiling <c|paper>] [--budget n] [--jobs n] [--paper-check]\n"
    "  thue <p,q,r,s> <m> [--ceiling <c>] [--budget n] [--jobs n] [--paper-check]\n"
    "common options: --precision <bits>, --format <json|table>\n";

std::vector<std::string> split_commas(const std::string& s) {
  std::vector<std::string> out;
  if (s.empty()) return out;
  std::size_t start = 0;
  while (true) {
    std::size_t comma = s.find(',', start);
    if (comma == std::string::npos) {
      out.push_back(s.substr(start));
      return out;
    }
    out.push_back(s.substr(start, comma - start));
    start = comma + 1;
  }
}

mpz_class parse_integer(const std::string& tok) {
  Rational q = parse_rational(tok);
  if (q.get_den() != 1) throw DomainError("expected an integer, got " + tok);
  return q.get_num();
}

WeierstrassModel parse_model(const std::string& s) {
  std::vector<std::string> toks = split_commas(s);
  if (toks.size() != 5) {
    throw DomainError("a curve takes exactly five coefficients a1,a2,a3,a4,a6");
  }
  return WeierstrassModel{parse_rational(toks[0]), parse_rational(toks[1]),
                          parse_rational(toks[2]), parse_rational(toks[3]),
                          parse_rational(toks[4])};
}

CubicForm parse_form(const std::string& s) {
  std::vector<std::string> toks = split_commas(s);
  if (toks.size() != 4) {
    throw DomainError("a cubic form takes exactly four coefficients p,q,r,s");
  }
  return CubicForm(parse_integer(toks[0]), parse_integer(toks[1]),
                   parse_integer(toks[2]), parse_integer(toks[3]));
}

Real parse_real(const std::string& s, mpfr_prec_t prec) {
  Real r{prec};
  if (s.empty() || mpfr_set_str(r.raw(), s.c_str(), 10, MPFR_RNDU) != 0) {
    throw DomainError("expected a decimal number, got \"" + s + "\"");
  }
  if (!mpfr_number_p(r.raw())) {
    throw DomainError("ceiling must be finite");
  }
  return r;
}

long parse_precision_text(const std::string& text, const std::string& origin) {
  errno = 0;
  char* end = nullptr;
  long v = std::strtol(text.c_str(), &end, 10);
  if (errno != 0 || end == text.c_str() || *end != '\0') {
    throw DomainError(origin + " must be an integer number of bits");
  }
  if (v < 64 || v > (1L << 20)) {
    throw DomainError(origin + " must lie in [64, 2^20]");
  }
  return v;
}

mpfr_prec_t resolve_precision(long flag_value) {
  if (flag_value > 0) {
    if (flag_value < 64 || flag_value > (1L << 20)) {
      throw DomainError("--precision must lie in [64, 2^20]");
    }
    return static_cast<mpfr_prec_t>(flag_value);
  }
  if (const char* env = std::getenv("EFFDIO_PRECISION_BITS")) {
    return static_cast<mpfr_prec_t>(
        parse_precision_text(env, "EFFDIO_PRECISION_BITS"));
  }
  return 192;
}

// --format table: a flat, line-oriented rendering of the same document.
std::string render_scalar(const Json& j) {
  if (j.is_string()) return j.get<std::string>();
  return j.dump();
}

void flatten(const std::string& prefix, const Json& j,
             std::vector<std::string>& lines) {
  if (j.is_object()) {
    for (const auto& [key, value] : j.items()) {
      flatten(prefix.empty() ? key : prefix + "." + key, value, lines);
    }
    return;
  }
  if (j.is_array()) {
    bool all_scalar = true;
    for (const Json& e : j) {
      if (e.is_object() || e.is_array()) all_scalar = false;
    }
    if (all_scalar) {
      std::string row;
      for (const Json& e : j) {
        if (!row.empty()) row += ", ";
        row += render_scalar(e);
      }
      lines.push_back(prefix + " = [" + row + "]");
      return;
    }
    std::size_t i = 0;
    for (const Json& e : j) {
      flatten(prefix + "[" + std::to_string(i) + "]", e, lines);
      ++i;
    }
    return;
  }
  lines.push_back(prefix + " = " + render_scalar(j));
}

void emit(const Json& doc, const std::string& format) {
  if (format == "table") {
    std::vector<std::string> lines;
    flatten("", doc, lines);
    for (const std::string& line : lines) std::cout << line + "\n";
    return;
  }
  std::cout << doc.dump(2) << "\n";
}

// --paper-check: re-verify the certificate's published invariants from
// scratch. Returns human-readable violation descriptions (empty = clean).
std::vector<std::string> paper_check_violations(const SolutionCertificate& cert,
                                                mpfr_prec_t prec) {
  std::vector<std::string> bad;
  if (!cert.checks_passed) bad.push_back("checks_passed is false");
  if (cert.mode == CertificateMode::certified_complete && cert.budget_exhausted) {
    bad.push_back("certificate claims completeness despite budget exhaustion");
  }
  if (cert.count_bound.exact &&
      mpz_class(static_cast<unsigned long>(cert.solutions.size())) >
          cert.count_bound.exact_value) {
    bad.push_back("solution count exceeds the certified counting bound");
  }
  for (std::size_t i = 1; i < cert.solutions.size(); ++i) {
    if (!detail::solution_less(cert.solutions[i - 1], cert.solutions[i])) {
      bad.push_back("solution list is not strictly sorted");
      break;
    }
  }
  detail::SizeCap cap = detail::SizeCap::from_ceiling(cert.search_ceiling, prec);
  for (const auto& [x, y] : cert.solutions) {
    if (!cap.admits(weil_size(x)) || !cap.admits(weil_size(y))) {
      bad.push_back("a reported solution exceeds the search ceiling");
      break;
    }
  }
  for (const auto& [x, y] : cert.solutions) {
    try {
      if (cert.kind == "sunit") {
        SUnitSolution(x, y);
        if (!is_s_unit(x, cert.S.primes()) || !is_s_unit(y, cert.S.primes())) {
          bad.push_back("a reported pair is not a pair of S-units");
          break;
        }
      } else if (cert.kind == "mordell") {
        MordellSolution(x, y, cert.a);
        if (!is_s_integer(x, cert.S.primes()) ||
            !is_s_integer(y, cert.S.primes())) {
          bad.push_back("a reported point is not S-integral");
          break;
        }
      } else {
        if (x.get_den() != 1 || y.get_den() != 1) {
          bad.push_back("a reported Thue solution is not integral");
          break;
        }
        CubicForm f(cert.form[0], cert.form[1], cert.form[2], cert.form[3]);
        if (f.eval(x.get_num(), y.get_num()) != cert.m) {
          bad.push_back("a reported pair does not satisfy the Thue equation");
          break;
        }
      }
    } catch (const Error& e) {
      bad.push_back(std::string("a reported solution fails re-validation: ") +
                    e.what());
      break;
    }
  }
  if (cert.kind == "sunit") {
    for (const auto& [x, y] : cert.solutions) {
      if (!std::binary_search(cert.solutions.begin(), cert.solutions.end(),
                              std::make_pair(y, x), detail::solution_less)) {
        bad.push_back("solution set is not symmetric under (x, y) -> (y, x)");
        break;
      }
    }
  }
  return bad;
}

int finish_solver(const SolutionCertificate& cert, mpfr_prec_t prec,
                  bool paper_check, const std::string& format) {
  std::fprintf(stderr, "wall_time_s %.3f\n", cert.wall_time_s);
  std::fprintf(stderr, "candidates_tested %" PRIu64 "\n", cert.candidates_tested);
  if (paper_check) {
    std::vector<std::string> bad = paper_check_violations(cert, prec);
    if (!bad.empty()) {
      for (const std::string& b : bad) {
        std::fprintf(stderr, "paper-check violation: %s\n", b.c_str());
      }
      return 1;
    }
    std::fprintf(stderr, "paper-check: all invariants hold\n");
  }
  emit(to_json(cert), format);
  return cert.budget_exhausted ? 3 : 0;
}

struct SolverArgs {
  std::string ceiling = "paper";
  std::uint64_t budget = SolverOptions{}.budget;
  unsigned jobs = 1;
  bool paper_check = false;
};

void add_solver_options(CLI::App* sub, SolverArgs& args,
                        const char* ceiling_help) {
  sub->add_option("--ceiling", args.ceiling, ceiling_help);
  sub->add_option("--budget", args.budget,
                  "candidate budget before the search reports bounded results");
  sub->add_option("--jobs", args.jobs, "parallel workers")
      ->check(CLI::Range(1u, 256u));
  sub->add_flag("--paper-check", args.paper_check,
                "re-verify every certificate invariant; exit 1 on violation");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"exact elliptic-curve invariants, certified diophantine bounds, "
               "and complete small-solution searches"};
  app.require_subcommand(1);
  long precision_flag = -1;
  std::string format = "json";
  app.add_option("--precision", precision_flag,
                 "working precision in bits (default: EFFDIO_PRECISION_BITS "
                 "or 192)");
  app.add_option("--format", format, "output format")
      ->check(CLI::IsMember({"json", "table"}));

  auto* bounds_cmd = app.add_subcommand(
      "bounds", "evaluate a named certified bound (rounded up)");
  std::string bound_name, bound_inputs;
  bool bounds_list = false;
  bounds_cmd->add_option("name", bound_name, "bound name");
  bounds_cmd->add_option("inputs", bound_inputs,
                         "comma-separated key=value inputs (\"\" for none)");
  bounds_cmd->add_flag("--list", bounds_list, "list all bound names");
  bounds_cmd->fallthrough();

  auto* curve_cmd = app.add_subcommand(
      "curve", "exact invariants of a Weierstrass model");
  std::string curve_coeffs;
  bool want_conductor = false, want_heights = false;
  curve_cmd->add_option("coefficients", curve_coeffs, "a1,a2,a3,a4,a6")
      ->required();
  curve_cmd->add_flag("--conductor", want_conductor,
                      "add minimal model, conductor, and local reduction data");
  curve_cmd->add_flag("--heights", want_heights,
                      "add the certified Faltings height report");
  curve_cmd->fallthrough();

  auto* frey_cmd = app.add_subcommand(
      "frey", "Legendre curve y^2 = x(x-1)(x-lambda) of a unit-equation "
              "solution");
  std::string frey_lambda, frey_check_s;
  frey_cmd->add_option("lambda", frey_lambda, "rational lambda != 0, 1")
      ->required();
  auto* frey_check_opt = frey_cmd->add_option(
      "--check", frey_check_s,
      "conductor check against the prime set S (must contain 2)");
  frey_cmd->fallthrough();

  auto* mcurve_cmd = app.add_subcommand(
      "mordell-curve", "curve y^2 = x^3 + a attached to a Mordell solution");
  std::string mc_x, mc_y, mc_a, mc_check_s;
  mcurve_cmd->add_option("x", mc_x, "x coordinate")->required();
  mcurve_cmd->add_option("y", mc_y, "y coordinate")->required();
  mcurve_cmd->add_option("a", mc_a, "Mordell parameter a != 0")->required();
  auto* mc_check_opt = mcurve_cmd->add_option(
      "--check", mc_check_s, "conductor check against the prime set S");
  mcurve_cmd->fallthrough();

  auto* sunit_cmd = app.add_subcommand(
      "sunit", "solve x + y = 1 in S-units with a completeness certificate");
  std::string sunit_s;
  SolverArgs sunit_args;
  sunit_cmd->add_option("S", sunit_s, "comma-separated primes (\"\" for none)");
  add_solver_options(sunit_cmd, sunit_args,
                     "height ceiling: a decimal or \"paper\" (default)");
  sunit_cmd->fallthrough();

  auto* mordell_cmd = app.add_subcommand(
      "mordell", "solve y^2 = x^3 + a in S-integers with a certificate");
  std::string mordell_a, mordell_s;
  SolverArgs mordell_args;
  mordell_cmd->add_option("a", mordell_a, "rational parameter a != 0")
      ->required();
  mordell_cmd->add_option("S", mordell_s,
                          "comma-separated primes (\"\" for none)");
  add_solver_options(mordell_cmd, mordell_args,
                     "height ceiling: a decimal or \"paper\" (default)");
  mordell_cmd->fallthrough();

  auto* thue_cmd = app.add_subcommand(
      "thue", "solve F(u, v) = m for an irreducible integral cubic form F");
  std::string thue_coeffs, thue_m;
  SolverArgs thue_args;
  thue_args.ceiling.clear();
  thue_cmd->add_option("coefficients", thue_coeffs, "p,q,r,s")->required();
  thue_cmd->add_option("m", thue_m, "nonzero target value")->required();
  add_solver_options(thue_cmd, thue_args,
                     "log box ceiling: max(|u|,|v|) <= exp(c) (default: "
                     "log 1000)");
  thue_cmd->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n" << kUsage;
    return 2;
  }

  try {
    const mpfr_prec_t prec = resolve_precision(precision_flag);

    if (bounds_cmd->parsed()) {
      if (bounds_list) {
        Json out;
        Json names = Json::array();
        for (const std::string& n : bound_names()) names.push_back(n);
        out["bounds"] = std::move(names);
        emit(out, format);
        return 0;
      }
      if (bound_name.empty()) {
        throw DomainError("bounds needs a bound name (or --list)");
      }
      emit(to_json(evaluate_bound(bound_name, bound_inputs, prec)), format);
      return 0;
    }

    if (curve_cmd->parsed()) {
      WeierstrassModel model = parse_model(curve_coeffs);
      Json out;
      out["curve"] = to_json(model);
      out["invariants"] = to_json(invariants(model));
      if (want_conductor) {
        GlobalCurveData data = conductor(model);
        out["minimal_model"] = to_json(data.minimal);
        Json global = to_json(data);
        for (auto& [key, value] : global.items()) {
          out[key] = std::move(value);
        }
      }
      if (want_heights) {
        out["heights"] = to_json(stable_faltings_height(model, prec));
      }
      emit(out, format);
      return 0;
    }

    if (frey_cmd->parsed()) {
      Rational lambda = parse_rational(frey_lambda);
      if (frey_check_opt->count() > 0) {
        SUnitSolution sol(lambda, Rational(1) - lambda);
        ConductorCheck chk =
            frey_conductor_check(sol, PrimeSet::parse(frey_check_s));
        emit(to_json(chk), format);
        return chk.ok ? 0 : 1;
      }
      WeierstrassModel model = frey_curve(lambda);
      CurveInvariants inv = invariants(model);
      Json out;
      out["curve"] = to_json(model);
      out["j"] = format_rational(inv.j);
      out["discriminant"] = format_rational(inv.disc);
      emit(out, format);
      return 0;
    }

    if (mcurve_cmd->parsed()) {
      MordellSolution sol(parse_rational(mc_x), parse_rational(mc_y),
                          parse_rational(mc_a));
      if (mc_check_opt->count() > 0) {
        ConductorCheck chk =
            mordell_conductor_check(sol, PrimeSet::parse(mc_check_s));
        emit(to_json(chk), format);
        return chk.ok ? 0 : 1;
      }
      WeierstrassModel model = mordell_curve(sol);
      CurveInvariants inv = invariants(model);
      Json out;
      out["curve"] = to_json(model);
      out["j"] = format_rational(inv.j);
      out["discriminant"] = format_rational(inv.disc);
      emit(out, format);
      return 0;
    }

    if (sunit_cmd->parsed()) {
      PrimeSet S = PrimeSet::parse(sunit_s);
      SolverOptions opts{sunit_args.budget, sunit_args.jobs, prec};
      SolutionCertificate cert =
          sunit_args.ceiling == "paper"
              ? solve_sunit(S, opts)
              : solve_sunit(S, parse_real(sunit_args.ceiling, prec), opts);
      return finish_solver(cert, prec, sunit_args.paper_check, format);
    }

    if (mordell_cmd->parsed()) {
      Rational a = parse_rational(mordell_a);
      PrimeSet S = PrimeSet::parse(mordell_s);
      SolverOptions opts{mordell_args.budget, mordell_args.jobs, prec};
      SolutionCertificate cert =
          mordell_args.ceiling == "paper"
              ? solve_mordell(a, S, opts)
              : solve_mordell(a, S, parse_real(mordell_args.ceiling, prec),
                              opts);
      return finish_solver(cert, prec, mordell_args.paper_check, format);
    }

    if (thue_cmd->parsed()) {
      CubicForm f = parse_form(thue_coeffs);
      mpz_class m = parse_integer(thue_m);
      SolverOptions opts{thue_args.budget, thue_args.jobs, prec};
      Real ceiling = thue_args.ceiling.empty()
                         ? log(Real::of(1000L, prec), MPFR_RNDU)
                         : parse_real(thue_args.ceiling, prec);
      SolutionCertificate cert = solve_thue(f, m, ceiling, opts);
      return finish_solver(cert, prec, thue_args.paper_check, format);
    }

    std::cerr << kUsage;
    return 2;
  } catch (const PrecisionLoss& e) {
    std::cerr << "precision exhausted: " << e.what() << "\n";
    return 3;
  } catch (const FactorizationExhausted& e) {
    std::cerr << "factorization budget exhausted: " << e.what() << "\n";
    return 3;
  } catch (const SearchBudgetExceeded& e) {
    std::cerr << "search budget exhausted: " << e.what() << "\n";
    return 3;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
