// Wire-format and command-line driver tests.
//
// The serialization half checks the JSON shapes of every public type: key
// sets and their order, the integer-width rule (numbers below 2^53, decimal
// strings above), and exact decimal round-trips for reals. The CLI half
// drives the installed binary as a subprocess and checks documents, exit
// codes, determinism of repeated invocations, and the precision environment
// variable.

#include <gtest/gtest.h>

#include <cstdio>
#include <string>
#include <sys/wait.h>
#include <vector>

#include "effdio/serde.hpp"

#ifndef EFFDIO_CLI_PATH
#error "EFFDIO_CLI_PATH must point at the CLI binary"
#endif

namespace {

using namespace effdio;

const WeierstrassModel k37a{Rational(0), Rational(0), Rational(1),
                            Rational(-1), Rational(0)};
const WeierstrassModel k11a{Rational(0), Rational(-1), Rational(1),
                            Rational(-10), Rational(-20)};

std::vector<std::string> key_order(const Json& j) {
  std::vector<std::string> keys;
  for (const auto& item : j.items()) keys.push_back(item.key());
  return keys;
}

struct CliResult {
  std::string out;
  int exit_code = -1;
};

CliResult run_cli(const std::string& args, const std::string& env_prefix = "") {
  std::string cmd = env_prefix + EFFDIO_CLI_PATH " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  EXPECT_NE(pipe, nullptr) << cmd;
  CliResult res;
  char buf[4096];
  std::size_t n = 0;
  while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) res.out.append(buf, n);
  int status = pclose(pipe);
  res.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return res;
}

Json parse_doc(const CliResult& res) {
  Json doc = Json::parse(res.out, nullptr, false);
  EXPECT_FALSE(doc.is_discarded()) << res.out;
  return doc;
}

TEST(Serde, IntegerWidthRule) {
  const mpz_class edge("9007199254740992");  // 2^53
  Json below = json_integer(edge - 1);
  ASSERT_TRUE(below.is_number_integer());
  EXPECT_EQ(below.get<std::int64_t>(), 9007199254740991LL);
  Json at = json_integer(edge);
  ASSERT_TRUE(at.is_string());
  EXPECT_EQ(at.get<std::string>(), "9007199254740992");
  Json neg_below = json_integer(-(edge - 1));
  EXPECT_TRUE(neg_below.is_number_integer());
  Json neg_at = json_integer(-edge);
  ASSERT_TRUE(neg_at.is_string());
  EXPECT_EQ(neg_at.get<std::string>(), "-9007199254740992");
  EXPECT_EQ(json_integer(mpz_class(0)).get<std::int64_t>(), 0);
}

TEST(Serde, RealStringsRoundTripExactly) {
  Real v = Real::of(1728L, 128);
  std::string s = real_string(v);
  EXPECT_EQ(s, real_string(v)) << "rendering must be deterministic";
  Real back{128};
  ASSERT_EQ(mpfr_set_str(back.raw(), s.c_str(), 10, MPFR_RNDN), 0);
  EXPECT_EQ(mpfr_cmp(back.raw(), v.raw()), 0);

  Real third = div(Real::of(1L, 192), Real::of(3L, 192), MPFR_RNDU);
  std::string t = real_string(third);
  Real back3{192};
  ASSERT_EQ(mpfr_set_str(back3.raw(), t.c_str(), 10, MPFR_RNDN), 0);
  EXPECT_EQ(mpfr_cmp(back3.raw(), third.raw()), 0)
      << "printed digits must recover the value exactly";
}

TEST(Serde, ModelAndInvariantShapes) {
  Json curve = to_json(k11a);
  ASSERT_TRUE(curve.is_array());
  ASSERT_EQ(curve.size(), 5u);
  EXPECT_EQ(curve[0].get<std::string>(), "0");
  EXPECT_EQ(curve[3].get<std::string>(), "-10");

  Json inv = to_json(invariants(k11a));
  EXPECT_EQ(key_order(inv),
            (std::vector<std::string>{"b2", "b4", "b6", "b8", "c4", "c6",
                                      "discriminant", "j"}));
  EXPECT_EQ(inv["j"].get<std::string>(), "-122023936/161051");
  EXPECT_EQ(inv["discriminant"].get<std::string>(), "-161051");
}

TEST(Serde, GlobalCurveDataShape) {
  Json j = to_json(conductor(k37a));
  EXPECT_EQ(key_order(j), (std::vector<std::string>{
                              "conductor", "minimal_discriminant", "locals"}));
  EXPECT_EQ(j["conductor"].get<std::int64_t>(), 37);
  EXPECT_EQ(j["minimal_discriminant"].get<std::int64_t>(), 37);
  ASSERT_EQ(j["locals"].size(), 1u);
  Json loc = j["locals"][0];
  EXPECT_EQ(key_order(loc),
            (std::vector<std::string>{"p", "conductor_exponent",
                                      "minimal_discriminant_valuation",
                                      "components", "kodaira", "reduction"}));
  EXPECT_EQ(loc["p"].get<std::int64_t>(), 37);
  EXPECT_EQ(loc["conductor_exponent"].get<std::int64_t>(), 1);
  EXPECT_EQ(loc["reduction"].get<std::string>(), "multiplicative");
}

TEST(Serde, BoundValueShapes) {
  Json exact = to_json(evaluate_bound("nu_S", ""));
  EXPECT_EQ(key_order(exact), (std::vector<std::string>{
                                  "name", "paper_anchor", "inputs", "value",
                                  "rounding"}));
  ASSERT_TRUE(exact["value"].is_number_integer());
  EXPECT_EQ(exact["value"].get<std::int64_t>(), 1728);
  EXPECT_EQ(exact["rounding"].get<std::string>(), "up");

  Json real_valued = to_json(evaluate_bound("sunit_height", "S={2}"));
  ASSERT_TRUE(real_valued["value"].is_string())
      << "non-exact bounds must serialize as decimal strings";

  Json log10 = to_json(gl2_quotient_isogeny_bound(70, PrimeSet()));
  EXPECT_EQ(key_order(log10), (std::vector<std::string>{
                                  "name", "paper_anchor", "inputs",
                                  "log10_value", "rounding"}));
  ASSERT_TRUE(log10["log10_value"].is_string());
}

TEST(Serde, HeightReportShape) {
  Json j = to_json(stable_faltings_height(k37a, 128));
  EXPECT_EQ(key_order(j),
            (std::vector<std::string>{"h_relative", "h_stable", "tau",
                                      "minimal_discriminant",
                                      "unstable_correction", "error_bound"}));
  EXPECT_EQ(j["minimal_discriminant"].get<std::int64_t>(), 37);
  EXPECT_EQ(j["h_stable"].get<std::string>().front(), '-');
  EXPECT_EQ(key_order(j["tau"]),
            (std::vector<std::string>{"re", "im", "precision_bits",
                                      "error_bound"}));
}

TEST(Serde, ConductorCheckShape) {
  SUnitSolution sol(make_rational(1, 2), make_rational(1, 2));
  Json j = to_json(frey_conductor_check(sol, PrimeSet::parse("2")));
  EXPECT_EQ(key_order(j), (std::vector<std::string>{"curve", "conductor",
                                                    "bound", "ok"}));
  EXPECT_EQ(j["conductor"].get<std::int64_t>(), 32);
  EXPECT_EQ(j["bound"].get<std::int64_t>(), 256);
  EXPECT_TRUE(j["ok"].get<bool>());
}

TEST(Serde, CertificateShape) {
  Json j = to_json(solve_sunit(PrimeSet::parse("2")));
  EXPECT_EQ(key_order(j),
            (std::vector<std::string>{"equation", "mode", "ceiling",
                                      "paper_bound", "solutions",
                                      "checks_passed", "count_bound"}));
  EXPECT_EQ(j["equation"]["type"].get<std::string>(), "sunit");
  EXPECT_EQ(j["equation"]["S"], Json::array({2}));
  EXPECT_EQ(j["mode"].get<std::string>(), "certified_complete");
  EXPECT_EQ(j["solutions"],
            Json::parse(R"([["-1","2"],["1/2","1/2"],["2","-1"]])"));
  EXPECT_TRUE(j["checks_passed"].get<bool>());
  EXPECT_EQ(j["count_bound"]["value"].get<std::int64_t>(), 1536);
  EXPECT_EQ(j["ceiling"].get<std::string>(),
            j["paper_bound"]["value"].get<std::string>());

  Json t = to_json(solve_thue(CubicForm(1, 0, 0, -2), 1,
                              log(Real::of(100L, 192), MPFR_RNDU)));
  EXPECT_EQ(t["equation"]["type"].get<std::string>(), "thue");
  EXPECT_EQ(t["equation"]["f"], Json::array({1, 0, 0, -2}));
  EXPECT_EQ(t["equation"]["m"].get<std::int64_t>(), 1);
  EXPECT_EQ(t["mode"].get<std::string>(), "bounded");
}

TEST(Cli, CurveConductorDrives) {
  CliResult res = run_cli("curve 0,0,1,-1,0 --conductor");
  EXPECT_EQ(res.exit_code, 0);
  Json doc = parse_doc(res);
  EXPECT_EQ(doc["conductor"].get<std::int64_t>(), 37);
  EXPECT_EQ(doc["invariants"]["discriminant"].get<std::string>(), "37");

  res = run_cli("curve 0,-1,1,-10,-20 --conductor");
  EXPECT_EQ(res.exit_code, 0);
  doc = parse_doc(res);
  EXPECT_EQ(doc["conductor"].get<std::int64_t>(), 11);
  EXPECT_EQ(doc["locals"][0]["kodaira"].get<std::string>(), "I5");
}

TEST(Cli, BoundsSubcommand) {
  CliResult res = run_cli("bounds nu_S \"\"");
  EXPECT_EQ(res.exit_code, 0);
  Json doc = parse_doc(res);
  EXPECT_EQ(doc["value"].get<std::int64_t>(), 1728);
  EXPECT_EQ(doc["rounding"].get<std::string>(), "up");

  res = run_cli("bounds --list");
  EXPECT_EQ(res.exit_code, 0);
  Json names = parse_doc(res);
  EXPECT_GE(names["bounds"].size(), 30u);
}

TEST(Cli, SUnitPaperCertificate) {
  CliResult res = run_cli("sunit 2");
  EXPECT_EQ(res.exit_code, 0);
  Json doc = parse_doc(res);
  EXPECT_EQ(doc["mode"].get<std::string>(), "certified_complete");
  EXPECT_EQ(doc["solutions"].size(), 3u);
  EXPECT_TRUE(doc["checks_passed"].get<bool>());
}

TEST(Cli, RepeatedRunsAreByteIdentical) {
  CliResult a = run_cli("sunit 2,3 --ceiling 5");
  CliResult b = run_cli("sunit 2,3 --ceiling 5");
  EXPECT_EQ(a.exit_code, 0);
  EXPECT_EQ(b.exit_code, 0);
  EXPECT_EQ(a.out, b.out);
  EXPECT_FALSE(a.out.empty());

  CliResult j1 = run_cli("mordell 17 2 --ceiling 5.7 --jobs 1");
  CliResult j3 = run_cli("mordell 17 2 --ceiling 5.7 --jobs 3");
  EXPECT_EQ(j1.exit_code, 0);
  EXPECT_EQ(j1.out, j3.out) << "worker count must not change the document";
}

TEST(Cli, ExitCodes) {
  EXPECT_EQ(run_cli("bounds no_such_bound \"\"").exit_code, 2);
  EXPECT_EQ(run_cli("mordell 0 \"\"").exit_code, 2);
  EXPECT_EQ(run_cli("frey 1").exit_code, 2);
  EXPECT_EQ(run_cli("sunit 4").exit_code, 2);
  EXPECT_EQ(run_cli("curve 1,2,3").exit_code, 2);
  EXPECT_EQ(run_cli("thue 1,0,0,-2 0").exit_code, 2);
  EXPECT_EQ(run_cli("thue 1,3,3,1 1").exit_code, 2);  // reducible form
  EXPECT_EQ(run_cli("no_such_subcommand").exit_code, 2);
  EXPECT_EQ(run_cli("frey 2 --check 3").exit_code, 2);  // S must contain 2
  EXPECT_EQ(run_cli("sunit 2 --budget 50").exit_code, 3);
  EXPECT_EQ(run_cli("sunit 2 --budget 50 --paper-check").exit_code, 3)
      << "honest bounded certificates pass --paper-check";
}

TEST(Cli, PaperCheckAcceptsCleanCertificates) {
  EXPECT_EQ(run_cli("sunit 2 --paper-check").exit_code, 0);
  EXPECT_EQ(run_cli("mordell -2 \"\" --ceiling 8 --paper-check").exit_code, 0);
  EXPECT_EQ(run_cli("thue 1,0,0,-2 1 --paper-check").exit_code, 0);
}

TEST(Cli, ConductorCheckSubcommands) {
  CliResult res = run_cli("frey 1/2 --check 2");
  EXPECT_EQ(res.exit_code, 0);
  Json doc = parse_doc(res);
  EXPECT_EQ(doc["conductor"].get<std::int64_t>(), 32);
  EXPECT_EQ(doc["bound"].get<std::int64_t>(), 256);
  EXPECT_TRUE(doc["ok"].get<bool>());

  res = run_cli("mordell-curve 2 3 1 --check \"\"");
  EXPECT_EQ(res.exit_code, 0);
  doc = parse_doc(res);
  EXPECT_EQ(doc["conductor"].get<std::int64_t>(), 1728);
  EXPECT_EQ(doc["bound"].get<std::int64_t>(), 62208);
  EXPECT_TRUE(doc["ok"].get<bool>());

  EXPECT_EQ(run_cli("mordell-curve 2 4 1").exit_code, 2)
      << "(2, 4) does not lie on y^2 = x^3 + 1";
}

TEST(Cli, ThueSolveRoundTrip) {
  CliResult res = run_cli("thue 1,0,0,-2 1");
  EXPECT_EQ(res.exit_code, 0);
  Json doc = parse_doc(res);
  EXPECT_EQ(doc["solutions"], Json::parse(R"([["-1","-1"],["1","0"]])"));
  EXPECT_TRUE(doc["checks_passed"].get<bool>());
  EXPECT_EQ(doc["mode"].get<std::string>(), "bounded");
}

TEST(Cli, TableFormat) {
  CliResult res = run_cli("bounds nu_S \"\" --format table");
  EXPECT_EQ(res.exit_code, 0);
  EXPECT_NE(res.out.find("value = 1728"), std::string::npos);
  ASSERT_FALSE(res.out.empty());
  EXPECT_NE(res.out.front(), '{') << "table output must not be a JSON object";
}

TEST(Cli, PrecisionFlagAndEnvironment) {
  EXPECT_EQ(run_cli("bounds sunit_height S={2} --precision 128").exit_code, 0);
  EXPECT_EQ(run_cli("bounds nu_S \"\"", "EFFDIO_PRECISION_BITS=256 ").exit_code,
            0);
  EXPECT_EQ(run_cli("bounds nu_S \"\"", "EFFDIO_PRECISION_BITS=16 ").exit_code,
            2);
  EXPECT_EQ(run_cli("bounds nu_S \"\"", "EFFDIO_PRECISION_BITS=abc ").exit_code,
            2);
  EXPECT_EQ(run_cli("bounds nu_S \"\" --precision 12").exit_code, 2);

  // The flag wins over the environment variable: 128-bit evaluation succeeds
  // even when the environment asks for an invalid precision.
  EXPECT_EQ(run_cli("bounds nu_S \"\" --precision 128",
                    "EFFDIO_PRECISION_BITS=16 ")
                .exit_code,
            0);
}

}  // namespace
