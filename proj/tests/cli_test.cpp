#include <gtest/gtest.h>

#include <cstdlib>
#include <sstream>

#include "hqe/cli.hpp"

using namespace hqe;

namespace {
struct Result {
  int code;
  std::string out, err;
};

Result run(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

json run_json(std::vector<std::string> args) {
  args.push_back("--json");
  Result r = run(args);
  EXPECT_EQ(r.code, 0) << r.err;
  return json::parse(r.out);
}

const std::string kLong = "1/(1-t) - (1 + t + t^2 + t^3 + t^4 + t^5 + t^6 + t^7 + t^8 + t^9)";
}  // namespace

TEST(Cli, Examples) {
  EXPECT_EQ(run({"decide", "EX y:K. y^2 - t^2 = 0", "--field", "laurent-q"}).out, "TRUE\n");
  EXPECT_EQ(run({"decide", "EX y:K. y^2 - 2*t^2 = 0", "--field", "laurent-q"}).out, "FALSE\n");
  EXPECT_EQ(run({"eval", "t * t^-1"}).out, "1 (v=0)\n");
  EXPECT_EQ(run({"decide", "EX y:K. y^2 = 17", "--field", "padic", "--p", "2"}).out, "TRUE\n");
  EXPECT_EQ(run({"rv", "3*t^2 + t^3", "--order", "1"}).out, "rv[1]{v=2; unit=3,1}\n");
}

TEST(Cli, InexactZeroShowsBound) { EXPECT_EQ(run({"eval", kLong, "--prec", "8"}).out, "O(t^8) (v>=8)\n"); }

TEST(Cli, ExitCodes) {
  Result syntax = run({"eval", "1 +"});
  EXPECT_EQ(syntax.code, cli::kSyntax);
  EXPECT_NE(syntax.err.find("syntax error at 3"), std::string::npos) << syntax.err;
  EXPECT_TRUE(syntax.out.empty());
  EXPECT_EQ(run({"rv", kLong, "--order", "0", "--prec", "8"}).code, cli::kPrecision);
  EXPECT_EQ(run({"decide", "EX w:RV[0]. v(w) < v(rv[0](1))"}).code, cli::kNonEffective);
  EXPECT_EQ(run({"eval", "1", "--prec", "7"}).code, cli::kPrecondition);
  EXPECT_EQ(run({"eval", "1", "--field", "padic", "--p", "9"}).code, cli::kPrecondition);
  EXPECT_EQ(run({"eval", "1", "--field", "padic"}).code, cli::kPrecondition);
  EXPECT_EQ(run({"decide", "EX y:K. y = x"}).code, cli::kPrecondition);
  EXPECT_EQ(run({"lift", "--poly", "x^2 - 2", "--from", "1", "--sep", "0"}).code, cli::kPrecondition);
  EXPECT_EQ(run({}).code, cli::kUsage);
  EXPECT_EQ(run({"bogus"}).code, cli::kUsage);
  EXPECT_EQ(run({"selftest", "--suite", "nope"}).code, cli::kPrecondition);
}

TEST(Cli, RetryPrecision) {
  Result r = run({"rv", kLong, "--order", "0", "--prec", "8", "--retry-precision"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "rv[0]{v=10; unit=1}\n");
  EXPECT_NE(r.err.find("retrying at 16"), std::string::npos);
}

TEST(Cli, PrecisionFromEnvironment) {
  ::setenv("HQE_PREC", "8", 1);
  Result r = run({"eval", "1/(1-t)"});
  Result flag = run({"eval", "1/(1-t)", "--prec", "10"});
  ::setenv("HQE_PREC", "x", 1);
  Result bad = run({"eval", "1"});
  ::unsetenv("HQE_PREC");
  EXPECT_NE(r.out.find("O(t^8)"), std::string::npos) << r.out;
  EXPECT_NE(flag.out.find("O(t^10)"), std::string::npos) << flag.out;
  EXPECT_EQ(bad.code, cli::kPrecondition);
  EXPECT_NE(run({"eval", "1/(1-t)"}).out.find("O(t^64)"), std::string::npos);
}

TEST(Cli, Lift) {
  Result r = run({"lift", "--poly", "x^2 - 2", "--from", "3", "--sep", "0", "--field", "padic", "--p", "7", "--prec", "10"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out.substr(0, r.out.find('\n')), "root: 266983762 + O(7^10)");
}

TEST(Cli, Deterministic) {
  const std::vector<std::vector<std::string>> cmds = {
      {"selftest", "--suite", "rv", "--seed", "3"},
      {"selftest", "--suite", "6", "--seed", "4", "--json"},
      {"decompose", "--poly", "x^3 - t*x + t^2"},
      {"qe", "EX y:K. y^2 = t^2 & rv[1](y) = rv[1](t)"},
      {"normal-form", "rv[0](x^2 - t^2) = rv[0](t^3)", "--var", "x"},
  };
  for (const auto& c : cmds) {
    Result a = run(c), b = run(c);
    EXPECT_EQ(a.code, 0) << c[0] << ": " << a.err;
    EXPECT_EQ(a.out, b.out) << c[0];
  }
  EXPECT_NE(run({"selftest", "--suite", "rv", "--seed", "3"}).out, run({"selftest", "--suite", "rv", "--seed", "5"}).out);
}

TEST(Json, EvalAndRv) {
  const Field f = Field::padic(5, 64);
  json e = run_json({"eval", "1/3", "--field", "padic", "--p", "5"});
  EXPECT_TRUE((parse_literal(f, e["value"]) - FieldElem::from_rational(f, mpq_class(1, 3))).is_zero());
  EXPECT_EQ(e["valuation"], "0");
  json r = run_json({"rv", "10 + 25", "--order", "1", "--field", "padic", "--p", "5"});
  RVElem want = rv(FieldElem::from_rational(f, 35), 1);
  EXPECT_EQ(r["rv"], format(want));
  EXPECT_EQ(r["order"], 1);
  EXPECT_EQ(r["value"], "1");
  ASSERT_EQ(r["unit"].size(), want.unit.size());
  for (std::size_t i = 0; i < want.unit.size(); ++i) EXPECT_EQ(mpz_class(r["unit"][i].get<std::string>()), want.unit[i]);
}

TEST(Json, Lift) {
  const Field L = Field::laurent(64);
  json j = run_json({"lift", "--poly", "x^2 - (1 + t)", "--from", "1", "--sep", "0"});
  FieldElem root = parse_literal(L, j["root"]);
  EXPECT_TRUE((root * root - parse_literal(L, "1 + t")).is_zero());
  EXPECT_GE(j["iterations"].get<int>(), 1);
}

TEST(Json, DecomposePiecesReparse) {
  struct Case {
    Field field;
    std::string poly;
    std::vector<std::string> flags;
  };
  for (const auto& [field, poly, flags] : std::vector<Case>{
           {Field::laurent(64), "x^3 + t*x - t^2", {"--field", "laurent-q"}},
           {Field::padic(2, 64), "x^2 + 2*x - 17", {"--field", "padic", "--p", "2"}},
       }) {
    std::vector<std::string> a = {"decompose", "--poly", poly};
    a.insert(a.end(), flags.begin(), flags.end());
    json j = run_json(a);
    std::vector<Piece> direct = decompose(parse_poly(field, poly), SwissCheese::whole(field));
    ASSERT_EQ(j["pieces"].size(), direct.size());
    for (std::size_t i = 0; i < direct.size(); ++i) {
      Piece p = piece_from_json(j["pieces"][i], field);
      EXPECT_EQ(piece_json(p), j["pieces"][i]);
      EXPECT_EQ(p.m, direct[i].m);
      EXPECT_EQ(p.q, direct[i].q);
      EXPECT_EQ(p.q_val, direct[i].q_val);
      EXPECT_EQ(p.severity_bound, direct[i].severity_bound);
      EXPECT_TRUE((p.center - direct[i].center).is_zero());
      ASSERT_EQ(p.coeffs.size(), direct[i].coeffs.size());
      for (std::size_t k = 0; k < p.coeffs.size(); ++k) {
        EXPECT_EQ(format(p.coeffs[k]), format(direct[i].coeffs[k]));
        EXPECT_EQ(p.coeffs[k].abs_precision(), direct[i].coeffs[k].abs_precision());
      }
      // membership is preserved on the sample grid
      for (const auto& x : selftest::sample_grid(field)) EXPECT_EQ(p.cheese.contains(x), direct[i].cheese.contains(x));
    }
  }
}

TEST(Json, DecomposeCellsReparse) {
  json j = run_json({"decompose", "--poly", "x^3 - t^2", "--rv-order", "2"});
  EXPECT_EQ(j["order"], 2);
  ASSERT_FALSE(j["cells"].empty());
  const Field L = Field::laurent(64);
  for (const auto& c : j["cells"]) {
    RVPiece p = rv_piece_from_json(c, L);
    json back = rv_piece_json(p);
    back["working_order"] = c["working_order"];
    EXPECT_EQ(back, c);
  }
  EXPECT_EQ(run({"decompose", "--poly", "x", "--rv-order", "-1"}).code, cli::kPrecondition);
}

TEST(Json, QeAndNormalForm) {
  const Field L = Field::laurent(64);
  const std::string phi = "EX y:K. y^2 = t^2 & rv[1](y) = rv[1](t)";
  json q = run_json({"qe", phi});
  FormulaPtr back = formula_from_json(q, L);
  EXPECT_EQ(formula_to_json(back), q);
  EXPECT_EQ(print_formula(back), run({"qe", phi}).out.substr(0, run({"qe", phi}).out.size() - 1));
  EXPECT_TRUE(evaluate(back, L));

  EXPECT_EQ(run_json({"decide", phi}), json({{"value", true}}));

  json nf = run_json({"normal-form", "x^2 = t^2", "--var", "x"});
  NormalForm direct = normal_form(parse_formula("x^2 = t^2", L, {}), "x", L);
  EXPECT_EQ(nf["var"], "x");
  EXPECT_EQ(nf["orders"].get<std::vector<std::int64_t>>(), direct.orders);
  EXPECT_EQ(nf["names"].get<std::vector<std::string>>(), direct.names);
  ASSERT_EQ(nf["centers"].size(), direct.centers.size());
  for (std::size_t i = 0; i < direct.centers.size(); ++i) {
    EXPECT_TRUE((parse_literal(L, nf["centers"][i]) - direct.centers[i]).is_zero());
  }
  EXPECT_EQ(print_formula(formula_from_json(nf["D"], L)), print_formula(direct.D));
}

TEST(Json, Selftest) {
  json j = run_json({"selftest", "--suite", "linear"});
  ASSERT_EQ(j.size(), 1u);
  EXPECT_EQ(j[0]["id"], 6);
  EXPECT_EQ(j[0]["pass"], true);
  EXPECT_EQ(j[0]["failures"], 0);
}
