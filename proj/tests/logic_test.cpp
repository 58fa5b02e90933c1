#include <gtest/gtest.h>

#include "hqe/logic/json.hpp"
#include "hqe/logic/qe.hpp"
#include "hqe/selftest/grid.hpp"

using namespace hqe;

namespace {
const Field L = Field::laurent(64);
const Field P7 = Field::padic(7, 32);

FormulaPtr P(const std::string& s, const Field& f = L, const std::map<std::string, std::int64_t>& rv = {}) {
  return parse_formula(s, f, rv);
}
FieldElem T(std::int64_t k = 1) { return FieldElem::uniformizer(L).pow(k); }
FieldElem Q(const mpq_class& q, const Field& f = L) { return FieldElem::from_rational(f, q); }
}  // namespace

TEST(Parse, FieldQuantifierCount) {
  auto phi = P("EX x:K. rv[0](x^2 - t^2) = rv[0](0)");
  EXPECT_EQ(phi->kind, Formula::Kind::kExists);
  EXPECT_EQ(phi->sort, Sort::kField);
  EXPECT_EQ(field_quantifier_count(phi), 1u);
  EXPECT_EQ(phi->kids[0]->kind, Formula::Kind::kRVEq);
}

TEST(Parse, OplusWithFreeRvVariables) {
  auto phi = P("EX w:RV[0]. oplus[0](a, b, w)", L, {{"a", 0}, {"b", 0}});
  EXPECT_EQ(print_formula(phi), "EX w:RV[0]. oplus[0](a, b, w)");
  auto fv = free_vars(phi);
  EXPECT_TRUE(fv.field.empty());
  EXPECT_EQ(fv.rv.size(), 2u);
}

TEST(Parse, GoldenRoundTrip) {
  // printed form is the normal form; printing it again is a fixed point
  const std::vector<std::pair<std::string, std::string>> golden = {
      {"true & !false", "true & !false"},
      {"(true)", "true"},
      {"x=0", "x = 0"},
      {"EX x:K. rv[0](x^2 - t^2) = rv[0](0)", "EX x:K. rv[0](x^2 - t^2) = rv[0](0)"},
      {"a | b = 1 & c = 2", ""},
      {"x = 1 -> y = 2 -> z = 3", "x = 1 -> y = 2 -> z = 3"},
      {"(x = 1 -> y = 2) -> z = 3", "(x = 1 -> y = 2) -> z = 3"},
      {"!(x = 1 | y = 2)", "!(x = 1 | y = 2)"},
      {"v(rv[1](x)) <= v(rv[1](t^3))", "v(rv[1](x)) <= v(rv[1](t^3))"},
      {"ALL w:RV[2]. (proj[0](w) = rv[0](1) -> v(w) = v(rv[2](1)))",
       "ALL w:RV[2]. proj[0](w) = rv[0](1) -> v(w) = v(rv[2](1))"},
      {"EX y:K. y^2 = 1 + t", "EX y:K. y^2 = 1 + t"},
      {"(EX y:K. y = x) & x = 1", "(EX y:K. y = x) & x = 1"},
  };
  for (const auto& [in, want] : golden) {
    if (want.empty()) {
      EXPECT_THROW(P(in), SyntaxError) << in;
      continue;
    }
    auto phi = P(in);
    EXPECT_EQ(print_formula(phi), want) << in;
    EXPECT_EQ(print_formula(P(print_formula(phi))), want) << in;
  }
}

TEST(Parse, Errors) {
  EXPECT_THROW(P("EX x:K."), SyntaxError);
  EXPECT_THROW(P("rv[0](x) = rv[1](x)"), SyntaxError);
  EXPECT_THROW(P("oplus[0](rv[0](x))"), SyntaxError);
  EXPECT_THROW(P("EX t:K. t = 0"), SyntaxError);
  EXPECT_THROW(P("x = 0 &"), SyntaxError);
  try {
    P("x = 0 & & y = 1");
    FAIL();
  } catch (const SyntaxError& e) {
    EXPECT_EQ(e.position, 8u);
  }
}

TEST(Evaluate, Trivial) {
  EXPECT_TRUE(evaluate(P("true & !false"), L));
  EXPECT_FALSE(evaluate(P("true -> false"), L));
  EXPECT_TRUE(evaluate(P("false -> false"), L));
}

TEST(Evaluate, SquareClassesDiffer) {
  // t^2 and 2 t^2 share a value but not a residue
  EXPECT_FALSE(evaluate(P("rv[0](t^2) = rv[0](2*t^2)"), L));
  EXPECT_TRUE(evaluate(P("v(rv[0](t^2)) = v(rv[0](2*t^2))"), L));
  EXPECT_TRUE(evaluate(P("rv[0](t^2) = rv[0](t^2 + t^3)"), L));
  EXPECT_FALSE(evaluate(P("rv[1](t^2) = rv[1](t^2 + t^3)"), L));
}

TEST(Evaluate, SeverityPattern) {
  // (t + t^3)^2 - t^2 = 2 t^4 + t^6: the two leading terms cancel, so the
  // rv-sum is ambiguous with severity 4 - 2 = 2 > 0
  auto chi = P("EX w1:RV[0]. EX w2:RV[0]. v(w1) != v(w2) & oplus[0](rv[0](x^2), rv[0](-t^2), w1) & "
               "oplus[0](rv[0](x^2), rv[0](-t^2), w2)");
  Env e;
  e.field["x"] = T() + T(3);
  EXPECT_TRUE(evaluate(chi, L, e));
  e.field["x"] = T() + T(2);  // 2 t^3 + t^4, severity 1
  EXPECT_TRUE(evaluate(chi, L, e));
  e.field["x"] = Q(2) * T();  // 4t^2 - t^2 does not cancel
  EXPECT_FALSE(evaluate(chi, L, e));
  // severity 2 does not exceed order 2
  auto chi2 = P("EX w1:RV[2]. EX w2:RV[2]. v(w1) != v(w2) & oplus[2](rv[2](x^2), rv[2](-t^2), w1) & "
                "oplus[2](rv[2](x^2), rv[2](-t^2), w2)");
  e.field["x"] = T() + T(3);
  EXPECT_FALSE(evaluate(chi2, L, e));
}

TEST(Evaluate, SumWitness) {
  auto phi = P("EX w:RV[0]. oplus[0](rv[0](1), rv[0](t), w) & w = rv[0](1)");
  EXPECT_TRUE(evaluate(phi, L));
  auto psi = P("EX w:RV[0]. oplus[0](rv[0](1), rv[0](t), w) & w = rv[0](2)");
  EXPECT_FALSE(evaluate(psi, L));
}

TEST(Evaluate, NonEffectiveQuantifier) {
  EXPECT_THROW(evaluate(P("EX w:RV[0]. v(w) < v(rv[0](1))"), L), NonEffectiveQuantifier);
}

TEST(Evaluate, FreeVariablesMustBeAssigned) {
  EXPECT_THROW(evaluate(P("x = 0"), L), PreconditionViolated);
}

TEST(Evaluate, PadicAtoms) {
  EXPECT_TRUE(evaluate(P("rv[1](50) = rv[1](1)", P7), P7));
  EXPECT_FALSE(evaluate(P("rv[2](50) = rv[2](1)", P7), P7));
  EXPECT_TRUE(evaluate(P("v(rv[0](49)) > v(rv[0](7))", P7), P7));
}

TEST(Formula, Substitution) {
  auto phi = P("EX y:K. y^2 = x & x = 4");
  auto s = substitute(phi, {{"x", Q(4)}});
  EXPECT_TRUE(free_vars(s).field.empty());
  EXPECT_EQ(field_quantifier_count(s), 1u);
  // bound occurrences are untouched
  auto b = substitute(P("EX x:K. x = 1"), {{"x", Q(2)}});
  EXPECT_EQ(print_formula(b), "EX x:K. x = 1");
}

TEST(Json, RoundTrip) {
  const std::vector<std::string> cases = {
      "EX x:K. rv[0](x^2 - t^2) = rv[0](0)",
      "ALL w:RV[2]. proj[0](w) = rv[0](1) -> v(w) = v(rv[2](1))",
      "EX w1:RV[0]. EX w2:RV[0]. v(w1) != v(w2) & oplus[0](rv[0](x), -rv[0](t)^2, w1)",
      "rv[0]{v=1; unit=3} = rv[0](3*t) | !(x = 1 + O(t^5))",
  };
  for (const auto& s : cases) {
    auto phi = P(s);
    auto j = formula_to_json(phi);
    auto back = formula_from_json(json::parse(j.dump()), L);
    EXPECT_EQ(print_formula(back), print_formula(phi)) << s;
    EXPECT_EQ(formula_to_json(back), j) << s;
  }
}

TEST(Json, QeOutputRoundTrips) {
  for (const char* s : {"EX y:K. y^2 = 1 + t", "EX y:K. y^2 - t^2 = 0", "EX x:K. rv[0](x - t) = w & rv[0](x) = u"}) {
    auto phi = P(s, L, {{"w", 0}, {"u", 0}});
    auto out = qe(phi, L);
    auto back = formula_from_json(json::parse(formula_to_json(out).dump()), L);
    EXPECT_EQ(print_formula(back), print_formula(out)) << s;
    auto reparsed = P(print_formula(out), L, {{"w", 0}, {"u", 0}});
    EXPECT_EQ(print_formula(reparsed), print_formula(out)) << s;
  }
}

// Random formulas over a small atom pool: print/parse is a fixed point and
// evaluation is preserved.
TEST(Property, PrintParseRandom) {
  selftest::Rng rng(11);
  const std::vector<std::string> atoms = {
      "x = 1", "rv[0](x - t) = rv[0](t^2)", "v(rv[1](x)) < v(rv[1](t))", "oplus[0](rv[0](x), rv[0](-1), rv[0](t))",
      "true", "false", "x^2 = t^2"};
  std::function<std::string(int)> gen = [&](int depth) -> std::string {
    if (depth == 0 || rng.uniform(0, 3) == 0) return atoms[rng.uniform(0, atoms.size() - 1)];
    switch (rng.uniform(0, 3)) {
      case 0: return "!(" + gen(depth - 1) + ")";
      case 1: return "(" + gen(depth - 1) + ") & (" + gen(depth - 1) + ")";
      case 2: return "(" + gen(depth - 1) + ") | (" + gen(depth - 1) + ")";
      default: return "(" + gen(depth - 1) + ") -> (" + gen(depth - 1) + ")";
    }
  };
  auto xs = selftest::sample_grid(L);
  for (int i = 0; i < 200; ++i) {
    auto s = gen(4);
    auto phi = P(s);
    auto printed = print_formula(phi);
    auto again = P(printed);
    ASSERT_EQ(print_formula(again), printed) << s;
    Env e;
    e.field["x"] = xs[static_cast<std::size_t>(rng.uniform(0, xs.size() - 1))];
    EXPECT_EQ(evaluate(phi, L, e), evaluate(again, L, e)) << s;
  }
}
