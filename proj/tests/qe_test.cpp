#include <gtest/gtest.h>

#include "hqe/logic/parser.hpp"
#include "hqe/logic/qe.hpp"
#include "hqe/selftest/grid.hpp"

using namespace hqe;

namespace {
const Field L = Field::laurent(64);

FormulaPtr P(const std::string& s, const Field& f = L) { return parse_formula(s, f, {}); }
bool D(const std::string& s, const Field& f = L) { return decide(P(s, f), f); }

// n != 0 is a d-th power in Q_p iff d | v_p(n) and the unit part is a d-th
// power mod p (mod 8 for squares at p = 2).
bool is_padic_power(long n, long p, int d) {
  int k = 0;
  while (n % p == 0) n /= p, ++k;
  if (k % d != 0) return false;
  long m = p == 2 && d == 2 ? 8 : p;
  long u = ((n % m) + m) % m;
  for (long y = 1; y < m; ++y) {
    long pw = 1;
    for (int i = 0; i < d; ++i) pw = pw * y % m;
    if (pw == u) return true;
  }
  return false;
}
}  // namespace

TEST(Qe, DiscriminatingPair) {
  auto yes = qe(P("EX y:K. y^2 = t^2"), L);
  auto no = qe(P("EX y:K. y^2 = 2*t^2"), L);
  EXPECT_TRUE(field_quantifier_free(yes));
  EXPECT_TRUE(field_quantifier_free(no));
  EXPECT_TRUE(evaluate(yes, L));
  EXPECT_FALSE(evaluate(no, L));
}

TEST(Qe, IdentityWithoutFieldQuantifier) {
  for (const char* s : {"rv[0](t^2) = rv[0](2*t^2)", "true & !false", "v(rv[1](t)) < v(rv[1](1))"}) {
    EXPECT_EQ(print_formula(qe(P(s), L)), print_formula(P(s))) << s;
  }
}

TEST(Decide, Examples) {
  EXPECT_TRUE(D("EX y:K. y^2 = 1 + t"));
  EXPECT_TRUE(D("EX y:K. y = 0"));
  EXPECT_TRUE(D("EX y:K. y^2 - t^2 = 0"));
  EXPECT_FALSE(D("EX y:K. y^2 - 2*t^2 = 0"));
  EXPECT_TRUE(D("ALL y:K. !(y^2 = 2*t^2)"));
  EXPECT_FALSE(D("ALL y:K. !(y^2 = t^2)"));
  const Field P2 = Field::padic(2, 64);
  EXPECT_TRUE(D("EX y:K. y^2 = 17", P2));
  EXPECT_FALSE(D("EX y:K. y^2 = 3", P2));
}

TEST(Decide, SideConditions) {
  // roots of y^2 - t^2 are t and -t
  EXPECT_TRUE(D("EX y:K. y^2 = t^2 & rv[0](y) = rv[0](-t)"));
  EXPECT_FALSE(D("EX y:K. y^2 = t^2 & v(rv[0](y)) < v(rv[0](t))"));
  EXPECT_TRUE(D("EX y:K. (y - 1)*(y^2 - 2) = 0 & rv[1](y - 1) = rv[1](0)"));
  EXPECT_FALSE(D("EX y:K. y^2 = 1 + t & rv[1](y) = rv[1](1 - t)"));
  EXPECT_TRUE(D("EX y:K. y^2 = 1 + t & rv[1](y) = rv[1](-1 - t/2)"));
}

TEST(Decide, NeedsSentence) {
  EXPECT_THROW(D("EX y:K. y = x"), PreconditionViolated);
}

TEST(NormalForm, RootPieces) {
  NormalForm nf = normal_form(P("x^2 = t^2"), "x", L);
  ASSERT_EQ(nf.centers.size(), 2u);
  EXPECT_EQ(format(nf.centers[0] * nf.centers[1]), format(-FieldElem::uniformizer(L).pow(2)));
  EXPECT_EQ(nf.orders, (std::vector<std::int64_t>{0, 0}));
  FieldElem t = FieldElem::uniformizer(L);
  EXPECT_TRUE(nf.member(t));
  EXPECT_TRUE(nf.member(-t));
  EXPECT_FALSE(nf.member(t + t.pow(5)));
  EXPECT_FALSE(nf.member(FieldElem::zero(L)));
}

TEST(NormalForm, AlreadyPullback) {
  NormalForm nf = normal_form(P("v(rv[0](x - 1)) > v(rv[0](1))"), "x", L);
  ASSERT_EQ(nf.centers.size(), 1u);
  EXPECT_TRUE((nf.centers[0] - FieldElem::one(L)).is_zero());
  EXPECT_TRUE(nf.member(FieldElem::one(L) + FieldElem::uniformizer(L)));
  EXPECT_TRUE(nf.member(FieldElem::one(L)));
  EXPECT_FALSE(nf.member(FieldElem::from_rational(L, 2)));
}

TEST(NormalForm, True) {
  NormalForm nf = normal_form(P("true"), "x", L);
  ASSERT_EQ(nf.centers.size(), 1u);
  EXPECT_TRUE(nf.centers[0].is_zero());
  EXPECT_TRUE(evaluate(nf.D, L));
}

TEST(Property, PadicSquaresAndCubes) {
  selftest::Rng g(5);
  const Field P2 = Field::padic(2, 64), P3 = Field::padic(3, 64), P7 = Field::padic(7, 64);
  for (int i = 0; i < 40; ++i) {
    long n = g.uniform(1, 400) * (g.coin() ? 1 : -1);
    std::string s = std::to_string(n);
    EXPECT_EQ(D("EX y:K. y^2 = " + s, P2), is_padic_power(n, 2, 2)) << n;
    EXPECT_EQ(D("EX y:K. y^2 = " + s, P3), is_padic_power(n, 3, 2)) << n;
    if (i < 15) EXPECT_EQ(D("EX y:K. y^3 = " + s, P7), is_padic_power(n, 7, 3)) << n;
  }
}

TEST(Property, LaurentMonomialSquares) {
  // c t^k is a square in Q((t)) iff k is even and c is a square in Q
  selftest::Rng g(6);
  for (int i = 0; i < 40; ++i) {
    long c = g.uniform(1, 6);
    long k = g.uniform(-3, 4);
    bool sq = k % 2 == 0 && (c == 1 || c == 4);
    if (g.coin()) {
      c = -c;
      sq = false;
    }
    std::string s = "EX y:K. y^2 = " + std::to_string(c) + "*t^" + std::to_string(k);
    EXPECT_EQ(D(s), sq) << s;
  }
}

TEST(Property, NormalFormMembership) {
  const char* phis[] = {"x^2 = t^2", "v(rv[0](x^2 - t)) < v(rv[0](t^2))", "rv[1](x^3 - x) = rv[1](t)",
                        "x = 0 | v(rv[0](x - 1)) > v(rv[0](t))"};
  for (const char* s : phis) {
    NormalForm nf = normal_form(P(s), "x", L);
    for (std::int64_t o : nf.orders) EXPECT_EQ(o, 0) << s;
    auto pts = selftest::sample_grid(L);
    for (std::size_t i = 0; i < 60 && i < pts.size(); ++i) {
      Env e;
      e.field["x"] = pts[i];
      EXPECT_EQ(nf.member(pts[i]), evaluate(P(s), L, e)) << s << " at " << format(pts[i]);
    }
  }
}
