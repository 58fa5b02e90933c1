#include <gtest/gtest.h>

#include <random>

#include "hqe/rv.hpp"

using namespace hqe;

namespace {
const Field L = Field::laurent(64);
FieldElem T(std::int64_t k = 1) { return FieldElem::uniformizer(L).pow(k); }
FieldElem Q(const mpq_class& q) { return FieldElem::from_rational(L, q); }

FieldElem example_series(const mpq_class& c2) {
  return T(-2) + T(-1) + Q(1) + T() + Q(c2) * T(2) + T(3);
}

struct Gen {
  std::mt19937_64 rng;
  explicit Gen(std::uint64_t seed) : rng(seed) {}
  int uniform(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }
  FieldElem laurent() {
    std::vector<mpq_class> c;
    int n = uniform(1, 6);
    for (int i = 0; i < n; ++i) c.emplace_back(uniform(-3, 3), uniform(1, 2));
    if (c[0] == 0) c[0] = 1;
    return FieldElem::series(L, uniform(-3, 3), c);
  }
  FieldElem padic(const Field& f) {
    mpq_class q(uniform(1, 2000), uniform(1, 50));
    q.canonicalize();
    if (uniform(0, 1)) q = -q;
    return FieldElem::from_rational(f, q * detail::pow_p(f.p, uniform(-2, 2)));
  }
};
}  // namespace

TEST(Rv, SeriesExample) {
  FieldElem x = example_series(2), y = example_series(1);
  EXPECT_EQ(rv(x, 3), rv(y, 3));
  EXPECT_NE(rv(x, 4), rv(y, 4));
  EXPECT_EQ(rv_project(rv(x, 4), 3), rv(y, 3));
}

TEST(Rv, DistinctLeadingCoefficients) { EXPECT_NE(rv(T(2), 0), rv(Q(2) * T(2), 0)); }

TEST(Rv, ProjectionEdgeCases) {
  RVElem a = rv(example_series(2), 4);
  EXPECT_EQ(rv_project(a, 4), a);
  EXPECT_EQ(rv_project(RVElem::infinity(L, 4), 2), RVElem::infinity(L, 2));
  EXPECT_THROW(rv_project(a, 5), OrderViolation);
}

TEST(Rv, Multiplication) {
  EXPECT_EQ(rv_mul(rv(T(), 0), rv(T(), 0)), rv(T(2), 0));
  EXPECT_EQ(rv_inv(rv(Q(2) * T(), 0)), rv(T(-1) * Q(mpq_class(1, 2)), 0));
  EXPECT_EQ(rv_mul(rv(T(), 0), RVElem::infinity(L, 0)), RVElem::infinity(L, 0));
  EXPECT_THROW(rv_mul(rv(T(), 0), rv(T(), 1)), OrderMismatch);
  // inverse at higher order: 1/(1+t) = 1 - t + t^2 - ...
  EXPECT_EQ(rv_inv(rv(Q(1) + T(), 3)), rv(Q(1) - T() + T(2) - T(3), 3));
}

TEST(Rv, SumAnalysis) {
  auto a = rv_sum_analyze({Q(1), Q(-1) + T(5)}, 3);
  EXPECT_FALSE(a.well_defined);
  EXPECT_EQ(a.severity, ValQ(5));
  EXPECT_FALSE(a.witness_value.has_value());

  auto b = rv_sum_analyze({Q(1), T()}, 0);
  ASSERT_TRUE(b.well_defined);
  EXPECT_EQ(*b.result, rv(Q(1) + T(), 0));

  auto c = rv_sum_analyze(std::vector<RVElem>{rv(Q(1), 5), rv(Q(-1) + T(3), 5)});
  EXPECT_FALSE(c.well_defined);
  EXPECT_TRUE(c.severity_known);
  EXPECT_EQ(c.severity, ValQ(3));
  EXPECT_EQ(*c.witness_value, ValQ(3));
  EXPECT_EQ(*rv_sum_projection({rv(Q(1), 5), rv(Q(-1) + T(3), 5)}), rv(T(3), 2));

  // class-level: the cancellation is beyond the order
  auto d = rv_sum_analyze(std::vector<RVElem>{rv(Q(1), 3), rv(Q(-1) + T(5), 3)});
  EXPECT_FALSE(d.severity_known);
}

TEST(Rv, OplusExamples) {
  EXPECT_TRUE(oplus_holds(rv(Q(1), 0), rv(Q(-1) + T(3), 0), rv(T(3), 0)));
  EXPECT_TRUE(oplus_holds(rv(Q(1), 0), rv(Q(-1) + T(3), 0), rv(T(5), 0)));
  EXPECT_FALSE(oplus_holds(rv(Q(1), 0), rv(T(), 0), rv(T(), 0)));
  EXPECT_TRUE(oplus_holds(rv(Q(1), 0), rv(T(), 0), rv(Q(1) + T(), 0)));
  EXPECT_TRUE(oplus_holds(rv(Q(1), 0), rv(Q(-1), 0), RVElem::infinity(L, 0)));
}

TEST(Rv, ValueAndResidue) {
  EXPECT_EQ(value_of(rv(Q(3) * T(2), 0)), ValQ(2));
  EXPECT_EQ(residue_of(rv(Q(3) + T(), 0)).digits, std::vector<mpq_class>{3});
  EXPECT_THROW(residue_of(rv(T(-1), 0)), NegativeValue);
  EXPECT_EQ(res_delta(Q(2) + T(), 0).digits, std::vector<mpq_class>{2});

  Field P = Field::padic(7, 20);
  FieldElem x = FieldElem::from_rational(P, 3 + 49 * 5);
  // R_delta is O modulo pi^(delta+1)
  EXPECT_EQ(res_delta(x, 1).as_integer(), 3);
  EXPECT_EQ(res_delta(x, 2).as_integer(), 3 + 49 * 5);
}

TEST(Rv, PositivityPredicate) {
  RVElem d0 = rv(T(), 0);
  EXPECT_TRUE(rv_positive(rv(T(), 0), d0));
  EXPECT_FALSE(rv_positive(rv(T(-1), 0), d0));
  for (std::int64_t delta = 0; delta <= 3; ++delta) {
    for (std::int64_t k = -4; k <= 4; ++k) {
      EXPECT_EQ(rv_positive(rv(Q(5) * T(k), delta)), k > 0) << delta << " " << k;
    }
  }
}

TEST(Rv, TextRoundTrip) {
  RVElem a = rv(Q(mpq_class(1, 2)) * T(-2) + T(), 3);
  EXPECT_EQ(format(a), "rv[3]{v=-2; unit=1/2,0,0,1}");
  EXPECT_EQ(parse_rv(L, format(a)), a);
  EXPECT_EQ(parse_rv(L, "rv[1]{inf}"), RVElem::infinity(L, 1));
  EXPECT_THROW(parse_rv(L, "rv[1]{v=0; unit=0,1}"), SyntaxError);
  EXPECT_THROW(parse_rv(Field::padic(5), "rv[0]{v=0; unit=7}"), SyntaxError);
}

TEST(RvProperty, EquivalenceThreeWays) {
  Gen g(7);
  Field P = Field::padic(3, 64);
  for (int it = 0; it < 400; ++it) {
    bool padic = it % 2;
    FieldElem y = padic ? g.padic(P) : g.laurent();
    // half the time, x is a small perturbation of y
    FieldElem x = y;
    if (g.uniform(0, 1)) {
      FieldElem m = padic ? g.padic(P) : g.laurent();
      x = y * ((padic ? FieldElem::one(P) : Q(1)) + m * (padic ? FieldElem::from_rational(P, detail::pow_p(3, g.uniform(0, 6))) : T(g.uniform(0, 6))));
      if (x.is_exact_zero()) continue;
    } else {
      x = padic ? g.padic(P) : g.laurent();
    }
    for (std::int64_t d = 0; d <= 4; ++d) {
      bool by_class = rv(x, d) == rv(y, d);
      bool by_value = (x - y).val() > y.val() + ValQ(d);
      ResidueData r;
      bool by_residue = false;
      FieldElem q = x / y;
      if (q.val() >= ValQ(0)) by_residue = res_delta(q, d).is_one();
      EXPECT_EQ(by_class, by_value) << padic << " x=" << format(x) << " y=" << format(y) << " d=" << d;
      EXPECT_EQ(by_class, by_residue);
      if (by_class) EXPECT_EQ(x.val(), y.val());
    }
  }
}

TEST(RvProperty, StabilityOfWellDefinedSums) {
  Gen g(11);
  for (int it = 0; it < 300; ++it) {
    FieldElem x = g.laurent(), y = g.laurent();
    FieldElem s = x + y;
    if (s.is_exact_zero()) continue;
    std::int64_t d = g.uniform(0, 3);
    ValQ mn = min(x.val(), y.val());
    if (s.val() == mn) {
      FieldElem z = x * (Q(1) + g.laurent().pow(0) * T(d + 1 + g.uniform(0, 3)));
      ASSERT_EQ(rv(z, d), rv(x, d));
      EXPECT_EQ(rv(z + y, d), rv(s, d));
    } else if (s.val() > x.val()) {
      std::int64_t eps = (s.val() - x.val()).as_int();
      FieldElem z = x * (Q(1) + T(d + eps));
      ASSERT_EQ(rv(z, d), rv(x, d));
      EXPECT_NE(rv(z + y, d), rv(s, d));
    }
  }
}
