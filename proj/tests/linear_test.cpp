#include <gtest/gtest.h>

#include "hqe/logic/linear.hpp"
#include "hqe/selftest/suites_logic.hpp"

using namespace hqe;

namespace {
const Field L = Field::laurent(64);
FieldElem T(std::int64_t k = 1) { return FieldElem::uniformizer(L).pow(k); }
FieldElem one() { return FieldElem::one(L); }

// Each constraint, scaled by 1/a, is the open ball {x : v(x - (c + z)) > v(z) + d}
// with c = b/a, or the point c when z = 0. Two balls meet iff the distance of
// their centers exceeds the smaller radius; finitely many pairwise meeting
// balls share a point.
struct Ball {
  FieldElem center;
  ValQ radius;  // points: infinite radius
  bool point;
};

Ball ball_of(const LinearConstraint& k) {
  FieldElem z = k.z / k.a, c = k.b / k.a;
  if (z.is_zero()) return {c, ValQ::inf(), true};
  return {c + z, z.val() + ValQ(k.delta), false};
}

bool meet(const Ball& p, const Ball& q) {
  ValQ d = val_or_inf(p.center - q.center);
  if (p.point && q.point) return (p.center - q.center).is_zero();
  if (p.point) return d > q.radius;
  if (q.point) return d > p.radius;
  return d > min(p.radius, q.radius);
}

bool ball_oracle(const std::vector<LinearConstraint>& cs) {
  std::vector<Ball> bs;
  for (const auto& c : cs) bs.push_back(ball_of(c));
  for (std::size_t i = 0; i < bs.size(); ++i)
    for (std::size_t j = i + 1; j < bs.size(); ++j)
      if (!meet(bs[i], bs[j])) return false;
  return true;
}
}  // namespace

TEST(Linear, NestedBallsMeet) {
  // B>1(t) and B>1(t + t^3)
  EXPECT_TRUE(eliminate_linear_exists({{T(), one(), FieldElem::zero(L), 0}, {T(), one(), -T(3), 0}}));
}

TEST(Linear, DisjointBalls) {
  EXPECT_FALSE(eliminate_linear_exists({{T(), one(), FieldElem::zero(L), 0}, {T() * FieldElem::from_rational(L, 2), one(), FieldElem::zero(L), 0}}));
}

TEST(Linear, SingleConstraintAlwaysHolds) {
  selftest::Rng g(7);
  for (int i = 0; i < 50; ++i) {
    LinearConstraint c{g.element(L, -3, 3), FieldElem::monomial(L, g.uniform(1, 4), g.uniform(-2, 2)), g.element(L, -3, 3), g.uniform(0, 3)};
    EXPECT_TRUE(eliminate_linear_exists({c}));
  }
  EXPECT_TRUE(eliminate_linear_exists({}));
}

TEST(Linear, PointConstraints) {
  LinearConstraint at_t{FieldElem::zero(L), one(), T(), 0};
  LinearConstraint at_t2{FieldElem::zero(L), one(), T(2), 0};
  EXPECT_TRUE(eliminate_linear_exists({at_t, at_t}));
  EXPECT_FALSE(eliminate_linear_exists({at_t, at_t2}));
  // x = t lies in B>2(t + t^2) only if v(-t^2) > 2, which fails
  LinearConstraint ball{T(2), one(), T(), 0};
  EXPECT_FALSE(eliminate_linear_exists({at_t, ball}));
  EXPECT_TRUE(eliminate_linear_exists({{FieldElem::zero(L), one(), T() + T(2), 0}, ball}));
}

TEST(Linear, ScalingByA) {
  // rv(t) = rv(t^-1 x): x in B>2(t^2)
  LinearConstraint c{T(), T(-1), FieldElem::zero(L), 0};
  EXPECT_TRUE(eliminate_linear_exists({c, {FieldElem::zero(L), one(), T(2) + T(3), 0}}));
  EXPECT_FALSE(eliminate_linear_exists({c, {FieldElem::zero(L), one(), T(2) + T(2), 0}}));
}

TEST(Linear, ZeroCoefficientRejected) {
  EXPECT_THROW(eliminate_linear_exists({{T(), FieldElem::zero(L), one(), 0}}), PreconditionViolated);
}

TEST(Property, LinearAgreesWithBallOracle) {
  selftest::Rng g(2024);
  for (const Field& f : {L, Field::padic(3, 64), Field::padic(2, 64)}) {
    int truths = 0;
    for (int i = 0; i < 300; ++i) {
      FieldElem x0 = g.element(f, -2, 3);
      std::vector<LinearConstraint> cs;
      int n = static_cast<int>(g.uniform(1, 4));
      for (int k = 0; k < n; ++k) cs.push_back(selftest::detail::random_constraint(f, g, x0));
      bool want = ball_oracle(cs);
      truths += want;
      ASSERT_EQ(eliminate_linear_exists(cs), want) << f.name() << " system " << i;
    }
    EXPECT_GT(truths, 30) << f.name();
    EXPECT_LT(truths, 270) << f.name();
  }
}

TEST(Property, EmittedFormulaMatchesDecision) {
  selftest::Rng g(99);
  for (const Field& f : {L, Field::padic(3, 64)}) {
    for (int i = 0; i < 100; ++i) {
      FieldElem x0 = g.element(f, -2, 3);
      std::vector<LinearConstraint> cs;
      std::vector<SymbolicConstraint> sym;
      int n = static_cast<int>(g.uniform(1, 3));
      for (int k = 0; k < n; ++k) {
        cs.push_back(selftest::detail::random_constraint(f, g, x0));
        sym.push_back({RVTerm::literal(rv_or_inf(cs.back().z, cs.back().delta)), cs.back().a, cs.back().b});
      }
      FormulaPtr phi = emit_linear_exists(f, sym);
      EXPECT_TRUE(field_quantifier_free(phi));
      ASSERT_EQ(evaluate(phi, f), eliminate_linear_exists(cs)) << f.name() << " system " << i << ": " << print_formula(phi);
    }
  }
}
