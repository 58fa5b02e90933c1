#include <gtest/gtest.h>

#include "hqe/ball.hpp"

using namespace hqe;

namespace {
const Field L = Field::laurent(64);
FieldElem T(std::int64_t k = 1) { return FieldElem::uniformizer(L).pow(k); }
FieldElem Q(const mpq_class& q) { return FieldElem::from_rational(L, q); }
}  // namespace

TEST(Ball, Normalization) {
  Ball b = Ball::open(Q(0), ValQ(1) / 2);
  EXPECT_TRUE(b.is_closed());
  EXPECT_EQ(b.radius, 1);
  EXPECT_EQ(Ball::closed(Q(0), ValQ(1) / 2).radius, 1);
  EXPECT_EQ(Ball::open(Q(0), 1).radius, 2);
  EXPECT_TRUE(Ball::open(Q(0), ValQ::inf()).is_empty());
  EXPECT_TRUE(Ball::closed(Q(0), ValQ::inf()).is_point());
  EXPECT_EQ(b.str(), "B>1/2(0)");
}

TEST(Ball, MembershipAndRecentering) {
  Ball b = Ball::open(T(), 1);
  EXPECT_TRUE(b.contains(T() + T(2)));
  EXPECT_FALSE(b.contains(Q(2) * T()));
  Ball c = Ball::open(T() + T(2), 1);
  EXPECT_TRUE(b.subset_of(c) && c.subset_of(b));
}

TEST(Cheese, IntersectExamples) {
  SwissCheese a = SwissCheese::of(Ball::closed(Q(0), 0));
  SwissCheese b = SwissCheese::of(Ball::closed(Q(0), 1));
  SwissCheese ab = cheese_intersect(a, b);
  EXPECT_EQ(ab.outer.radius, 1);
  EXPECT_TRUE(ab.holes.empty());

  EXPECT_TRUE(cheese_intersect(SwissCheese::of(Ball::open(T(), 1)), SwissCheese::of(Ball::open(Q(2) * T(), 1))).is_empty());

  SwissCheese c{Ball::whole(L), {Ball::open(Q(0), 1)}};
  SwissCheese r = cheese_intersect(c, a);
  EXPECT_EQ(r.outer.radius, 0);
  ASSERT_EQ(r.holes.size(), 1u);
  EXPECT_EQ(r.holes[0].radius, 2);
  EXPECT_FALSE(r.is_empty());
  EXPECT_TRUE(r.contains(Q(1)));
  EXPECT_FALSE(r.contains(T(2)));
}

TEST(Cheese, Emptiness) {
  // a closed ball minus all its p children is empty in padic, not in laurent-q
  Field P2 = Field::padic(2, 32);
  SwissCheese s{Ball::closed(FieldElem::zero(P2), 0),
                {Ball::closed(FieldElem::zero(P2), 1), Ball::closed(FieldElem::one(P2), 1)}};
  EXPECT_TRUE(s.is_empty());
  SwissCheese s2{Ball::closed(FieldElem::zero(P2), 0),
                 {Ball::closed(FieldElem::zero(P2), 1), Ball::closed(FieldElem::one(P2), 2)}};
  EXPECT_FALSE(s2.is_empty());
  SwissCheese s3{Ball::closed(FieldElem::zero(P2), 0),
                 {Ball::closed(FieldElem::zero(P2), 1), Ball::closed(FieldElem::one(P2), 2),
                  Ball::closed(FieldElem::from_rational(P2, 3), 2)}};
  EXPECT_TRUE(s3.is_empty());
  SwissCheese l{Ball::closed(Q(0), 0), {Ball::closed(Q(0), 1), Ball::closed(Q(1), 1)}};
  EXPECT_FALSE(l.is_empty());
  SwissCheese hole_is_outer{Ball::closed(Q(0), 0), {Ball::closed(Q(1), 0)}};
  EXPECT_TRUE(hole_is_outer.is_empty());
  SwissCheese points{Ball::closed(Q(0), 0), {Ball::point(Q(0)), Ball::point(Q(1))}};
  EXPECT_FALSE(points.is_empty());
}
