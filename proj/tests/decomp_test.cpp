#include <gtest/gtest.h>

#include "hqe/decomp.hpp"
#include "hqe/selftest/grid.hpp"

using namespace hqe;

namespace {
const Field L = Field::laurent(64);
FieldElem T(std::int64_t k = 1) { return FieldElem::uniformizer(L).pow(k); }
FieldElem Q(const mpq_class& q) { return FieldElem::from_rational(L, q); }
Poly X(const Field& f = L) { return Poly::monomial(f, 1); }
Poly C(const FieldElem& c) { return Poly::constant(c); }

std::vector<FieldElem> points_for(const Poly& f, const std::vector<Piece>& ps) {
  std::vector<FieldElem> centers;
  for (const auto& p : ps) centers.push_back(p.center);
  auto pts = selftest::sample_grid(f.field());
  auto near = selftest::perturbations(centers);
  pts.insert(pts.end(), near.begin(), near.end());
  return pts;
}

// every sample lies in exactly one piece and the valuation bound holds there
void check_decomposition(const Poly& f) {
  auto ps = decompose(f, SwissCheese::whole(f.field()));
  ASSERT_FALSE(ps.empty());
  for (const auto& p : ps) {
    bool root = false;
    for (std::int64_t n = 0; n <= f.degree() && !root; ++n) root = derivative(f, n)(p.center).is_zero();
    EXPECT_TRUE(root || f.degree() == 0) << "center " << format(p.center);
  }
  for (const auto& x : points_for(f, ps)) {
    int hits = 0;
    const Piece* in = nullptr;
    for (const auto& p : ps) {
      if (p.cheese.contains(x)) {
        ++hits;
        in = &p;
      }
    }
    ASSERT_EQ(hits, 1) << "x = " << format(x) << " f = " << f;
    ValQ lo = piece_eval_v(*in, x);
    ValQ vf = val_or_inf(f(x));
    EXPECT_LE(lo, vf) << format(x);
    EXPECT_LE(vf, lo + in->severity_bound) << format(x) << " f = " << f;
    if (!f.field().is_padic()) EXPECT_EQ(vf, lo) << format(x);
  }
}
}  // namespace

TEST(MBound, Examples) {
  Poly f = X() * X() - C(T());
  EXPECT_EQ(m_bound(f, Q(0), SwissCheese::whole(L)), 2);
  EXPECT_EQ(m_bound(f, Q(0), SwissCheese::of(Ball::closed(Q(0), 1))), 0);
  EXPECT_EQ(m_bound(C(Q(3)), Q(0), SwissCheese::whole(L)), 0);
}

TEST(Decompose, SquareMinusT) {
  auto ps = decompose(X() * X() - C(T()), SwissCheese::whole(L));
  ASSERT_EQ(ps.size(), 2u);
  EXPECT_EQ(ps[0].m, 2);
  EXPECT_EQ(ps[0].cheese.str(), "K \\ B>=1/2(0)");
  EXPECT_EQ(ps[1].m, 0);
  EXPECT_EQ(ps[1].cheese.str(), "B>1/2(0)");
  EXPECT_EQ(piece_eval_v(ps[0], Q(2) * T(-1)), ValQ(-2));
  check_decomposition(X() * X() - C(T()));
}

TEST(Decompose, SquareMinusTSquared) {
  Poly f = X() * X() - C(T(2));
  auto ps = decompose(f, SwissCheese::whole(L));
  ASSERT_EQ(ps.size(), 5u);
  int m2 = 0, m1 = 0, m0 = 0;
  for (const auto& p : ps) (p.m == 2 ? m2 : p.m == 1 ? m1 : m0)++;
  EXPECT_EQ(m2, 2);
  EXPECT_EQ(m1, 2);
  EXPECT_EQ(m0, 1);
  check_decomposition(f);
  const Piece& at_t = piece_containing(ps, T() + T(3));
  EXPECT_TRUE((at_t.center - T()).is_zero());
  EXPECT_EQ(at_t.m, 1);
  EXPECT_EQ(piece_eval_rv(at_t, T() + T(3), 0), rv(f(T() + T(3)), 0));
  EXPECT_EQ(piece_eval_rv(at_t, T() + T(3), 2), rv(f(T() + T(3)), 2));
}

TEST(Decompose, Constant) {
  auto ps = decompose(C(Q(5) * T(3)), SwissCheese::whole(L));
  ASSERT_EQ(ps.size(), 1u);
  EXPECT_EQ(ps[0].m, 0);
  EXPECT_EQ(piece_eval_v(ps[0], T(-4)), ValQ(3));
}

TEST(Decompose, RestrictedToCheese) {
  SwissCheese s = SwissCheese::of(Ball::closed(Q(0), 0));
  auto ps = decompose(X() * X() - C(T()), s);
  for (const auto& p : ps) EXPECT_FALSE(cheese_intersect(p.cheese, s).is_empty());
  EXPECT_THROW(piece_containing(ps, T(-1)), NotInPiece);
}

TEST(RvDecompose, NoCollisionMeansOnePiece) {
  auto cells = rv_decompose({X() * X() - C(T())});
  ASSERT_EQ(cells.size(), 1u);
  EXPECT_TRUE(cells[0].cheese.outer.is_whole());
  EXPECT_EQ(cells[0].pieces[0].q, 1);
  for (const auto& x : selftest::sample_grid(L)) {
    EXPECT_EQ(piece_eval_rv(cells[0].pieces[0], x, 0), rv((X() * X() - C(T()))(x), 0));
  }
}

TEST(RvDecompose, TwoAdic) {
  Field P2 = Field::padic(2, 64);
  Poly f = X(P2) * X(P2) - C(FieldElem::from_rational(P2, 17));
  auto cells = rv_decompose({f});
  bool positive_offset = false;
  for (const auto& c : cells) positive_offset |= c.pieces[0].q_val > ValQ(0);
  EXPECT_TRUE(positive_offset);
  std::vector<FieldElem> centers;
  for (const auto& c : cells) centers.push_back(c.pieces[0].center);
  auto pts = selftest::sample_grid(P2);
  auto near = selftest::perturbations(centers);
  pts.insert(pts.end(), near.begin(), near.end());
  for (const auto& x : pts) {
    for (std::int64_t d = 0; d <= 2; ++d) {
      FieldElem fx = f(x);
      int hits = 0;
      for (const auto& c : cells) {
        if (!c.cheese.contains(x)) continue;
        ++hits;
        RVElem want = fx.is_zero() ? RVElem::infinity(P2, d) : rv(fx, d);
        EXPECT_EQ(piece_eval_rv(c.pieces[0], x, d), want) << format(x);
      }
      EXPECT_EQ(hits, 1);
    }
  }
}

TEST(DecomposeProperty, RandomPolynomials) {
  selftest::Rng rng(17);
  for (int it = 0; it < 30; ++it) {
    Field f = (it % 2) ? Field::padic(it % 4 == 1 ? 2 : 3, 64) : L;
    Poly p = (it % 3 == 0) ? rng.poly(f, rng.uniform(1, 4)) : rng.poly_with_roots(f, rng.uniform(1, 4));
    SCOPED_TRACE(format(p));
    check_decomposition(p);
  }
}
