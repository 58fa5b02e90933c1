#include <gtest/gtest.h>

#include <random>

#include "hqe/collision.hpp"
#include "hqe/hensel.hpp"
#include "hqe/literal.hpp"
#include "hqe/roots.hpp"

using namespace hqe;

namespace {
const Field L = Field::laurent(64);
FieldElem T(std::int64_t k = 1) { return FieldElem::uniformizer(L).pow(k); }
FieldElem Q(const mpq_class& q) { return FieldElem::from_rational(L, q); }
Poly X(const Field& f = L) { return Poly::monomial(f, 1); }
Poly C(const FieldElem& c) { return Poly::constant(c); }

// binomial(1/2, k), computed directly
mpq_class half_binomial(int k) {
  mpq_class r = 1;
  for (int i = 0; i < k; ++i) r *= mpq_class(1, 2) - i;
  for (int i = 1; i <= k; ++i) r /= i;
  return r;
}

// all x mod p^n with x^2 = a mod p^n, built by extending residues one digit at a time
std::vector<mpz_class> padic_sqrt_oracle(long p, long a, int n) {
  std::vector<mpz_class> sols;
  for (long x = 0; x < p; ++x) {
    if (((x * x - a) % p + p) % p == 0) sols.emplace_back(x);
  }
  mpz_class pk = p;
  for (int k = 1; k < n; ++k) {
    mpz_class next = pk * p;
    std::vector<mpz_class> ext;
    for (const auto& x : sols) {
      for (long d = 0; d < p; ++d) {
        mpz_class y = x + d * pk;
        mpz_class r = (y * y - a) % next;
        if (r == 0) ext.push_back(y);
      }
    }
    sols = ext;
    pk = next;
  }
  return sols;
}

bool matches_some(const mpz_class& got, const std::vector<mpz_class>& sols, const mpz_class& mod) {
  for (const auto& s : sols) {
    if (got % mod == s % mod) return true;
  }
  return false;
}
}  // namespace

TEST(NewtonLift, SquareRootOfOnePlusT) {
  Poly P = X() * X() - C(Q(1) + T());
  LiftCertificate c = newton_lift(P, Q(1), 0);
  for (int k = 0; k < 40; ++k) EXPECT_EQ(c.root.coefficient(k), half_binomial(k)) << k;
  EXPECT_EQ(c.separation, ValQ(1));
  EXPECT_TRUE((c.root * c.root - (Q(1) + T())).is_zero());
  EXPECT_GT(c.iterations, 0);
}

TEST(NewtonLift, AlreadyARoot) {
  LiftCertificate c = newton_lift(X() * X() - C(Q(1)), Q(1), 0);
  EXPECT_EQ(c.iterations, 0);
  EXPECT_EQ(c.root, Q(1));
}

TEST(NewtonLift, SqrtTwoSevenAdic) {
  Field P7 = Field::padic(7, 64);
  Poly P = X(P7) * X(P7) - C(FieldElem::from_rational(P7, 2));
  LiftCertificate c = newton_lift(P, FieldElem::from_rational(P7, 3), 0);
  EXPECT_EQ(c.root.truncated(2).approximant().rational(), 10);
  auto sols = padic_sqrt_oracle(7, 2, 40);
  ASSERT_EQ(sols.size(), 2u);
  mpz_class mod40 = detail::ipow(mpz_class(7), 40);
  EXPECT_TRUE(matches_some(c.root.unit_residue(40), sols, mod40));
  EXPECT_EQ(c.root.unit_residue(1), 3);
}

TEST(NewtonLift, HypothesisFails) {
  EXPECT_THROW(newton_lift(X() * X() - C(Q(2)), Q(1), 0), PreconditionViolated);
  // holds at delta = 0 but not at delta = 2
  Poly P = X() * X() - C(Q(1) + T());
  EXPECT_THROW(newton_lift(P, Q(1), 1), PreconditionViolated);
}

TEST(CollisionRoot, LaurentExample) {
  Poly f = X() * X() - C(T(2));
  CollisionRoot r = collision_root(f, Q(0), T() * (Q(1) + T()), 0);
  EXPECT_EQ(r.n, 0);
  EXPECT_TRUE((r.lambda - T()).is_zero());
  EXPECT_EQ(rv(r.lambda, 0), rv(T() * (Q(1) + T()), 0));
}

TEST(CollisionRoot, NoCollision) {
  EXPECT_THROW(collision_root(X() * X() - C(Q(2) * T(2)), Q(0), T(), 0), PreconditionViolated);
  EXPECT_THROW(collision_root(X() * X() - C(T(2)), Q(0), Q(0), 0), PreconditionViolated);
}

TEST(CollisionRoot, TwoAdicSqrt17) {
  Field P2 = Field::padic(2, 64);
  Poly f = X(P2) * X(P2) - C(FieldElem::from_rational(P2, 17));
  FieldElem zero = FieldElem::zero(P2);
  // beta = 1: severity 4 is not above 2^2 (v(2!) + 0) = 4
  EXPECT_THROW(collision_root(f, zero, FieldElem::one(P2), 0), PreconditionViolated);
  CollisionRoot r = collision_root(f, zero, FieldElem::from_rational(P2, 9), 0);
  EXPECT_EQ(r.n, 0);
  EXPECT_TRUE((r.lambda * r.lambda - FieldElem::from_rational(P2, 17)).is_zero());
  EXPECT_EQ(rv(r.lambda, 0), rv(FieldElem::from_rational(P2, 9), 0));
  auto sols = padic_sqrt_oracle(2, 17, 41);  // roots are determined mod 2^40
  EXPECT_TRUE(matches_some(r.lambda.unit_residue(40), sols, detail::ipow(mpz_class(2), 40)));
}

TEST(CollisionClasses, Examples) {
  auto c1 = collision_classes(X() * X() - C(T(2)), Q(0), 1, 0);
  ASSERT_EQ(c1.size(), 2u);
  std::vector<std::string> got;
  for (const auto& c : c1) {
    EXPECT_TRUE((c.lambda * c.lambda - T(2)).is_zero());
    EXPECT_EQ(rv(c.lambda, 0), c.cls);
  }
  EXPECT_TRUE(collision_classes(X() * X() - C(Q(2) * T(2)), Q(0), 1, 0).empty());
  for (std::int64_t rho = -3; rho <= 3; ++rho) {
    EXPECT_TRUE(collision_classes(X() * X() - C(T()), Q(0), rho, 0).empty());
  }
}

TEST(ResidueRoots, Examples) {
  EXPECT_EQ(residue_rational_roots(L, {-1, 0, 1}), (std::vector<mpq_class>{-1, 1}));
  EXPECT_TRUE(residue_rational_roots(L, {-2, 0, 1}).empty());
  EXPECT_EQ(residue_rational_roots(Field::padic(7), {-2, 0, 1}), (std::vector<mpq_class>{3, 4}));
  EXPECT_EQ(residue_rational_roots(L, {-3, 2}), (std::vector<mpq_class>{mpq_class(3, 2)}));
  // (6u - 1)(35u + 3): roots 1/6 and -3/35, factor search on composite coefficients
  std::vector<mpq_class> c{-3, 18 - 35, 210};
  EXPECT_EQ(residue_rational_roots(L, c), (std::vector<mpq_class>{mpq_class(-3, 35), mpq_class(1, 6)}));
  EXPECT_EQ(residue_root_multiplicity(L, {1, -2, 1}, 1), 2);
}

TEST(FindRoots, LaurentFactors) {
  Poly f = (X() - C(T())) * (X() - C(Q(2) * T())) * (X() + C(Q(1)));
  auto r = find_roots(f);
  ASSERT_EQ(r.size(), 3u);
  for (const auto& x : r) EXPECT_TRUE(f(x).is_zero());
  Poly g = (X() - C(T())) * (X() - C(T())) * (X() - C(Q(1)));
  EXPECT_EQ(find_roots(g).size(), 2u);
  Poly cluster = (X() - C(T())) * (X() - C(T() + T(5)));
  auto rc = find_roots(cluster);
  ASSERT_EQ(rc.size(), 2u);
  for (const auto& x : rc) EXPECT_TRUE(cluster(x).is_zero());
  EXPECT_TRUE(find_roots(X() * X() - C(T())).empty());
  EXPECT_TRUE(find_roots(X() * X() - C(Q(2))).empty());
}

TEST(FindRoots, Padic) {
  Field P5 = Field::padic(5, 64);
  Poly f = X(P5) * X(P5) + C(FieldElem::one(P5));
  auto r = find_roots(f);
  ASSERT_EQ(r.size(), 2u);
  for (const auto& x : r) EXPECT_TRUE(f(x).is_zero());
  auto one = FieldElem::one(P5);
  Poly cl = (X(P5) - C(one)) * (X(P5) - C(FieldElem::from_rational(P5, 1 + 125)));
  EXPECT_EQ(find_roots(cl).size(), 2u);
}

TEST(NewtonLiftProperty, RandomHypothesisInstances) {
  std::mt19937_64 rng(5);
  auto U = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
  int checked = 0;
  for (int it = 0; it < 200; ++it) {
    bool padic = it % 2;
    Field f = padic ? Field::padic(3, 64) : L;
    auto elem = [&](int lo) {
      if (padic) return FieldElem::from_rational(f, mpq_class(U(1, 80))) * FieldElem::monomial(f, 1, lo);
      return FieldElem::series(f, lo, {mpq_class(U(1, 4)), mpq_class(U(-3, 3)), mpq_class(U(-2, 2))});
    };
    FieldElem b = elem(0);
    Poly P = (X(f) - C(b)) * (X(f) - C(elem(U(0, 1)) + FieldElem::one(f))) + C(elem(U(0, 2)) * FieldElem::zero(f));
    std::int64_t delta = U(0, 2);
    FieldElem a = b + elem(U(1, 6));
    FieldElem pa = P(a), da = derivative(P)(a);
    if (pa.is_zero() || da.is_zero() || !(pa.val() > 2 * da.val() + ValQ(delta))) continue;
    ++checked;
    LiftCertificate c = newton_lift(P, a, delta);
    EXPECT_TRUE(P(c.root).is_zero());
    EXPECT_GT(c.separation, ValQ(delta));
    EXPECT_EQ((a - c.root).val(), pa.val() - da.val());
  }
  EXPECT_GT(checked, 30);
}
