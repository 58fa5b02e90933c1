#pragma once

#include <random>
#include <vector>

#include "hqe/field.hpp"
#include "hqe/poly.hpp"

namespace hqe::selftest {

/// Small units used to build sample points.
inline std::vector<FieldElem> sample_units(const Field& f) {
  std::vector<FieldElem> u;
  if (f.is_padic()) {
    for (long c : {1L, 2L, 3L, 4L, 5L, 6L, 7L, 9L, 10L, 11L, 13L, 17L, 19L}) {
      if (c % f.p != 0) u.push_back(FieldElem::from_rational(f, c));
    }
    for (long c : {-1L, -2L, -3L, 23L, 29L, 31L}) {
      if (u.size() >= 13) break;
      if (c % f.p != 0) u.push_back(FieldElem::from_rational(f, c));
    }
  } else {
    FieldElem t = FieldElem::uniformizer(f);
    for (mpq_class c : {mpq_class(1), mpq_class(-1), mpq_class(2), mpq_class(-2), mpq_class(1, 2), mpq_class(3),
                        mpq_class(-1, 3), mpq_class(5, 4)}) {
      u.push_back(FieldElem::from_rational(f, c));
    }
    u.push_back(FieldElem::one(f) + t);
    u.push_back(FieldElem::one(f) - t);
    u.push_back(FieldElem::from_rational(f, 2) + t * t);
    u.push_back(FieldElem::from_rational(f, -1) + FieldElem::from_rational(f, 3) * t);
    u.push_back(FieldElem::from_rational(f, mpq_class(1, 2)) - t * t * t);
  }
  u.resize(std::min<std::size_t>(u.size(), 13));
  return u;
}

/// The 13 x 13 grid c * pi^k, k in [-6, 6].
inline std::vector<FieldElem> sample_grid(const Field& f) {
  std::vector<FieldElem> g;
  for (std::int64_t k = -6; k <= 6; ++k) {
    for (const auto& c : sample_units(f)) g.push_back(c * FieldElem::monomial(f, 1, k));
  }
  return g;
}

/// Points alpha + c' pi^j near each center.
inline std::vector<FieldElem> perturbations(const std::vector<FieldElem>& centers) {
  std::vector<FieldElem> g;
  for (const auto& a : centers) {
    const Field& f = a.field();
    g.push_back(a);
    auto units = sample_units(f);
    for (std::int64_t j = -2; j <= 7; ++j) {
      for (std::size_t i = 0; i < 4 && i < units.size(); ++i) g.push_back(a + units[i] * FieldElem::monomial(f, 1, j));
    }
  }
  return g;
}

/// An exact polynomial moved to another precision of the same backend.
inline Poly rebase(const Poly& p, const Field& f) {
  std::vector<FieldElem> c;
  for (const auto& a : p.coeffs()) {
    if (!a.is_exact()) throw PreconditionViolated("rebase: inexact coefficient");
    c.push_back(f.is_padic() ? FieldElem::from_rational(f, a.rational()) : FieldElem::series(f, a.low_exponent(), a.coefficients()));
  }
  return Poly(f, c);
}

/// Deterministic generator for test data.
struct Rng {
  std::mt19937_64 eng;
  explicit Rng(std::uint64_t seed) : eng(seed) {}
  std::int64_t uniform(std::int64_t lo, std::int64_t hi) {
    return std::uniform_int_distribution<std::int64_t>(lo, hi)(eng);
  }
  bool coin() { return uniform(0, 1) == 1; }

  /// A nonzero element c * pi^k with a short unit c.
  FieldElem element(const Field& f, std::int64_t klo, std::int64_t khi) {
    std::int64_t k = uniform(klo, khi);
    if (f.is_padic()) {
      mpq_class c(uniform(1, 60), uniform(1, 4));
      c.canonicalize();
      while (c.get_num() % f.p == 0) c /= f.p;
      while (c.get_den() % f.p == 0) c *= f.p;
      if (coin()) c = -c;
      return FieldElem::from_rational(f, c) * FieldElem::monomial(f, 1, k);
    }
    std::vector<mpq_class> cs;
    std::int64_t n = uniform(1, 3);
    for (std::int64_t i = 0; i < n; ++i) {
      mpq_class c(uniform(-3, 3), uniform(1, 2));
      c.canonicalize();
      cs.push_back(c);
    }
    if (cs[0] == 0) cs[0] = 1;
    return FieldElem::series(f, k, cs);
  }

  /// A random polynomial of degree d with nonzero leading coefficient.
  Poly poly(const Field& f, std::int64_t d) {
    std::vector<FieldElem> c;
    for (std::int64_t i = 0; i <= d; ++i) {
      c.push_back(coin() || i == d ? element(f, -2, 3) : FieldElem::zero(f));
    }
    return Poly(f, c);
  }

  /// A polynomial built from roots (so collisions occur), times a unit.
  Poly poly_with_roots(const Field& f, std::int64_t d) {
    Poly x = Poly::monomial(f, 1);
    Poly p = Poly::constant(element(f, -1, 1));
    std::vector<FieldElem> roots;
    for (std::int64_t i = 0; i < d; ++i) {
      FieldElem r = (!roots.empty() && coin()) ? roots[static_cast<std::size_t>(uniform(0, static_cast<std::int64_t>(roots.size()) - 1))] +
                                                   element(f, 1, 3)
                                             : element(f, -1, 2);
      if (uniform(0, 5) == 0) r = FieldElem::zero(f);
      roots.push_back(r);
      p = p * (x - Poly::constant(r));
    }
    return p;
  }
};

}  // namespace hqe::selftest
