#pragma once

#include <optional>
#include <string>
#include <vector>

#include "hqe/errors.hpp"
#include "hqe/field.hpp"
#include "hqe/poly.hpp"
#include "hqe/rv.hpp"

namespace hqe {

struct LiftCertificate {
  FieldElem root;
  int iterations = 0;
  ValQ separation = ValQ::inf();  // lower bound on v(a - root)
};

/// Newton iteration x <- x - P(x)/P'(x) from a, for P over O with
/// v(P(a)) > 2 v(P'(a)) + delta. Each step evaluates at the exact digits of
/// the previous iterate and truncates to the field precision.
inline LiftCertificate newton_lift(const Poly& P, const FieldElem& a, std::int64_t delta) {
  const Field& f = P.field();
  const std::int64_t N = f.precision;
  for (const auto& c : P.coeffs()) {
    if (!c.is_zero() && c.val() < ValQ(0)) throw PreconditionViolated("newton_lift: coefficient outside O");
  }
  if (!a.is_zero() && a.val() < ValQ(0)) throw PreconditionViolated("newton_lift: start point outside O");
  Poly dP = derivative(P);
  FieldElem pa = P(a);
  if (pa.is_zero()) return {a, 0, ValQ::inf()};
  FieldElem da = dP(a);
  if (da.is_zero()) throw PreconditionViolated("newton_lift: P'(a) = 0");
  ValQ vpa = pa.val(), vda = da.val();
  if (!(vpa > 2 * vda + ValQ(delta))) {
    throw PreconditionViolated("newton_lift: v(P(a)) = " + vpa.str() + " is not above 2v(P'(a)) + delta = " +
                               (2 * vda + ValQ(delta)).str());
  }

  FieldElem x = a.approximant();
  ValQ prev = ValQ::neg_inf();
  int it = 0;
  bool exact_root = false;
  ValQ acc = ValQ(N);  // digits of the final iterate that are certified
  // Working precision roughly doubles with v(P(x)); only the last rounds run
  // at the full precision N.
  ValQ slack = ValQ(8) + 2 * vda;
  ValQ work = min(ValQ(N), 2 * vpa + slack);
  while (true) {
    const bool full = work >= ValQ(N);
    // the last rounds carry v(P'(a)) extra digits so the root is good to N
    FieldElem xw = x.truncated(full ? N + vda.ceil() + 1 : work.ceil());
    FieldElem px = P(xw);
    if (px.is_zero()) {
      if (!full) {
        work = ValQ(N);
        continue;
      }
      // an exact root is recognized by one exact evaluation, skipped for long
      // laurent expansions where that evaluation is costly
      bool cheap = f.is_padic() || static_cast<std::int64_t>(x.coefficients().size()) * P.degree() <= 2 * N;
      exact_root = cheap && x.is_exact() && P(x).is_exact_zero();
      if (!exact_root) acc = min(acc, px.abs_precision() - dP(xw).val());
      break;
    }
    ValQ vp = px.val();
    if (!(vp > prev)) throw PrecisionExhausted("newton_lift: v(P(x)) stopped increasing");
    prev = vp;
    FieldElem corr = px / dP(xw);
    if (corr.val_lower_bound() >= ValQ(N)) {
      if (!full) {
        work = ValQ(N);
        prev = ValQ::neg_inf();
        continue;
      }
      acc = min(acc, corr.abs_precision());
      break;
    }
    if (++it > 8 * N + 64) throw PrecisionExhausted("newton_lift: iteration budget reached");
    x = (x - corr).truncated(N).approximant();
    work = min(ValQ(N), 2 * vp + slack);
  }
  if (!exact_root && acc <= ValQ(delta)) throw PrecisionExhausted("newton_lift: root known to too few digits");
  FieldElem root = exact_root ? x : x.truncated(acc.is_finite() ? acc.floor() : N);
  if (!P(root).is_zero()) throw PrecisionExhausted("newton_lift: root not certified at this precision");
  FieldElem gap = a - root;
  ValQ sep = gap.is_exact_zero() ? ValQ::inf() : gap.val_lower_bound();
  return {root, it, sep};
}

namespace detail {

/// a/b with a = n*b mod M and |a|, |b| <= sqrt(M/2), if one exists.
inline std::optional<mpq_class> rational_reconstruction(const mpz_class& n, const mpz_class& M) {
  mpz_class bound;
  mpz_class half = M / 2;
  mpz_sqrt(bound.get_mpz_t(), half.get_mpz_t());
  mpz_class r0 = M, r1 = n % M, s0 = 0, s1 = 1;
  if (r1 < 0) r1 += M;
  while (r1 > bound) {
    mpz_class q = r0 / r1;
    mpz_class r2 = r0 - q * r1, s2 = s0 - q * s1;
    r0 = r1;
    r1 = r2;
    s0 = s1;
    s1 = s2;
  }
  if (s1 == 0 || abs(s1) > bound) return std::nullopt;
  mpq_class out(r1, s1);
  out.canonicalize();
  return out;
}

}  // namespace detail

/// An exact element equal to the approximate root r of g when one is found
/// (truncation in laurent-q, rational reconstruction in padic); r otherwise.
inline FieldElem snap_root(const Poly& g, const FieldElem& r) {
  if (r.is_exact() || !g.is_exact() || r.is_zero()) return r;
  const Field& f = r.field();
  std::vector<FieldElem> cands{r.truncated(f.precision).approximant(), r.approximant()};
  if (f.is_padic()) {
    std::int64_t v = r.val().as_int();
    std::int64_t k = (r.abs_precision().as_int()) - v;
    mpz_class M = detail::ipow(mpz_class(static_cast<long>(f.p)), k);
    if (auto q = detail::rational_reconstruction(r.unit_residue(k), M)) {
      cands.insert(cands.begin(), FieldElem::from_rational(f, *q * detail::pow_p(f.p, v)));
    }
  }
  for (const auto& c : cands) {
    if (g(c).is_exact_zero() && (c - r).is_zero()) return c;
  }
  return r;
}

/// Term valuations of f recentered at alpha, evaluated at x = alpha + h.
struct CollisionData {
  std::vector<FieldElem> a;  // coefficients around alpha
  ValQ mu = ValQ::inf();     // min_i v(a_i h^i)
  std::int64_t m = 0;        // largest index attaining mu
  ValQ severity = 0;         // v(f(alpha+h)) - mu, or a lower bound
  bool severity_exact = true;
};

inline CollisionData collision_data(const std::vector<FieldElem>& a, const FieldElem& h) {
  CollisionData c;
  c.a = a;
  ValQ vh = h.val();
  for (std::size_t i = 0; i < a.size(); ++i) {
    ValQ t = val_or_inf(a[i]) + static_cast<std::int64_t>(i) * vh;
    if (t <= c.mu && !t.is_pos_inf()) {
      c.mu = t;
      c.m = static_cast<std::int64_t>(i);
    }
  }
  if (c.mu.is_pos_inf()) {
    c.severity = 0;
    return c;
  }
  FieldElem s = FieldElem::zero(h.field());
  for (std::size_t i = a.size(); i-- > 0;) s = s * h + a[i];
  if (s.is_exact_zero()) {
    c.severity = ValQ::inf();
  } else if (s.is_zero()) {
    c.severity = s.abs_precision() - c.mu;
    c.severity_exact = false;
  } else {
    c.severity = s.val() - c.mu;
  }
  return c;
}

/// 2^m (v(m!) + delta).
inline ValQ collision_threshold(const Field& f, std::int64_t m, std::int64_t delta) {
  return (std::int64_t{1} << m) * (val_factorial(f, m) + ValQ(delta));
}

struct CollisionRoot {
  std::int64_t n = 0;
  FieldElem lambda;
  LiftCertificate certificate;
};

/// A root lambda of f^(n), n < m, with rv_delta(lambda - alpha) =
/// rv_delta(beta - alpha), from a collision at beta around alpha of
/// severity above 2^m (v(m!) + delta).
inline CollisionRoot collision_root(const Poly& f, const FieldElem& alpha, const FieldElem& beta, std::int64_t delta) {
  const Field& fld = f.field();
  FieldElem h = beta - alpha;
  if (h.is_exact_zero()) throw PreconditionViolated("collision_root: beta = alpha");
  CollisionData cd = collision_data(taylor_shift(f, alpha), h);
  if (cd.mu.is_pos_inf()) throw PreconditionViolated("collision_root: f = 0");
  ValQ theta = collision_threshold(fld, cd.m, delta);
  if (!(cd.severity > theta)) {
    if (!cd.severity_exact) throw PrecisionExhausted("collision_root: severity not determined at this precision");
    throw PreconditionViolated("collision_root: severity " + cd.severity.str() + " does not exceed " + theta.str());
  }
  FieldElem sigma = cd.a[static_cast<std::size_t>(cd.m)] * h.pow(cd.m);
  FieldElem sinv = sigma.inverse();
  std::vector<FieldElem> pc;
  FieldElem hi = FieldElem::one(fld);
  for (const auto& ai : cd.a) {
    pc.push_back(ai * hi * sinv);
    hi *= h;
  }
  Poly P(fld, pc);
  FieldElem one = FieldElem::one(fld);
  for (std::int64_t n = cd.m - 1; n >= 0; --n) {
    FieldElem pn = derivative(P, n)(one);
    FieldElem pn1 = derivative(P, n + 1)(one);
    if (pn1.is_zero()) continue;
    ValQ bound = 2 * (pn1.val() + ValQ(delta));
    if (!pn.val_greater(bound)) continue;
    LiftCertificate cert = newton_lift(derivative(P, n), one, delta);
    FieldElem lambda = snap_root(derivative(f, n), h * cert.root + alpha);
    if (!derivative(f, n)(lambda).is_zero()) throw PrecisionExhausted("collision_root: derivative root not certified");
    if (!(rv(lambda - alpha, delta) == rv(h, delta))) throw PrecisionExhausted("collision_root: class check failed");
    return {n, lambda, cert};
  }
  throw PrecisionExhausted("collision_root: no derivative index satisfies the gap inequality");
}

}  // namespace hqe
