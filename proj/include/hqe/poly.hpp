#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hqe/errors.hpp"
#include "hqe/field.hpp"

namespace hqe {

/// Univariate polynomial over K. Coefficient i multiplies x^i.
///
/// Trailing coefficients that vanish to their known precision are dropped, so
/// the leading coefficient is always nonzero (the zero polynomial has
/// degree -1).
class Poly {
 public:
  Poly() = default;
  explicit Poly(const Field& f) : field_(f) {}
  Poly(const Field& f, std::vector<FieldElem> coeffs) : field_(f), c_(std::move(coeffs)) { trim(); }

  static Poly constant(const FieldElem& c) { return Poly(c.field(), {c}); }
  /// x^k
  static Poly monomial(const Field& f, std::int64_t k) {
    std::vector<FieldElem> c(static_cast<std::size_t>(k) + 1, FieldElem::zero(f));
    c.back() = FieldElem::one(f);
    return Poly(f, std::move(c));
  }
  /// sum q_i x^i for rational q_i.
  static Poly from_rationals(const Field& f, const std::vector<mpq_class>& qs) {
    std::vector<FieldElem> c;
    for (const auto& q : qs) c.push_back(FieldElem::from_rational(f, q));
    return Poly(f, std::move(c));
  }

  const Field& field() const { return field_; }
  std::int64_t degree() const { return static_cast<std::int64_t>(c_.size()) - 1; }
  bool is_zero() const { return c_.empty(); }
  bool is_exact() const {
    for (const auto& c : c_)
      if (!c.is_exact()) return false;
    return true;
  }
  const std::vector<FieldElem>& coeffs() const { return c_; }
  FieldElem coeff(std::int64_t i) const {
    if (i < 0 || i > degree()) return FieldElem::zero(field_);
    return c_[static_cast<std::size_t>(i)];
  }
  const FieldElem& leading() const { return c_.back(); }

  FieldElem operator()(const FieldElem& x) const {
    FieldElem r = FieldElem::zero(field_);
    for (std::size_t i = c_.size(); i-- > 0;) r = r * x + c_[i];
    return r;
  }

  friend Poly operator+(const Poly& a, const Poly& b) {
    std::vector<FieldElem> c(std::max(a.c_.size(), b.c_.size()), FieldElem::zero(a.field_));
    for (std::size_t i = 0; i < a.c_.size(); ++i) c[i] = a.c_[i];
    for (std::size_t i = 0; i < b.c_.size(); ++i) c[i] = c[i] + b.c_[i];
    return Poly(a.field_, std::move(c));
  }
  Poly operator-() const {
    std::vector<FieldElem> c;
    for (const auto& x : c_) c.push_back(-x);
    return Poly(field_, std::move(c));
  }
  friend Poly operator-(const Poly& a, const Poly& b) { return a + (-b); }
  friend Poly operator*(const Poly& a, const Poly& b) {
    if (a.is_zero() || b.is_zero()) return Poly(a.field_);
    std::vector<FieldElem> c(a.c_.size() + b.c_.size() - 1, FieldElem::zero(a.field_));
    for (std::size_t i = 0; i < a.c_.size(); ++i)
      for (std::size_t j = 0; j < b.c_.size(); ++j) c[i + j] += a.c_[i] * b.c_[j];
    return Poly(a.field_, std::move(c));
  }
  friend Poly operator*(const FieldElem& s, const Poly& a) {
    std::vector<FieldElem> c;
    for (const auto& x : a.c_) c.push_back(s * x);
    return Poly(a.field_, std::move(c));
  }
  Poly pow(std::int64_t n) const {
    Poly r = constant(FieldElem::one(field_));
    for (std::int64_t i = 0; i < n; ++i) r = r * *this;
    return r;
  }

  /// Exact structural equality of coefficient lists.
  friend bool operator==(const Poly& a, const Poly& b) = default;

 private:
  void trim() {
    while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
  }

  Field field_{};
  std::vector<FieldElem> c_;
};

/// n-th derivative; n = 0 returns f and n > deg f returns 0.
inline Poly derivative(const Poly& f, std::int64_t n = 1) {
  if (n == 0) return f;
  std::vector<FieldElem> c;
  for (std::int64_t i = n; i <= f.degree(); ++i) {
    mpz_class fall = 1;  // i! / (i-n)!
    for (std::int64_t k = i - n + 1; k <= i; ++k) fall *= k;
    c.push_back(FieldElem::from_rational(f.field(), mpq_class(fall)) * f.coeff(i));
  }
  return Poly(f.field(), std::move(c));
}

/// Coefficients a_i of f recentered at alpha: f(x) = sum a_i (x - alpha)^i.
/// The list always has deg(f) + 1 entries (zeros included).
inline std::vector<FieldElem> taylor_shift(const Poly& f, const FieldElem& alpha) {
  std::vector<FieldElem> a = f.coeffs();
  std::size_t n = a.size();
  // repeated synthetic division by (x - alpha)
  for (std::size_t k = 0; k + 1 < n; ++k)
    for (std::size_t i = n - 1; i > k; --i) a[i - 1] = a[i - 1] + alpha * a[i];
  return a;
}

/// Polynomial sum a_i y^i from a coefficient list, i.e. recomposition in the
/// shifted variable y = x - alpha.
inline Poly from_shifted(const Field& f, const std::vector<FieldElem>& a, const FieldElem& alpha) {
  Poly y = Poly(f, {-alpha, FieldElem::one(f)});
  Poly r(f);
  for (std::size_t i = a.size(); i-- > 0;) r = r * y + Poly::constant(a[i]);
  return r;
}

/// f(h x + alpha) as a polynomial in x.
inline Poly compose_linear(const Poly& f, const FieldElem& h, const FieldElem& alpha) {
  auto a = taylor_shift(f, alpha);
  FieldElem hp = FieldElem::one(f.field());
  for (auto& c : a) {
    c = c * hp;
    hp = hp * h;
  }
  return Poly(f.field(), std::move(a));
}

/// Division with remainder over K: g = q f + r with deg r < deg f.
inline std::pair<Poly, Poly> poly_divmod(const Poly& g, const Poly& f) {
  if (f.is_zero()) throw DivisionByZero();
  const Field& fld = g.field();
  std::vector<FieldElem> r = g.coeffs();
  std::int64_t df = f.degree();
  if (g.degree() < df) return {Poly(fld), g};
  std::vector<FieldElem> q(static_cast<std::size_t>(g.degree() - df + 1), FieldElem::zero(fld));
  FieldElem lc_inv = f.leading().inverse();
  for (std::int64_t k = g.degree() - df; k >= 0; --k) {
    FieldElem c = r[static_cast<std::size_t>(k + df)] * lc_inv;
    q[static_cast<std::size_t>(k)] = c;
    for (std::int64_t j = 0; j <= df; ++j)
      r[static_cast<std::size_t>(k + j)] -= c * f.coeff(j);
    // the cancelled term is exactly zero by construction
    r[static_cast<std::size_t>(k + df)] = FieldElem::zero(fld);
  }
  r.resize(static_cast<std::size_t>(df));
  return {Poly(fld, std::move(q)), Poly(fld, std::move(r))};
}

struct PseudoDivision {
  Poly quotient;
  Poly remainder;
  std::int64_t power = 0;  ///< lc(f)^power * g = quotient * f + remainder
};

/// Pseudo-division: multiplies g through by powers of the leading coefficient
/// of f so that no coefficient division is needed. Exact on exact input.
inline PseudoDivision poly_pseudo_divmod(const Poly& g, const Poly& f) {
  if (f.is_zero()) throw DivisionByZero();
  const Field& fld = g.field();
  std::int64_t df = f.degree();
  if (g.degree() < df) return {Poly(fld), g, 0};
  std::int64_t e = g.degree() - df + 1;
  const FieldElem& lc = f.leading();
  std::vector<FieldElem> r = g.coeffs();
  std::vector<FieldElem> q(static_cast<std::size_t>(e), FieldElem::zero(fld));
  for (std::int64_t k = g.degree() - df; k >= 0; --k) {
    FieldElem c = r[static_cast<std::size_t>(k + df)];
    for (auto& x : q) x = x * lc;
    q[static_cast<std::size_t>(k)] = c;
    for (auto& x : r) x = x * lc;
    for (std::int64_t j = 0; j <= df; ++j) r[static_cast<std::size_t>(k + j)] -= c * f.coeff(j);
    r[static_cast<std::size_t>(k + df)] = FieldElem::zero(fld);
  }
  r.resize(static_cast<std::size_t>(df));
  return {Poly(fld, std::move(q)), Poly(fld, std::move(r)), e};
}

/// Divides every coefficient of p by s exactly; nullopt if not exact.
inline std::optional<Poly> exact_scalar_quotient(const Poly& p, const FieldElem& s) {
  std::vector<FieldElem> c;
  for (const auto& x : p.coeffs()) {
    auto q = FieldElem::exact_quotient(x, s);
    if (!q) return std::nullopt;
    c.push_back(*q);
  }
  return Poly(p.field(), std::move(c));
}

inline Poly make_monic(const Poly& p) {
  if (p.is_zero()) return p;
  if (p.is_exact()) {
    if (auto q = exact_scalar_quotient(p, p.leading())) return *q;
  }
  return p.leading().inverse() * p;
}

/// A greatest common divisor, not normalized. For exact input it is computed
/// with the subresultant remainder sequence, so every coefficient stays exact
/// in Q[t, 1/t] (laurent-q) or Q (padic). Inexact input falls back to the
/// Euclidean algorithm over K, where remainder coefficients that vanish to
/// working precision are taken as zero.
inline Poly poly_gcd_unnormalized(Poly a, Poly b) {
  if (a.degree() < b.degree()) std::swap(a, b);
  if (b.is_zero()) return a;
  if (!(a.is_exact() && b.is_exact())) {
    while (!b.is_zero()) {
      Poly r = poly_divmod(a, b).second;
      a = std::move(b);
      b = std::move(r);
    }
    return a;
  }
  const Field& fld = a.field();
  FieldElem g = FieldElem::one(fld), h = FieldElem::one(fld);
  while (true) {
    std::int64_t d = a.degree() - b.degree();
    Poly r = poly_pseudo_divmod(a, b).remainder;
    if (r.is_zero()) return b;
    if (r.degree() == 0) return Poly::constant(FieldElem::one(fld));
    FieldElem div = g * h.pow(d);
    auto reduced = exact_scalar_quotient(r, div);
    if (!reduced) throw std::logic_error("subresultant division not exact");
    a = std::move(b);
    b = std::move(*reduced);
    g = a.leading();
    if (d == 0) continue;
    auto hn = FieldElem::exact_quotient(g.pow(d), h.pow(d - 1));
    if (!hn) throw std::logic_error("subresultant h update not exact");
    h = *hn;
  }
}

/// Monic gcd.
inline Poly poly_gcd(const Poly& f, const Poly& g) { return make_monic(poly_gcd_unnormalized(f, g)); }

/// Exact quotient f / g when g divides f (up to a scalar from pseudo-division).
/// The result is a scalar multiple of f/g with exact coefficients for exact
/// input.
inline Poly exact_cofactor(const Poly& f, const Poly& g) {
  auto pd = poly_pseudo_divmod(f, g);
  return pd.quotient;
}

/// A squarefree polynomial with the same roots as f (char 0).
inline Poly squarefree_part(const Poly& f) {
  if (f.degree() <= 1) return f;
  Poly g = poly_gcd_unnormalized(f, derivative(f));
  if (g.degree() <= 0) return f;
  return make_monic(exact_cofactor(f, g));
}

}  // namespace hqe
