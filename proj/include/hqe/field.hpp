#pragma once

#include <gmpxx.h>

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hqe/errors.hpp"
#include "hqe/valq.hpp"

namespace hqe {

enum class Backend : std::uint8_t { kLaurentQ, kPadic };

/// Field configuration: which backend, the prime for p-adics, and the
/// relative precision used when an exact input produces an infinite expansion.
struct Field {
  Backend backend = Backend::kLaurentQ;
  std::int64_t p = 0;
  std::int64_t precision = 64;

  static Field laurent(std::int64_t prec = 64) { return {Backend::kLaurentQ, 0, prec}; }
  static Field padic(std::int64_t prime, std::int64_t prec = 64) {
    return {Backend::kPadic, prime, prec};
  }
  bool is_padic() const { return backend == Backend::kPadic; }
  std::string name() const {
    return is_padic() ? "padic-" + std::to_string(p) : std::string("laurent-q");
  }
  friend bool operator==(const Field&, const Field&) = default;
};

namespace detail {

inline mpz_class ipow(const mpz_class& b, std::int64_t e) {
  mpz_class r;
  mpz_pow_ui(r.get_mpz_t(), b.get_mpz_t(), static_cast<unsigned long>(e));
  return r;
}

/// Strips factors of p from z in place and returns how many were removed.
inline std::int64_t remove_p(mpz_class& z, std::int64_t p) {
  if (z == 0) return 0;
  mpz_class pp(static_cast<long>(p));
  return static_cast<std::int64_t>(mpz_remove(z.get_mpz_t(), z.get_mpz_t(), pp.get_mpz_t()));
}

/// Integer numerators over the lcm of the denominators.
inline std::vector<mpz_class> clear_denominators(const std::vector<mpq_class>& q, mpz_class& den) {
  den = 1;
  for (const auto& x : q) mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), x.get_den_mpz_t());
  std::vector<mpz_class> out(q.size());
  for (std::size_t i = 0; i < q.size(); ++i) {
    mpz_divexact(out[i].get_mpz_t(), den.get_mpz_t(), q[i].get_den_mpz_t());
    out[i] *= q[i].get_num();
  }
  return out;
}

inline std::int64_t padic_val(const mpq_class& q, std::int64_t p) {
  mpz_class n = q.get_num(), d = q.get_den();
  return remove_p(n, p) - remove_p(d, p);
}

inline mpq_class pow_p(std::int64_t p, std::int64_t e) {
  mpz_class pe = ipow(mpz_class(static_cast<long>(p)), e < 0 ? -e : e);
  return e < 0 ? mpq_class(mpz_class(1), pe) : mpq_class(pe);
}

}  // namespace detail

/// An element of K known to finite precision.
///
/// laurent-q: a truncated Laurent series over Q, stored as the coefficient
/// list starting at exponent `lo_`, known modulo t^absprec.
/// padic-p: a rational approximant known modulo p^absprec; inexact values are
/// kept in the canonical form p^v * u with 0 < u < p^(absprec - v).
///
/// An exact element has no O(.) term. Exact inputs stay exact under ring
/// operations; inversion of an exact non-monomial falls back to the field's
/// configured relative precision.
class FieldElem {
 public:
  FieldElem() = default;
  explicit FieldElem(const Field& f) : field_(f) {}

  static FieldElem zero(const Field& f) { return FieldElem(f); }
  static FieldElem one(const Field& f) { return from_rational(f, 1); }

  static FieldElem from_rational(const Field& f, const mpq_class& q,
                                 std::optional<std::int64_t> absprec = std::nullopt) {
    FieldElem x(f);
    if (f.is_padic()) {
      x.q_ = q;
      x.q_.canonicalize();
      if (absprec) x.make_inexact(*absprec);
    } else {
      if (q != 0) {
        x.coeffs_.push_back(q);
        x.coeffs_.back().canonicalize();
      }
      if (absprec) x.make_inexact(*absprec);
    }
    return x;
  }

  /// c * t^k in laurent-q, c * p^k in padic.
  static FieldElem monomial(const Field& f, const mpq_class& c, std::int64_t k) {
    if (f.is_padic()) return from_rational(f, c * detail::pow_p(f.p, k));
    FieldElem x(f);
    if (c != 0) {
      x.lo_ = k;
      x.coeffs_.push_back(c);
      x.coeffs_.back().canonicalize();
    }
    return x;
  }

  static FieldElem uniformizer(const Field& f) { return monomial(f, 1, 1); }

  /// Laurent series sum_i coeffs[i] t^(lo+i), optionally truncated at t^absprec.
  static FieldElem series(const Field& f, std::int64_t lo, std::vector<mpq_class> coeffs,
                          std::optional<std::int64_t> absprec = std::nullopt) {
    if (f.is_padic()) {
      mpq_class q = 0;
      for (std::size_t i = 0; i < coeffs.size(); ++i)
        q += coeffs[i] * detail::pow_p(f.p, lo + static_cast<std::int64_t>(i));
      return from_rational(f, q, absprec);
    }
    FieldElem x(f);
    x.lo_ = lo;
    x.coeffs_ = std::move(coeffs);
    for (auto& c : x.coeffs_) c.canonicalize();
    if (absprec) {
      x.exact_ = false;
      x.absprec_ = *absprec;
    }
    x.normalize();
    return x;
  }

  const Field& field() const { return field_; }
  bool is_exact() const { return exact_; }
  /// Absolute precision: the element is known modulo the ideal of values >= this.
  ValQ abs_precision() const { return exact_ ? ValQ::inf() : ValQ(absprec_); }

  /// True when no nonzero digit is known (exact zero or O(.) only).
  bool is_zero() const { return field_.is_padic() ? q_ == 0 : coeffs_.empty(); }
  bool is_exact_zero() const { return exact_ && is_zero(); }

  /// v(x). Exact zero gives +inf; a zero known only to finite precision throws.
  ValQ val() const {
    if (is_zero()) {
      if (exact_) return ValQ::inf();
      throw PrecisionExhausted("valuation of O(" + std::to_string(absprec_) + ")");
    }
    if (field_.is_padic()) return detail::padic_val(q_, field_.p);
    return lo_;
  }

  /// A lower bound on v(x): v(x) itself, or the absolute precision of a zero.
  ValQ val_lower_bound() const {
    if (is_zero()) return abs_precision();
    return val();
  }

  /// Relative precision: number of known digits after the leading one.
  ValQ rel_precision() const {
    if (exact_) return ValQ::inf();
    if (is_zero()) return 0;
    return ValQ(absprec_) - val();
  }

  /// Decides v(x) >= r; throws if the known digits do not settle it.
  bool val_at_least(const ValQ& r) const {
    if (!is_zero()) return val() >= r;
    if (exact_) return true;
    if (ValQ(absprec_) >= r) return true;
    throw PrecisionExhausted("cannot decide v(x) >= " + r.str());
  }
  /// Decides v(x) > r.
  bool val_greater(const ValQ& r) const {
    if (!is_zero()) return val() > r;
    if (exact_) return true;
    if (ValQ(absprec_) > r) return true;
    throw PrecisionExhausted("cannot decide v(x) > " + r.str());
  }

  /// Coefficient of t^k (laurent-q only); requires k below the precision.
  mpq_class coefficient(std::int64_t k) const {
    if (!exact_ && k >= absprec_) throw PrecisionExhausted("coefficient beyond precision");
    if (field_.is_padic()) throw std::logic_error("coefficient() on p-adic element");
    if (coeffs_.empty() || k < lo_) return 0;
    std::size_t i = static_cast<std::size_t>(k - lo_);
    return i < coeffs_.size() ? coeffs_[i] : mpq_class(0);
  }

  /// The first n digits of the unit part x / pi^v(x): rational coefficients in
  /// laurent-q, base-p digits in padic. Requires relative precision >= n.
  std::vector<mpq_class> unit_digits(std::int64_t n) const {
    if (is_zero()) throw PrecisionExhausted("unit digits of zero");
    if (!exact_ && rel_precision() < ValQ(n)) throw PrecisionExhausted("unit digits beyond precision");
    std::vector<mpq_class> out;
    out.reserve(static_cast<std::size_t>(n));
    if (field_.is_padic()) {
      mpz_class u = unit_residue(n);
      mpz_class p(static_cast<long>(field_.p));
      for (std::int64_t i = 0; i < n; ++i) {
        mpz_class d = u % p;
        out.emplace_back(d);
        u /= p;
      }
    } else {
      for (std::int64_t i = 0; i < n; ++i) {
        std::size_t k = static_cast<std::size_t>(i);
        out.push_back(k < coeffs_.size() ? coeffs_[k] : mpq_class(0));
      }
    }
    return out;
  }

  /// padic: the unit part of x reduced modulo p^n, as an integer in [0, p^n).
  mpz_class unit_residue(std::int64_t n) const {
    if (!field_.is_padic()) throw std::logic_error("unit_residue on laurent element");
    if (is_zero()) throw PrecisionExhausted("unit residue of zero");
    mpz_class num = q_.get_num(), den = q_.get_den();
    detail::remove_p(num, field_.p);
    detail::remove_p(den, field_.p);
    mpz_class mod = detail::ipow(mpz_class(static_cast<long>(field_.p)), n);
    mpz_class inv;
    mpz_invert(inv.get_mpz_t(), den.get_mpz_t(), mod.get_mpz_t());
    mpz_class r = (num * inv) % mod;
    if (r < 0) r += mod;
    return r;
  }

  /// Leading coefficient (laurent) or unit residue mod p (padic).
  mpq_class leading_digit() const { return unit_digits(1)[0]; }

  /// The exact rational approximant (padic) or the truncated Laurent
  /// polynomial data (laurent).
  const mpq_class& rational() const { return q_; }
  std::int64_t low_exponent() const { return lo_; }
  const std::vector<mpq_class>& coefficients() const { return coeffs_; }

  /// Reduces precision to absolute precision n (no-op if already lower).
  FieldElem truncated(std::int64_t n) const {
    FieldElem x = *this;
    if (x.exact_ || n < x.absprec_) x.make_inexact(n);
    return x;
  }

  /// Keeps at most r digits of relative precision (zero stays as is).
  FieldElem with_rel_precision(std::int64_t r) const {
    if (is_zero()) return *this;
    return truncated(val().as_int() + r);
  }

  /// The known digits as an exact element (drops the O(.) term).
  FieldElem approximant() const {
    FieldElem x = *this;
    x.exact_ = true;
    x.absprec_ = 0;
    return x;
  }

  /// Equal as approximations: same digits up to the smaller precision.
  bool agrees_with(const FieldElem& o) const { return (*this - o).is_zero(); }

  friend bool operator==(const FieldElem& a, const FieldElem& b) {
    return a.field_ == b.field_ && a.exact_ == b.exact_ &&
           (a.exact_ || a.absprec_ == b.absprec_) && a.lo_ == b.lo_ && a.coeffs_ == b.coeffs_ &&
           a.q_ == b.q_;
  }

  FieldElem operator-() const {
    FieldElem x = *this;
    for (auto& c : x.coeffs_) c = -c;
    x.q_ = -x.q_;
    if (!x.exact_) x.make_inexact(x.absprec_);
    return x;
  }

  friend FieldElem operator+(const FieldElem& a, const FieldElem& b) {
    check_same(a, b);
    FieldElem r(a.field_);
    r.exact_ = a.exact_ && b.exact_;
    if (!r.exact_) r.absprec_ = std::min(a.exact_ ? INT64_MAX : a.absprec_, b.exact_ ? INT64_MAX : b.absprec_);
    if (a.field_.is_padic()) {
      r.q_ = a.q_ + b.q_;
    } else if (a.coeffs_.empty()) {
      r.lo_ = b.lo_;
      r.coeffs_ = b.coeffs_;
    } else if (b.coeffs_.empty()) {
      r.lo_ = a.lo_;
      r.coeffs_ = a.coeffs_;
    } else {
      std::int64_t lo = std::min(a.lo_, b.lo_);
      std::int64_t hi = std::max(a.lo_ + static_cast<std::int64_t>(a.coeffs_.size()),
                                 b.lo_ + static_cast<std::int64_t>(b.coeffs_.size()));
      if (!r.exact_) hi = std::min(hi, r.absprec_);
      r.lo_ = lo;
      if (hi > lo) {
        r.coeffs_.assign(static_cast<std::size_t>(hi - lo), mpq_class(0));
        for (std::size_t i = 0; i < a.coeffs_.size(); ++i) {
          std::int64_t k = a.lo_ + static_cast<std::int64_t>(i) - lo;
          if (k < hi - lo) r.coeffs_[static_cast<std::size_t>(k)] += a.coeffs_[i];
        }
        for (std::size_t i = 0; i < b.coeffs_.size(); ++i) {
          std::int64_t k = b.lo_ + static_cast<std::int64_t>(i) - lo;
          if (k < hi - lo) r.coeffs_[static_cast<std::size_t>(k)] += b.coeffs_[i];
        }
      }
    }
    r.normalize();
    return r;
  }
  friend FieldElem operator-(const FieldElem& a, const FieldElem& b) { return a + (-b); }

  friend FieldElem operator*(const FieldElem& a, const FieldElem& b) {
    check_same(a, b);
    FieldElem r(a.field_);
    if (a.is_exact_zero() || b.is_exact_zero()) return r;
    r.exact_ = a.exact_ && b.exact_;
    if (!r.exact_) {
      // absprec = min(v(a) + prec(b), v(b) + prec(a)) using lower bounds on values
      auto bound = [](const FieldElem& x, const FieldElem& y) -> std::int64_t {
        if (y.exact_) return INT64_MAX;
        return x.val_lower_bound().as_int() + y.absprec_;
      };
      r.absprec_ = std::min(bound(a, b), bound(b, a));
    }
    if (a.field_.is_padic()) {
      r.q_ = a.q_ * b.q_;
    } else if (!a.coeffs_.empty() && !b.coeffs_.empty()) {
      r.lo_ = a.lo_ + b.lo_;
      std::int64_t n = static_cast<std::int64_t>(a.coeffs_.size() + b.coeffs_.size()) - 1;
      if (!r.exact_) n = std::min(n, r.absprec_ - r.lo_);
      if (n > 0) {
        r.coeffs_.assign(static_cast<std::size_t>(n), mpq_class(0));
        if (a.coeffs_.size() <= 2 || b.coeffs_.size() <= 2) {
          mpq_class t;
          for (std::size_t i = 0; i < a.coeffs_.size() && static_cast<std::int64_t>(i) < n; ++i) {
            if (a.coeffs_[i] == 0) continue;
            std::size_t jmax = std::min(b.coeffs_.size(), static_cast<std::size_t>(n) - i);
            for (std::size_t j = 0; j < jmax; ++j) {
              mpq_mul(t.get_mpq_t(), a.coeffs_[i].get_mpq_t(), b.coeffs_[j].get_mpq_t());
              r.coeffs_[i + j] += t;
            }
          }
        } else {
          // integer convolution over common denominators, one gcd per output digit
          mpz_class da, db;
          std::vector<mpz_class> ai = detail::clear_denominators(a.coeffs_, da);
          std::vector<mpz_class> bi = detail::clear_denominators(b.coeffs_, db);
          std::vector<mpz_class> c(static_cast<std::size_t>(n), mpz_class(0));
          for (std::size_t i = 0; i < ai.size() && static_cast<std::int64_t>(i) < n; ++i) {
            if (ai[i] == 0) continue;
            std::size_t jmax = std::min(bi.size(), static_cast<std::size_t>(n) - i);
            for (std::size_t j = 0; j < jmax; ++j) mpz_addmul(c[i + j].get_mpz_t(), ai[i].get_mpz_t(), bi[j].get_mpz_t());
          }
          mpz_class den = da * db;
          for (std::size_t k = 0; k < c.size(); ++k) {
            if (c[k] == 0) continue;
            mpq_class& q = r.coeffs_[k];
            q.get_num() = c[k];
            q.get_den() = den;
            q.canonicalize();
          }
        }
      }
    }
    r.normalize();
    return r;
  }

  FieldElem inverse() const {
    if (is_zero()) {
      if (exact_) throw DivisionByZero();
      throw PrecisionExhausted("inverse of O(" + std::to_string(absprec_) + ")");
    }
    FieldElem r(field_);
    std::int64_t v = val().as_int();
    if (field_.is_padic()) {
      r.q_ = 1 / q_;
      r.exact_ = exact_;
      if (!exact_) r.make_inexact(-v + (absprec_ - v));
      return r;
    }
    if (exact_ && coeffs_.size() == 1) {
      r.lo_ = -lo_;
      r.coeffs_.push_back(1 / coeffs_[0]);
      return r;
    }
    std::int64_t rel = exact_ ? field_.precision : absprec_ - v;
    std::vector<mpq_class> b(static_cast<std::size_t>(rel));
    mpq_class inv0 = 1 / coeffs_[0];
    b[0] = inv0;
    mpq_class acc, t;
    for (std::int64_t n = 1; n < rel; ++n) {
      acc = 0;
      std::int64_t kmax = std::min<std::int64_t>(n, static_cast<std::int64_t>(coeffs_.size()) - 1);
      for (std::int64_t k = 1; k <= kmax; ++k) {
        mpq_mul(t.get_mpq_t(), coeffs_[static_cast<std::size_t>(k)].get_mpq_t(),
                b[static_cast<std::size_t>(n - k)].get_mpq_t());
        acc += t;
      }
      b[static_cast<std::size_t>(n)] = -inv0 * acc;
    }
    return series(field_, -v, std::move(b), -v + rel);
  }

  friend FieldElem operator/(const FieldElem& a, const FieldElem& b) { return a * b.inverse(); }

  FieldElem pow(std::int64_t n) const {
    if (n < 0) return inverse().pow(-n);
    FieldElem result = one(field_), base = *this;
    while (n > 0) {
      if (n & 1) result = result * base;
      n >>= 1;
      if (n > 0) base = base * base;
    }
    return result;
  }

  FieldElem& operator+=(const FieldElem& o) { return *this = *this + o; }
  FieldElem& operator-=(const FieldElem& o) { return *this = *this - o; }
  FieldElem& operator*=(const FieldElem& o) { return *this = *this * o; }

  /// Exact quotient a/b of exact elements when b divides a in Q[t, 1/t]
  /// (laurent-q) or always (padic). Returns nullopt if the division is not
  /// exact in that ring.
  static std::optional<FieldElem> exact_quotient(const FieldElem& a, const FieldElem& b) {
    check_same(a, b);
    if (!a.exact_ || !b.exact_) return std::nullopt;
    if (b.is_zero()) throw DivisionByZero();
    if (a.field_.is_padic()) return from_rational(a.field_, a.q_ / b.q_);
    if (a.is_zero()) return a;
    // long division from the top degree of the Laurent polynomials
    std::vector<mpq_class> rem = a.coeffs_;
    const auto& d = b.coeffs_;
    if (rem.size() < d.size()) return std::nullopt;
    std::size_t qn = rem.size() - d.size() + 1;
    std::vector<mpq_class> q(qn);
    for (std::size_t k = qn; k-- > 0;) {
      mpq_class c = rem[k + d.size() - 1] / d.back();
      q[k] = c;
      if (c == 0) continue;
      for (std::size_t j = 0; j < d.size(); ++j) rem[k + j] -= c * d[j];
    }
    for (const auto& c : rem)
      if (c != 0) return std::nullopt;
    return series(a.field_, a.lo_ - b.lo_, std::move(q));
  }

 private:
  static void check_same(const FieldElem& a, const FieldElem& b) {
    if (!(a.field_ == b.field_)) throw std::logic_error("mixing elements of different fields");
  }

  void make_inexact(std::int64_t n) {
    exact_ = false;
    absprec_ = n;
    normalize();
  }

  void normalize() {
    if (field_.is_padic()) {
      if (exact_ || q_ == 0) {
        if (q_ == 0) lo_ = 0;
        return;
      }
      std::int64_t v = detail::padic_val(q_, field_.p);
      if (v >= absprec_) {
        q_ = 0;
        return;
      }
      mpz_class u = unit_residue(absprec_ - v);
      q_ = mpq_class(u) * detail::pow_p(field_.p, v);
      q_.canonicalize();
      return;
    }
    if (!exact_) {
      std::int64_t cap = absprec_ - lo_;
      if (cap <= 0) {
        coeffs_.clear();
      } else if (static_cast<std::int64_t>(coeffs_.size()) > cap) {
        coeffs_.resize(static_cast<std::size_t>(cap));
      }
    }
    std::size_t first = 0;
    while (first < coeffs_.size() && coeffs_[first] == 0) ++first;
    if (first == coeffs_.size()) {
      coeffs_.clear();
      lo_ = 0;
      return;
    }
    if (first > 0) {
      coeffs_.erase(coeffs_.begin(), coeffs_.begin() + static_cast<std::ptrdiff_t>(first));
      lo_ += static_cast<std::int64_t>(first);
    }
    while (!coeffs_.empty() && coeffs_.back() == 0) coeffs_.pop_back();
  }

  Field field_{};
  bool exact_ = true;
  std::int64_t absprec_ = 0;
  std::int64_t lo_ = 0;
  std::vector<mpq_class> coeffs_;  // laurent-q
  mpq_class q_;                    // padic
};

/// v(n!) in the given field: 0 in laurent-q, Legendre's formula in padic-p.
inline ValQ val_factorial(const Field& f, std::int64_t n) {
  if (!f.is_padic()) return 0;
  std::int64_t s = 0;
  for (std::int64_t pk = f.p; pk <= n; pk *= f.p) s += n / pk;
  return s;
}

/// v(x), with anything that vanishes to its known precision counted as zero.
inline ValQ val_or_inf(const FieldElem& x) { return x.is_zero() ? ValQ::inf() : x.val(); }

}  // namespace hqe
