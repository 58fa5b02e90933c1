#pragma once

#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "hqe/errors.hpp"
#include "hqe/expr.hpp"
#include "hqe/field.hpp"
#include "hqe/valq.hpp"

namespace hqe {

/// An element of RV_delta = K^x / (1 + m_delta), plus infinity.
///
/// Stored canonically as (order, value, unit digits): the unit part of any
/// representative modulo pi^(order+1). Digits are rational coefficients in
/// laurent-q and base-p digits in padic. Equality of RVElems is equality of
/// classes.
struct RVElem {
  Field field;
  std::int64_t order = 0;
  bool inf = true;
  std::int64_t value = 0;
  std::vector<mpq_class> unit;  // order + 1 digits, unit[0] != 0

  static RVElem infinity(const Field& f, std::int64_t order) {
    RVElem r;
    r.field = f;
    r.order = order;
    return r;
  }

  bool is_inf() const { return inf; }
  ValQ val() const { return inf ? ValQ::inf() : ValQ(value); }

  /// The canonical representative pi^value * sum unit[i] pi^i (exact).
  FieldElem representative() const {
    if (inf) return FieldElem::zero(field);
    if (!field.is_padic()) return FieldElem::series(field, value, unit);
    mpq_class u = 0, pk = 1;
    for (const auto& d : unit) {
      u += d * pk;
      pk *= field.p;
    }
    return FieldElem::from_rational(field, u * detail::pow_p(field.p, value));
  }

  friend bool operator==(const RVElem& a, const RVElem& b) {
    return a.field == b.field && a.order == b.order && a.inf == b.inf &&
           (a.inf || (a.value == b.value && a.unit == b.unit));
  }
};

namespace detail {
inline void check_order(std::int64_t delta) {
  if (delta < 0) throw OrderViolation("negative order " + std::to_string(delta));
}
inline void same_order(const RVElem& a, const RVElem& b) {
  if (a.order != b.order) {
    throw OrderMismatch("orders " + std::to_string(a.order) + " and " + std::to_string(b.order));
  }
  if (!(a.field == b.field)) throw OrderMismatch("elements of different fields");
}
/// Working field with enough relative precision for order-delta computations.
inline Field roomy(const Field& f, std::int64_t delta) {
  Field g = f;
  g.precision = std::max(f.precision, delta + 2);
  return g;
}
inline FieldElem rebase(const FieldElem& x, const Field& f) {
  if (x.field().is_padic()) {
    return x.is_exact() ? FieldElem::from_rational(f, x.rational())
                        : FieldElem::from_rational(f, x.rational(), x.abs_precision().as_int());
  }
  std::optional<std::int64_t> ap;
  if (!x.is_exact()) ap = x.abs_precision().as_int();
  return FieldElem::series(f, x.low_exponent(), x.coefficients(), ap);
}
}  // namespace detail

/// rv_delta(x). Exact zero maps to infinity; a zero known only to finite
/// precision, or too few known digits, raises PrecisionExhausted.
inline RVElem rv(const FieldElem& x, std::int64_t delta) {
  detail::check_order(delta);
  RVElem r = RVElem::infinity(x.field(), delta);
  if (x.is_exact_zero()) return r;
  r.inf = false;
  r.value = x.val().as_int();
  r.unit = x.unit_digits(delta + 1);
  return r;
}

/// The natural map RV_gamma -> RV_delta.
inline RVElem rv_project(const RVElem& a, std::int64_t delta) {
  detail::check_order(delta);
  if (delta > a.order) {
    throw OrderViolation("cannot project order " + std::to_string(a.order) + " to " + std::to_string(delta));
  }
  RVElem r = a;
  r.order = delta;
  if (!r.inf) r.unit.resize(static_cast<std::size_t>(delta + 1));
  return r;
}

inline RVElem rv_mul(const RVElem& a, const RVElem& b) {
  detail::same_order(a, b);
  if (a.inf || b.inf) return RVElem::infinity(a.field, a.order);
  // digit-level product of the units, truncated to order + 1 digits
  RVElem r = a;
  r.value = a.value + b.value;
  const std::size_t n = static_cast<std::size_t>(a.order + 1);
  if (a.field.is_padic()) {
    mpz_class p(static_cast<long>(a.field.p));
    auto to_int = [&](const std::vector<mpq_class>& ds) {
      mpz_class u = 0;
      for (std::size_t i = ds.size(); i-- > 0;) u = u * p + ds[i].get_num();
      return u;
    };
    mpz_class u = to_int(a.unit) * to_int(b.unit);
    for (std::size_t i = 0; i < n; ++i) {
      mpz_class d;
      mpz_fdiv_qr(u.get_mpz_t(), d.get_mpz_t(), u.get_mpz_t(), p.get_mpz_t());
      r.unit[i] = d;
    }
  } else {
    for (std::size_t k = 0; k < n; ++k) {
      mpq_class c = 0;
      for (std::size_t i = 0; i <= k; ++i) c += a.unit[i] * b.unit[k - i];
      r.unit[k] = c;
    }
  }
  return r;
}

inline RVElem rv_inv(const RVElem& a) {
  if (a.inf) throw DivisionByZero();
  Field g = detail::roomy(a.field, a.order);
  FieldElem inv = detail::rebase(a.representative(), g).inverse();
  RVElem r = rv(inv, a.order);
  r.field = a.field;
  return r;
}

inline RVElem rv_pow(const RVElem& a, std::int64_t k) {
  if (k < 0) return rv_pow(rv_inv(a), -k);
  RVElem r = rv(FieldElem::one(a.field), a.order);
  for (std::int64_t i = 0; i < k; ++i) r = rv_mul(r, a);
  return r;
}

inline RVElem rv_neg(const RVElem& a) {
  if (a.inf) return a;
  return rv(-a.representative(), a.order);
}

inline RVElem rv_one(const Field& f, std::int64_t delta) { return rv(FieldElem::one(f), delta); }

// ---------------------------------------------------------------------------
// Partial addition.

/// Outcome of summing classes. A well-defined sum has severity 0 and a result.
/// An ambiguous sum carries its severity when it is determined and the value
/// of the witnesses when that is determined.
struct SumAnalysis {
  bool well_defined = false;
  std::optional<RVElem> result;
  ValQ severity = 0;
  /// false when only "severity > order" is known (class-level analysis).
  bool severity_known = true;
  std::optional<ValQ> witness_value;
};

/// Analysis of rv_delta(x_1) + ... + rv_delta(x_n) from field elements: the
/// severity eps = v(sum) - min v(x_i) is exact. The witness value is reported
/// when delta >= eps.
inline SumAnalysis rv_sum_analyze(const std::vector<FieldElem>& xs, std::int64_t delta) {
  detail::check_order(delta);
  if (xs.empty()) throw PreconditionViolated("empty sum");
  const Field& f = xs.front().field();
  ValQ mn = ValQ::inf();
  FieldElem s = FieldElem::zero(f);
  for (const auto& x : xs) {
    mn = min(mn, x.val());
    s += x;
  }
  SumAnalysis out;
  if (mn.is_pos_inf()) {
    out.well_defined = true;
    out.result = RVElem::infinity(f, delta);
    return out;
  }
  ValQ vs = s.val();  // throws when the sum vanishes to the known precision
  out.severity = vs - mn;
  if (out.severity == ValQ(0)) {
    out.well_defined = true;
    out.result = rv(s, delta);
    return out;
  }
  if (out.severity <= ValQ(delta)) out.witness_value = vs;
  return out;
}

/// Class-level analysis from RV elements via canonical representatives. The
/// severity is determined only when v(sum of representatives) - min <= order;
/// beyond that any witness value above min + order is possible.
inline SumAnalysis rv_sum_analyze(const std::vector<RVElem>& xs) {
  if (xs.empty()) throw PreconditionViolated("empty sum");
  for (const auto& x : xs) detail::same_order(xs.front(), x);
  const std::int64_t delta = xs.front().order;
  const Field& f = xs.front().field;
  ValQ mn = ValQ::inf();
  FieldElem s = FieldElem::zero(f);
  for (const auto& x : xs) {
    mn = min(mn, x.val());
    s += x.representative();
  }
  SumAnalysis out;
  if (mn.is_pos_inf()) {
    out.well_defined = true;
    out.result = RVElem::infinity(f, delta);
    return out;
  }
  ValQ vs = s.val();
  if (vs.is_pos_inf() || vs - mn > ValQ(delta)) {
    out.severity = ValQ(delta + 1);
    out.severity_known = false;
    return out;
  }
  out.severity = vs - mn;
  if (out.severity == ValQ(0)) {
    out.well_defined = true;
    out.result = rv(s, delta);
  } else {
    out.witness_value = vs;
  }
  return out;
}

/// The projected sum: for a well-defined sum its class; for an ambiguous sum
/// with determined severity eps, the common projection of all witnesses to
/// order delta - eps. nullopt when nothing is determined.
inline std::optional<RVElem> rv_sum_projection(const std::vector<RVElem>& xs) {
  SumAnalysis a = rv_sum_analyze(xs);
  if (a.well_defined) return a.result;
  if (!a.severity_known) return std::nullopt;
  std::int64_t d = xs.front().order - a.severity.as_int();
  FieldElem s = FieldElem::zero(xs.front().field);
  for (const auto& x : xs) s += x.representative();
  return rv(s, d);
}

/// The n-ary relation w ~ x_1 + ... + x_n: some representatives of the x_i
/// sum to an element of class w.
inline bool oplus_holds(const std::vector<RVElem>& xs, const RVElem& w) {
  if (xs.empty()) throw PreconditionViolated("empty sum");
  for (const auto& x : xs) detail::same_order(w, x);
  ValQ mn = ValQ::inf();
  FieldElem s = FieldElem::zero(w.field);
  for (const auto& x : xs) {
    mn = min(mn, x.val());
    s += x.representative();
  }
  FieldElem diff = w.representative() - s;
  if (mn.is_pos_inf()) return diff.is_exact_zero();
  return diff.val() > mn + ValQ(w.order);
}

inline bool oplus_holds(const RVElem& a, const RVElem& b, const RVElem& c) { return oplus_holds({a, b}, c); }

// ---------------------------------------------------------------------------
// Value and residue maps.

inline ValQ value_of(const RVElem& a) { return a.val(); }

/// Element of R_delta = O / m_delta, i.e. modulo pi^(delta+1). Digits are the
/// coefficients of 1, pi, ..., pi^delta (base-p digits in padic).
struct ResidueData {
  Field field;
  std::int64_t delta = 0;
  std::vector<mpq_class> digits;

  bool is_one() const {
    for (std::size_t i = 0; i < digits.size(); ++i) {
      if (digits[i] != (i == 0 ? 1 : 0)) return false;
    }
    return true;
  }
  /// padic: the residue as an integer in [0, p^(delta+1)).
  mpz_class as_integer() const {
    mpz_class r = 0, pk = 1;
    for (const auto& d : digits) {
      r += d.get_num() * pk;
      pk *= field.p;
    }
    return r;
  }
  friend bool operator==(const ResidueData& a, const ResidueData& b) {
    return a.field == b.field && a.delta == b.delta && a.digits == b.digits;
  }
};

inline ResidueData res_delta(const FieldElem& x, std::int64_t delta) {
  detail::check_order(delta);
  ResidueData r{x.field(), delta, std::vector<mpq_class>(static_cast<std::size_t>(delta + 1), 0)};
  if (x.is_zero()) {
    if (!x.val_greater(delta)) throw PrecisionExhausted("residue beyond precision");
    return r;
  }
  std::int64_t v = x.val().as_int();
  if (v < 0) throw NegativeValue("res_delta of an element of negative value");
  if (v > delta) return r;
  auto u = x.unit_digits(delta + 1 - v);
  for (std::int64_t i = v; i <= delta; ++i) r.digits[static_cast<std::size_t>(i)] = u[static_cast<std::size_t>(i - v)];
  return r;
}

/// The residue of a class of value >= 0: rv_delta(x) determines x modulo
/// m_delta when v(x) >= 0.
inline ResidueData residue_of(const RVElem& a) {
  if (a.inf) return ResidueData{a.field, a.order, std::vector<mpq_class>(static_cast<std::size_t>(a.order + 1), 0)};
  if (a.value < 0) throw NegativeValue("residue of a class of negative value");
  return res_delta(a.representative(), a.order);
}

/// v(x) > 0 through the relation d*x + 1 ~ 1 with v(d) = order.
inline bool rv_positive(const RVElem& x, const RVElem& d) {
  RVElem one = rv_one(x.field, x.order);
  return oplus_holds(rv_mul(d, x), one, one);
}
inline bool rv_positive(const RVElem& x) {
  return rv_positive(x, rv(FieldElem::uniformizer(x.field).pow(x.order), x.order));
}

// ---------------------------------------------------------------------------
// Text form: rv[d]{v=k; unit=c0,...,cd} and rv[d]{inf}.

inline std::string format(const RVElem& a) {
  std::ostringstream os;
  os << "rv[" << a.order << "]{";
  if (a.inf) {
    os << "inf}";
    return os.str();
  }
  os << "v=" << a.value << "; unit=";
  for (std::size_t i = 0; i < a.unit.size(); ++i) os << (i ? "," : "") << a.unit[i].get_str();
  os << "}";
  return os.str();
}
inline std::ostream& operator<<(std::ostream& os, const RVElem& a) { return os << format(a); }

/// Parses the braces part after "rv[d]"; the lexer sits on '{'.
inline RVElem parse_rv_body(Lexer& lx, const Field& f, std::int64_t delta) {
  lx.expect("{");
  if (lx.accept("inf")) {
    lx.expect("}");
    return RVElem::infinity(f, delta);
  }
  lx.expect("v");
  lx.expect("=");
  RVElem r;
  r.field = f;
  r.order = delta;
  r.inf = false;
  r.value = lx.expect_int();
  lx.expect(";");
  lx.expect("unit");
  lx.expect("=");
  do {
    mpz_class num(std::to_string(lx.expect_int()));
    mpz_class den = 1;
    if (lx.accept("/")) den = mpz_class(std::to_string(lx.expect_int()));
    if (den == 0) lx.fail("zero denominator");
    r.unit.emplace_back(num, den);
    r.unit.back().canonicalize();
  } while (lx.accept(","));
  lx.expect("}");
  if (static_cast<std::int64_t>(r.unit.size()) != delta + 1) lx.fail("unit needs order+1 digits");
  if (r.unit[0] == 0) lx.fail("leading unit digit must be nonzero");
  if (f.is_padic()) {
    for (const auto& d : r.unit) {
      if (d.get_den() != 1 || d < 0 || d >= f.p) lx.fail("p-adic unit digits must lie in [0, p)");
    }
  }
  return r;
}

inline RVElem parse_rv(const Field& f, const std::string& text) {
  Lexer lx(text);
  lx.expect("rv");
  lx.expect("[");
  std::int64_t d = lx.expect_int();
  if (d < 0) lx.fail("negative order");
  lx.expect("]");
  RVElem r = parse_rv_body(lx, f, d);
  if (!lx.at_end()) lx.fail("trailing input");
  return r;
}

}  // namespace hqe
