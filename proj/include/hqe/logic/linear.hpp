#pragma once

#include <string>
#include <vector>

#include "hqe/logic/eval.hpp"

namespace hqe {

/// rv_delta(z) = rv_delta(a x - b).
struct LinearConstraint {
  FieldElem z, a, b;
  std::int64_t delta = 0;
};

/// Which branch of the two-ball analysis decided a pair. kPoint covers z = 0,
/// where the constraint pins x to a single point.
enum class LinearCase : std::uint8_t { kPoint, kCase1, kCase2, kCase3, kCase4 };

struct LinearDecision {
  bool holds = true;
  std::vector<LinearCase> cases;  // one per pair examined
};

namespace detail {

/// After dividing by a: rv(z') = rv(x - c) with z' = z/a, c = b/a.
struct Normalized {
  FieldElem z, c;
  std::int64_t delta;
};

inline Normalized normalize(const LinearConstraint& k) {
  if (k.a.is_zero()) throw PreconditionViolated("linear constraint with a = 0");
  return {k.z / k.a, k.b / k.a, k.delta};
}

inline LinearCase decide_pair(Normalized p, Normalized q, bool& holds) {
  if (p.z.is_zero() || q.z.is_zero()) {
    if (p.z.is_zero() && q.z.is_zero()) {
      holds = (p.c - q.c).is_zero();
    } else {
      if (p.z.is_zero()) std::swap(p, q);
      // x = q.c must satisfy the other constraint
      holds = rv_or_inf(p.z, p.delta) == rv_or_inf(q.c - p.c, p.delta);
    }
    return LinearCase::kPoint;
  }
  ValQ r1 = p.z.val() + ValQ(p.delta), r2 = q.z.val() + ValQ(q.delta);
  if (r2 < r1) std::swap(p, q);
  const FieldElem& z1 = p.z;
  const FieldElem& z2 = q.z;
  const std::int64_t d1 = p.delta, d2 = q.delta;
  FieldElem diff = p.c - q.c;
  ValQ e = val_or_inf(diff);
  ValQ v1 = z1.val(), v2 = z2.val();
  if (v1 <= e && v1 <= v2) {
    // severity of rv(z1) - rv(z2) + rv(c1 - c2) at order d1 must exceed d1
    RVElem a = rv(z1, d1);
    RVElem b = d1 <= d2 ? rv_project(rv(z2, d2), d1) : rv(rv(z2, d2).representative(), d1);
    RVElem c = rv_or_inf(diff, d1);
    SumAnalysis s = rv_sum_analyze(std::vector<RVElem>{a, rv_neg(b), c});
    holds = !s.well_defined && !s.severity_known;
    return d1 <= d2 ? LinearCase::kCase1 : LinearCase::kCase2;
  }
  if (v1 <= e) {
    holds = false;
    return LinearCase::kCase3;
  }
  // v(c1 - c2) < v(z1): some witness of rv(z2) - rv(c1 - c2) projects to rv(z1)
  if (d1 > d2) {
    holds = false;
    return LinearCase::kCase4;
  }
  FieldElem s = rv(z2, d2).representative() - diff;
  ValQ m = min(v2, e);
  holds = val_or_inf(s - rv(z1, d1).representative()) > min(m + ValQ(d2), v1 + ValQ(d1));
  return LinearCase::kCase4;
}

}  // namespace detail

/// Decides EX x. AND_i rv_{d_i}(z_i) = rv_{d_i}(a_i x - b_i) from the pairwise
/// ball analysis. Pairwise intersecting balls have a common point.
inline LinearDecision eliminate_linear_exists_detail(const std::vector<LinearConstraint>& cs) {
  std::vector<detail::Normalized> ns;
  for (const auto& c : cs) ns.push_back(detail::normalize(c));
  LinearDecision out;
  for (std::size_t i = 0; i < ns.size(); ++i) {
    for (std::size_t j = i + 1; j < ns.size(); ++j) {
      bool h = true;
      out.cases.push_back(detail::decide_pair(ns[i], ns[j], h));
      out.holds = out.holds && h;
    }
  }
  return out;
}

inline bool eliminate_linear_exists(const std::vector<LinearConstraint>& cs) {
  return eliminate_linear_exists_detail(cs).holds;
}

// ---------------------------------------------------------------------------
// Symbolic form: the constraint values are RV terms.

/// rho = rv_delta(a x - b), rho an x-free RV term of order delta.
struct SymbolicConstraint {
  RVPtr rho;
  FieldElem a, b;
};

namespace detail {

struct SymNorm {
  RVPtr z;  // rv(x - c)
  FieldElem c;
  std::int64_t d;
};

class LinearEmitter {
 public:
  explicit LinearEmitter(const Field& f) : f_(f) {}

  FormulaPtr emit(const std::vector<SymbolicConstraint>& cs) {
    std::vector<SymNorm> ns;
    for (const auto& c : cs) {
      if (c.a.is_zero()) throw PreconditionViolated("linear constraint with a = 0");
      std::int64_t d = c.rho->order;
      RVPtr inv = RVTerm::literal(rv_inv(rv(c.a, d)));
      ns.push_back({RVTerm::mul(c.rho, inv), c.b / c.a, d});
    }
    std::vector<FormulaPtr> parts;
    for (std::size_t i = 0; i < ns.size(); ++i) {
      for (std::size_t j = i + 1; j < ns.size(); ++j) parts.push_back(pair(ns[i], ns[j]));
    }
    return fm::all_of(parts);
  }

 private:
  RVPtr lit(const FieldElem& x, std::int64_t d) const { return RVTerm::literal(rv_or_inf(x, d)); }
  RVPtr inf(std::int64_t d) const { return RVTerm::literal(RVElem::infinity(f_, d)); }
  FormulaPtr is_inf(const RVPtr& z) const { return fm::rv_eq(z, inf(z->order)); }
  std::string fresh(const std::string& base) { return base + "_" + std::to_string(++counter_); }

  FormulaPtr pair(const SymNorm& p, const SymNorm& q) {
    FieldElem pq = q.c - p.c;  // c2 - c1
    std::vector<FormulaPtr> alts;
    alts.push_back(fm::all_of({is_inf(p.z), is_inf(q.z), fm::truth(pq.is_zero())}));
    alts.push_back(fm::all_of({is_inf(p.z), fm::negate(is_inf(q.z)), fm::rv_eq(q.z, lit(p.c - q.c, q.d))}));
    alts.push_back(fm::all_of({is_inf(q.z), fm::negate(is_inf(p.z)), fm::rv_eq(p.z, lit(pq, p.d))}));
    // radius comparison v(z1) + d1 <= v(z2) + d2 through pi^d factors
    RVPtr s1 = RVTerm::mul(p.z, lit(FieldElem::monomial(f_, 1, p.d), p.d));
    RVPtr s2 = RVTerm::mul(q.z, lit(FieldElem::monomial(f_, 1, q.d), q.d));
    FormulaPtr ordered = fm::disj(fm::conj(fm::vcmp(s1, "<=", s2), ordered_pair(p, q)),
                                  fm::conj(fm::vcmp(s2, "<", s1), ordered_pair(q, p)));
    alts.push_back(fm::all_of({fm::negate(is_inf(p.z)), fm::negate(is_inf(q.z)), ordered}));
    return fm::any_of(alts);
  }

  /// Both z nonzero and v(z1) + d1 <= v(z2) + d2.
  FormulaPtr ordered_pair(const SymNorm& p, const SymNorm& q) {
    const std::int64_t d1 = p.d, d2 = q.d;
    FieldElem diff = p.c - q.c;
    RVPtr e1 = lit(diff, d1);
    // first branch: v(z1) <= v(c1 - c2) and v(z1) <= v(z2)
    RVPtr minus_z2;
    std::string u;
    if (d1 <= d2) {
      minus_z2 = RVTerm::neg(RVTerm::proj(q.z, d1));
    } else {
      u = fresh("u");
      minus_z2 = RVTerm::neg(RVTerm::var(u, d1));
    }
    std::string w1 = fresh("w"), w2 = fresh("w");
    auto sum_into = [&](const std::string& w) {
      return fm::oplus(d1, {p.z, minus_z2, e1, RVTerm::var(w, d1)});
    };
    FormulaPtr sev = fm::exists_rv(
        w1, d1,
        fm::exists_rv(w2, d1,
                      fm::all_of({fm::vcmp(RVTerm::var(w1, d1), "!=", RVTerm::var(w2, d1)), sum_into(w1), sum_into(w2)})));
    if (d1 > d2) sev = fm::forall_rv(u, d1, fm::implies(fm::rv_eq(RVTerm::proj(RVTerm::var(u, d1), d2), q.z), sev));
    FormulaPtr first = fm::all_of({fm::vcmp(p.z, "<=", e1), fm::vcmp(p.z, "<=", q.z), sev});
    // second branch: v(c1 - c2) < v(z1)
    FormulaPtr second;
    if (d1 > d2) {
      second = fm::truth(false);
    } else {
      std::string w = fresh("w");
      RVPtr wv = RVTerm::var(w, d2);
      RVPtr proj = d1 == d2 ? wv : RVTerm::proj(wv, d1);
      second = fm::exists_rv(w, d2, fm::conj(fm::oplus(d2, {q.z, RVTerm::neg(lit(diff, d2)), wv}), fm::rv_eq(proj, p.z)));
    }
    return fm::disj(first, fm::conj(fm::vcmp(e1, "<", p.z), second));
  }

  Field f_;
  int counter_ = 0;
};

}  // namespace detail

/// The field-quantifier-free formula equivalent to
/// EX x. AND_i rho_i = rv(a_i x - b_i), over the RV terms rho_i.
inline FormulaPtr emit_linear_exists(const Field& f, const std::vector<SymbolicConstraint>& cs) {
  detail::LinearEmitter em(f);
  return em.emit(cs);
}

}  // namespace hqe
