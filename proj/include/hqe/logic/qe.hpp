#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "hqe/logic/eval.hpp"
#include "hqe/logic/explore.hpp"
#include "hqe/logic/linear.hpp"
#include "hqe/roots.hpp"

namespace hqe {

namespace detail {

// ---------------------------------------------------------------------------
// Valuation data of literals in one field variable.

struct Frac {
  Poly n, d;
};

inline Frac frac_of(const RVPtr& t, const std::string& x, const Field& f) {
  switch (t->op) {
    case RVTerm::Op::kRv: return {expr_to_poly(t->field, x, f, {}), Poly::constant(FieldElem::one(f))};
    case RVTerm::Op::kLit: {
      FieldElem c = t->lit.representative();
      return {c.is_zero() ? Poly(f) : Poly::constant(c), Poly::constant(FieldElem::one(f))};
    }
    case RVTerm::Op::kVar: throw NonEffectiveQuantifier("RV variable " + t->name + " next to the eliminated variable " + x);
    case RVTerm::Op::kMul: {
      Frac a = frac_of(t->args[0], x, f), b = frac_of(t->args[1], x, f);
      return {a.n * b.n, a.d * b.d};
    }
    case RVTerm::Op::kNeg: {
      Frac a = frac_of(t->args[0], x, f);
      return {-a.n, a.d};
    }
    case RVTerm::Op::kPow: {
      Frac a = frac_of(t->args[0], x, f);
      std::int64_t k = t->exponent;
      return k >= 0 ? Frac{a.n.pow(k), a.d.pow(k)} : Frac{a.d.pow(-k), a.n.pow(-k)};
    }
    case RVTerm::Op::kProj: return frac_of(t->args[0], x, f);
  }
  throw std::logic_error("frac_of: unknown node");
}

/// Polynomials in x whose valuations decide the atom, and the offsets the
/// atom compares them with.
inline void valuation_data(const FormulaPtr& a, const std::string& x, const Field& f, std::vector<Poly>& polys,
                           std::set<std::int64_t>& offsets) {
  using K = Formula::Kind;
  switch (a->kind) {
    case K::kPolyZero:
      polys.push_back(expr_to_poly(a->lhs, x, f, {}) - expr_to_poly(a->rhs, x, f, {}));
      return;
    case K::kRVEq:
    case K::kVCmp: {
      Frac p = frac_of(a->terms[0], x, f), q = frac_of(a->terms[1], x, f);
      Poly l = p.n * q.d, r = q.n * p.d;
      polys.push_back(l);
      polys.push_back(r);
      if (a->kind == K::kRVEq) {
        polys.push_back(l - r);
        offsets.insert(a->terms[0]->order);
      }
      return;
    }
    case K::kOplus: {
      std::vector<Frac> fr;
      for (const auto& t : a->terms) fr.push_back(frac_of(t, x, f));
      std::vector<Poly> m;
      for (std::size_t i = 0; i < fr.size(); ++i) {
        Poly acc = fr[i].n;
        for (std::size_t j = 0; j < fr.size(); ++j) {
          if (j != i) acc = acc * fr[j].d;
        }
        m.push_back(acc);
      }
      Poly diff = m.back();
      for (std::size_t i = 0; i + 1 < m.size(); ++i) diff = diff - m[i];
      for (const auto& p : m) polys.push_back(p);
      polys.push_back(diff);
      offsets.insert(a->order);
      return;
    }
    case K::kNot:
      valuation_data(a->kids[0], x, f, polys, offsets);
      return;
    default: throw NonEffectiveQuantifier("no valuation data for " + print_formula(a));
  }
}

// ---------------------------------------------------------------------------
// Disjunctive normal form over literals (atoms, negated atoms and RV-quantified
// subformulas, which stay opaque).

using Conjunct = std::vector<FormulaPtr>;

inline std::vector<Conjunct> dnf(const FormulaPtr& f, bool positive) {
  using K = Formula::Kind;
  constexpr std::size_t kMaxConjuncts = 1u << 14;
  auto cross = [&](const std::vector<Conjunct>& a, const std::vector<Conjunct>& b) {
    if (a.size() * b.size() > kMaxConjuncts) throw PreconditionViolated("disjunctive normal form too large");
    std::vector<Conjunct> out;
    for (const auto& x : a) {
      for (const auto& y : b) {
        Conjunct c = x;
        c.insert(c.end(), y.begin(), y.end());
        out.push_back(std::move(c));
      }
    }
    return out;
  };
  auto join = [](std::vector<Conjunct> a, const std::vector<Conjunct>& b) {
    a.insert(a.end(), b.begin(), b.end());
    return a;
  };
  switch (f->kind) {
    case K::kTrue: return positive ? std::vector<Conjunct>{{}} : std::vector<Conjunct>{};
    case K::kFalse: return positive ? std::vector<Conjunct>{} : std::vector<Conjunct>{{}};
    case K::kNot: return dnf(f->kids[0], !positive);
    case K::kAnd:
      return positive ? cross(dnf(f->kids[0], true), dnf(f->kids[1], true))
                      : join(dnf(f->kids[0], false), dnf(f->kids[1], false));
    case K::kOr:
      return positive ? join(dnf(f->kids[0], true), dnf(f->kids[1], true))
                      : cross(dnf(f->kids[0], false), dnf(f->kids[1], false));
    case K::kImp:
      return positive ? join(dnf(f->kids[0], false), dnf(f->kids[1], true))
                      : cross(dnf(f->kids[0], true), dnf(f->kids[1], false));
    default: return {{positive ? f : fm::negate(f)}};
  }
}

inline const FormulaPtr& literal_atom(const FormulaPtr& l) { return l->kind == Formula::Kind::kNot ? l->kids[0] : l; }

/// rv[d](a x + c) = r or r = rv[d](a x + c) with r free of x: the constraint
/// r = rv_d(a x - b).
inline std::optional<SymbolicConstraint> as_linear(const FormulaPtr& l, const std::string& x, const Field& f) {
  if (l->kind != Formula::Kind::kRVEq) return std::nullopt;
  for (int side = 0; side < 2; ++side) {
    const RVPtr& t = l->terms[side];
    const RVPtr& r = l->terms[1 - side];
    if (t->op != RVTerm::Op::kRv) continue;
    FreeVars fv;
    rv_free(r, {}, fv);
    if (fv.field.contains(x)) continue;
    Poly p = expr_to_poly(t->field, x, f, {});
    if (p.degree() != 1) continue;
    return SymbolicConstraint{r, p.coeffs()[1], -p.coeffs()[0]};
  }
  return std::nullopt;
}

inline bool eval_literals(const Conjunct& ls, const Field& f, const Env& env) {
  for (const auto& l : ls) {
    if (!evaluate(l, f, env)) return false;
  }
  return true;
}

/// EX x. AND ls, where every literal mentions x.
inline FormulaPtr eliminate_conjunct(const std::string& x, const Conjunct& ls, const Field& f) {
  for (const auto& l : ls) {
    if (l->kind == Formula::Kind::kExists || l->kind == Formula::Kind::kForall ||
        literal_atom(l)->is_quantifier()) {
      throw NonEffectiveQuantifier("RV quantifier over a formula in the eliminated variable " + x);
    }
  }
  auto subst_all = [&](const FieldElem& c) {
    std::vector<FormulaPtr> out;
    for (const auto& l : ls) out.push_back(substitute(l, {{x, c}}));
    return fm::all_of(out);
  };
  // an equation in x: the witnesses are among its roots
  for (const auto& l : ls) {
    if (l->kind != Formula::Kind::kPolyZero) continue;
    Poly p = expr_to_poly(l->lhs, x, f, {}) - expr_to_poly(l->rhs, x, f, {});
    if (p.is_zero()) continue;
    if (p.degree() == 0) return fm::truth(false);
    std::vector<FormulaPtr> alts;
    for (const auto& r : find_roots(p)) alts.push_back(subst_all(r));
    return fm::any_of(alts);
  }
  // rv-linear constraints
  std::vector<SymbolicConstraint> lin;
  for (const auto& l : ls) {
    auto c = as_linear(l, x, f);
    if (!c) break;
    lin.push_back(*c);
  }
  if (lin.size() == ls.size()) return emit_linear_exists(f, lin);
  for (const auto& l : ls) {
    if (!free_vars(l).rv.empty()) throw NonEffectiveQuantifier("RV variables in a nonlinear constraint on " + x);
  }
  std::vector<Poly> polys;
  std::set<std::int64_t> offsets;
  for (const auto& l : ls) valuation_data(literal_atom(l), x, f, polys, offsets);
  for (const auto& region : explore(f, polys, offsets)) {
    for (const auto& c : region.points()) {
      Env env;
      env.field[x] = c;
      if (eval_literals(ls, f, env)) return subst_all(c);
    }
  }
  return fm::truth(false);
}

inline FormulaPtr eliminate_exists(const std::string& x, const FormulaPtr& body, const Field& f) {
  FreeVars fv = free_vars(body);
  if (!fv.field.contains(x)) return body;
  for (const auto& y : fv.field) {
    if (y != x) throw PreconditionViolated("field variable " + y + " must be instantiated before eliminating " + x);
  }
  std::vector<FormulaPtr> alts;
  for (const auto& c : dnf(body, true)) {
    Conjunct with_x, without_x;
    for (const auto& l : c) (free_vars(l).field.contains(x) ? with_x : without_x).push_back(l);
    FormulaPtr r = with_x.empty() ? fm::truth(true) : eliminate_conjunct(x, with_x, f);
    without_x.push_back(r);
    alts.push_back(fm::all_of(without_x));
  }
  return fm::any_of(alts);
}

/// Recursion measure: the number of field quantifiers still to eliminate.
inline std::size_t qe_measure(const FormulaPtr& f) { return field_quantifier_count(f); }

inline FormulaPtr qe_rec(const FormulaPtr& phi, const Field& f) {
  using K = Formula::Kind;
  if (field_quantifier_free(phi)) return phi;
  Formula c = *phi;
  if (phi->is_quantifier() && phi->sort == Sort::kField) {
    if (!(qe_measure(phi->kids[0]) < qe_measure(phi))) throw std::logic_error("qe: measure did not decrease");
    FormulaPtr body = qe_rec(phi->kids[0], f);
    if (phi->kind == K::kExists) return eliminate_exists(phi->var, body, f);
    return fm::negate(eliminate_exists(phi->var, fm::negate(body), f));
  }
  for (auto& k : c.kids) {
    if (!(qe_measure(k) <= qe_measure(phi))) throw std::logic_error("qe: measure did not decrease");
    k = qe_rec(k, f);
  }
  return fm::make(c);
}

}  // namespace detail

/// Field-quantifier-free formula equivalent to phi over f. Free field
/// variables must be given concrete values in `params`.
inline FormulaPtr qe(const FormulaPtr& phi, const Field& f, const std::map<std::string, FieldElem>& params = {}) {
  FormulaPtr out = detail::qe_rec(substitute(phi, params), f);
  if (!field_quantifier_free(out)) throw std::logic_error("qe output still has a field quantifier");
  return out;
}

/// Evaluation with field quantifiers decided by elimination.
inline bool evaluate_full(const FormulaPtr& phi, const Field& f, const Env& env = {}) {
  FieldQuantifierHook hook = [&f](const FormulaPtr& q, const Env& e) {
    FormulaPtr r = qe(q, f, e.field);
    return evaluate(r, f, e);
  };
  return evaluate(phi, f, env, hook);
}

inline bool decide(const FormulaPtr& sigma, const Field& f) {
  FreeVars fv = free_vars(sigma);
  if (!fv.field.empty() || !fv.rv.empty()) throw PreconditionViolated("decide needs a sentence");
  return evaluate(qe(sigma, f), f);
}

// ---------------------------------------------------------------------------
// Pullback normal form in one field variable.

struct NormalForm {
  Field field;
  std::string var;
  std::vector<FieldElem> centers;
  std::vector<std::int64_t> orders;
  std::vector<std::string> names;  // RV variables of D, one per center
  FormulaPtr D;

  /// The RV tuple of x and its membership in D.
  Env tuple(const FieldElem& x) const {
    Env e;
    for (std::size_t i = 0; i < centers.size(); ++i) e.rv[names[i]] = rv_or_inf(x - centers[i], orders[i]);
    return e;
  }
  bool member(const FieldElem& x) const { return evaluate(D, field, tuple(x)); }
};

namespace detail {

inline RVPtr pi_lit(const Field& f, std::int64_t k) { return RVTerm::literal(rv(FieldElem::monomial(f, 1, k), 0)); }

}  // namespace detail

inline NormalForm normal_form(const FormulaPtr& phi, const std::string& x, const Field& f) {
  FormulaPtr psi = qe(phi, f);
  FreeVars fv = free_vars(psi);
  for (const auto& y : fv.field) {
    if (y != x) throw PreconditionViolated("normal form needs " + y + " instantiated");
  }
  if (!fv.rv.empty()) throw NonEffectiveQuantifier("normal form of a formula with free RV variables");
  std::vector<Poly> polys;
  std::set<std::int64_t> offsets;
  std::function<void(const FormulaPtr&)> walk = [&](const FormulaPtr& a) {
    if (!free_vars(a).field.contains(x)) return;
    if (a->is_atom()) {
      detail::valuation_data(a, x, f, polys, offsets);
    } else if (a->is_quantifier()) {
      throw NonEffectiveQuantifier("RV quantifier over a formula in " + x);
    } else {
      for (const auto& k : a->kids) walk(k);
    }
  };
  walk(psi);
  std::vector<Region> regions = explore(f, polys, offsets);

  NormalForm nf;
  nf.field = f;
  nf.var = x;
  auto center_var = [&](const FieldElem& c) {
    for (std::size_t i = 0; i < nf.centers.size(); ++i) {
      if ((nf.centers[i] - c).is_zero()) return RVTerm::var(nf.names[i], 0);
    }
    nf.centers.push_back(c);
    nf.orders.push_back(0);
    nf.names.push_back("w" + std::to_string(nf.centers.size()));
    return RVTerm::var(nf.names.back(), 0);
  };
  auto holds_at = [&](const FieldElem& c) {
    Env env;
    env.field[x] = c;
    return evaluate(psi, f, env);
  };
  auto inf0 = RVTerm::literal(RVElem::infinity(f, 0));
  std::vector<FormulaPtr> parts;
  for (const auto& g : regions) {
    switch (g.kind) {
      case Region::Kind::kAll:
        if (holds_at(g.center)) parts.push_back(fm::truth(true));
        center_var(g.center);
        break;
      case Region::Kind::kPoint:
        if (holds_at(g.center)) parts.push_back(fm::rv_eq(center_var(g.center), inf0));
        break;
      case Region::Kind::kBall:
        if (holds_at(g.center)) parts.push_back(fm::vcmp(center_var(g.center), ">=", detail::pi_lit(f, g.r)));
        break;
      case Region::Kind::kSphere: {
        auto pts = g.points();
        if (pts.empty() || !holds_at(pts.front())) break;
        RVPtr w = center_var(g.center);
        std::vector<FormulaPtr> cs = {fm::vcmp(w, "=", detail::pi_lit(f, g.r))};
        for (const auto& u : g.excluded) {
          cs.push_back(fm::negate(fm::rv_eq(w, RVTerm::literal(rv(FieldElem::from_rational(f, u) * detail::pi_pow(f, g.r), 0)))));
        }
        parts.push_back(fm::all_of(cs));
        break;
      }
      case Region::Kind::kAffine: {
        auto pts = g.points();
        std::vector<bool> truth;
        for (const auto& p : pts) truth.push_back(holds_at(p));
        std::size_t i = 0;
        while (i < truth.size()) {
          if (!truth[i]) {
            ++i;
            continue;
          }
          std::size_t j = i;
          while (j + 1 < truth.size() && truth[j + 1]) ++j;
          RVPtr w = center_var(g.center);
          std::vector<FormulaPtr> cs;
          bool open_lo = i == 0 && !g.klo;
          bool open_hi = j + 1 == truth.size() && !g.khi;
          if (!open_lo) cs.push_back(fm::vcmp(w, ">=", detail::pi_lit(f, g.ks[i])));
          if (!open_hi) cs.push_back(fm::vcmp(w, "<=", detail::pi_lit(f, g.ks[j])));
          if (open_hi) cs.push_back(fm::negate(fm::rv_eq(w, inf0)));
          parts.push_back(fm::all_of(cs));
          i = j + 1;
        }
        break;
      }
    }
  }
  if (nf.centers.empty()) center_var(FieldElem::zero(f));
  nf.D = fm::any_of(parts);
  return nf;
}

}  // namespace hqe
