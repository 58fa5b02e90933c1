#pragma once

#include <map>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "hqe/errors.hpp"
#include "hqe/expr.hpp"
#include "hqe/literal.hpp"
#include "hqe/rv.hpp"

namespace hqe {

// ---------------------------------------------------------------------------
// RV-sorted terms.

struct RVTerm;
using RVPtr = std::shared_ptr<const RVTerm>;

struct RVTerm {
  /// kRv: rv[d](f); kLit: a constant class; kVar: a bound or free RV variable;
  /// kMul, kNeg, kPow (negative exponent = inverse); kProj: rv_{order -> d}.
  enum class Op : std::uint8_t { kRv, kLit, kVar, kMul, kNeg, kPow, kProj };
  Op op = Op::kLit;
  std::int64_t order = 0;
  ExprPtr field;   // kRv
  RVElem lit;      // kLit
  std::string name;
  std::int64_t exponent = 0;
  std::vector<RVPtr> args;

  static RVPtr rv_of(const ExprPtr& f, std::int64_t d) {
    auto t = std::make_shared<RVTerm>();
    t->op = Op::kRv;
    t->order = d;
    t->field = f;
    return t;
  }
  static RVPtr literal(const RVElem& e) {
    auto t = std::make_shared<RVTerm>();
    t->lit = e;
    t->order = e.order;
    return t;
  }
  static RVPtr var(const std::string& n, std::int64_t d) {
    auto t = std::make_shared<RVTerm>();
    t->op = Op::kVar;
    t->name = n;
    t->order = d;
    return t;
  }
  static RVPtr mul(const RVPtr& a, const RVPtr& b) {
    if (a->order != b->order) throw OrderMismatch("product of RV terms of orders " + std::to_string(a->order) + " and " + std::to_string(b->order));
    auto t = std::make_shared<RVTerm>();
    t->op = Op::kMul;
    t->order = a->order;
    t->args = {a, b};
    return t;
  }
  static RVPtr neg(const RVPtr& a) {
    auto t = std::make_shared<RVTerm>();
    t->op = Op::kNeg;
    t->order = a->order;
    t->args = {a};
    return t;
  }
  static RVPtr pow(const RVPtr& a, std::int64_t k) {
    auto t = std::make_shared<RVTerm>();
    t->op = Op::kPow;
    t->order = a->order;
    t->exponent = k;
    t->args = {a};
    return t;
  }
  static RVPtr proj(const RVPtr& a, std::int64_t d) {
    if (d > a->order) throw OrderViolation("projection to a larger order");
    auto t = std::make_shared<RVTerm>();
    t->op = Op::kProj;
    t->order = d;
    t->args = {a};
    return t;
  }
};

// ---------------------------------------------------------------------------
// Formulas.

struct Formula;
using FormulaPtr = std::shared_ptr<const Formula>;

enum class Sort : std::uint8_t { kField, kRV };

struct Formula {
  enum class Kind : std::uint8_t {
    kTrue, kFalse,
    kPolyZero,  // lhs = rhs over K
    kRVEq,      // terms[0] = terms[1]
    kOplus,     // terms[0..n-2] sum to terms[n-1] at `order`
    kVCmp,      // v(terms[0]) cmp v(terms[1])
    kNot, kAnd, kOr, kImp,
    kExists, kForall,
  };
  Kind kind = Kind::kTrue;
  ExprPtr lhs, rhs;
  std::vector<RVPtr> terms;
  std::string cmp;  // "<", "<=", "=", "!=", ">", ">="
  std::int64_t order = 0;
  std::vector<FormulaPtr> kids;
  std::string var;
  Sort sort = Sort::kField;

  bool is_atom() const { return kind <= Kind::kVCmp; }
  bool is_quantifier() const { return kind == Kind::kExists || kind == Kind::kForall; }
};

namespace fm {

inline FormulaPtr make(Formula f) { return std::make_shared<const Formula>(std::move(f)); }

inline FormulaPtr truth(bool b) {
  Formula f;
  f.kind = b ? Formula::Kind::kTrue : Formula::Kind::kFalse;
  return make(f);
}
inline FormulaPtr poly_zero(const ExprPtr& a, const ExprPtr& b) {
  Formula f;
  f.kind = Formula::Kind::kPolyZero;
  f.lhs = a;
  f.rhs = b;
  return make(f);
}
inline FormulaPtr rv_eq(const RVPtr& a, const RVPtr& b) {
  if (a->order != b->order) throw OrderMismatch("RV equation between orders " + std::to_string(a->order) + " and " + std::to_string(b->order));
  Formula f;
  f.kind = Formula::Kind::kRVEq;
  f.terms = {a, b};
  return make(f);
}
inline FormulaPtr oplus(std::int64_t d, std::vector<RVPtr> ts) {
  if (ts.size() < 2) throw PreconditionViolated("oplus needs a summand and a witness");
  for (const auto& t : ts) {
    if (t->order != d) throw OrderMismatch("oplus[" + std::to_string(d) + "] argument of order " + std::to_string(t->order));
  }
  Formula f;
  f.kind = Formula::Kind::kOplus;
  f.order = d;
  f.terms = std::move(ts);
  return make(f);
}
inline FormulaPtr vcmp(const RVPtr& a, const std::string& cmp, const RVPtr& b) {
  static const std::set<std::string> ok = {"<", "<=", "=", "!=", ">", ">="};
  if (!ok.contains(cmp)) throw PreconditionViolated("unknown comparison " + cmp);
  Formula f;
  f.kind = Formula::Kind::kVCmp;
  f.terms = {a, b};
  f.cmp = cmp;
  return make(f);
}
inline FormulaPtr negate(const FormulaPtr& a) {
  Formula f;
  f.kind = Formula::Kind::kNot;
  f.kids = {a};
  return make(f);
}
inline FormulaPtr binary(Formula::Kind k, const FormulaPtr& a, const FormulaPtr& b) {
  Formula f;
  f.kind = k;
  f.kids = {a, b};
  return make(f);
}
inline FormulaPtr conj(const FormulaPtr& a, const FormulaPtr& b) { return binary(Formula::Kind::kAnd, a, b); }
inline FormulaPtr disj(const FormulaPtr& a, const FormulaPtr& b) { return binary(Formula::Kind::kOr, a, b); }
inline FormulaPtr implies(const FormulaPtr& a, const FormulaPtr& b) { return binary(Formula::Kind::kImp, a, b); }

/// Folds a list with & (true when empty).
inline FormulaPtr all_of(const std::vector<FormulaPtr>& xs) {
  if (xs.empty()) return truth(true);
  FormulaPtr acc = xs.front();
  for (std::size_t i = 1; i < xs.size(); ++i) acc = conj(acc, xs[i]);
  return acc;
}
/// Folds a list with | (false when empty).
inline FormulaPtr any_of(const std::vector<FormulaPtr>& xs) {
  if (xs.empty()) return truth(false);
  FormulaPtr acc = xs.front();
  for (std::size_t i = 1; i < xs.size(); ++i) acc = disj(acc, xs[i]);
  return acc;
}

inline FormulaPtr quant(Formula::Kind k, const std::string& v, Sort s, std::int64_t d, const FormulaPtr& body) {
  Formula f;
  f.kind = k;
  f.var = v;
  f.sort = s;
  f.order = d;
  f.kids = {body};
  return make(f);
}
inline FormulaPtr exists_field(const std::string& v, const FormulaPtr& body) {
  return quant(Formula::Kind::kExists, v, Sort::kField, 0, body);
}
inline FormulaPtr forall_field(const std::string& v, const FormulaPtr& body) {
  return quant(Formula::Kind::kForall, v, Sort::kField, 0, body);
}
inline FormulaPtr exists_rv(const std::string& v, std::int64_t d, const FormulaPtr& body) {
  return quant(Formula::Kind::kExists, v, Sort::kRV, d, body);
}
inline FormulaPtr forall_rv(const std::string& v, std::int64_t d, const FormulaPtr& body) {
  return quant(Formula::Kind::kForall, v, Sort::kRV, d, body);
}

}  // namespace fm

// ---------------------------------------------------------------------------
// Printing.

namespace detail {

inline int rv_prec(const RVPtr& t) {
  switch (t->op) {
    case RVTerm::Op::kMul: return 1;
    case RVTerm::Op::kNeg: return 2;
    case RVTerm::Op::kPow: return 3;
    default: return 4;
  }
}

}  // namespace detail

inline std::string print_rv(const RVPtr& t) {
  auto wrap = [](const RVPtr& c, int need) {
    std::string s = print_rv(c);
    return detail::rv_prec(c) < need ? "(" + s + ")" : s;
  };
  switch (t->op) {
    case RVTerm::Op::kRv: return "rv[" + std::to_string(t->order) + "](" + print_expr(t->field) + ")";
    case RVTerm::Op::kLit: return format(t->lit);
    case RVTerm::Op::kVar: return t->name;
    case RVTerm::Op::kMul: return wrap(t->args[0], 1) + "*" + wrap(t->args[1], 2);
    case RVTerm::Op::kNeg: return "-" + wrap(t->args[0], 2);
    case RVTerm::Op::kPow: return wrap(t->args[0], 4) + "^" + std::to_string(t->exponent);
    case RVTerm::Op::kProj: return "proj[" + std::to_string(t->order) + "](" + print_rv(t->args[0]) + ")";
  }
  return "?";
}

namespace detail {

// -> : 1, | : 2, & : 3, ! : 4, atoms : 5. Quantifiers print bare only at the
// top or as the body of another quantifier.
inline int formula_prec(const FormulaPtr& f) {
  switch (f->kind) {
    case Formula::Kind::kImp: return 1;
    case Formula::Kind::kOr: return 2;
    case Formula::Kind::kAnd: return 3;
    case Formula::Kind::kNot: return 4;
    case Formula::Kind::kExists:
    case Formula::Kind::kForall: return 0;
    default: return 5;
  }
}

}  // namespace detail

inline std::string print_formula(const FormulaPtr& f) {
  using K = Formula::Kind;
  auto wrap = [](const FormulaPtr& c, int need) {
    std::string s = print_formula(c);
    return detail::formula_prec(c) < need ? "(" + s + ")" : s;
  };
  switch (f->kind) {
    case K::kTrue: return "true";
    case K::kFalse: return "false";
    case K::kPolyZero: return print_expr(f->lhs) + " = " + print_expr(f->rhs);
    case K::kRVEq: return print_rv(f->terms[0]) + " = " + print_rv(f->terms[1]);
    case K::kOplus: {
      std::string s = "oplus[" + std::to_string(f->order) + "](";
      for (std::size_t i = 0; i < f->terms.size(); ++i) s += (i ? ", " : "") + print_rv(f->terms[i]);
      return s + ")";
    }
    case K::kVCmp: return "v(" + print_rv(f->terms[0]) + ") " + f->cmp + " v(" + print_rv(f->terms[1]) + ")";
    case K::kNot: return "!" + wrap(f->kids[0], 4);
    // & and | are printed left-nested; -> is right-nested
    case K::kAnd: return wrap(f->kids[0], 3) + " & " + wrap(f->kids[1], 4);
    case K::kOr: return wrap(f->kids[0], 2) + " | " + wrap(f->kids[1], 3);
    case K::kImp: return wrap(f->kids[0], 2) + " -> " + wrap(f->kids[1], 1);
    case K::kExists:
    case K::kForall: {
      std::string s = f->kind == K::kExists ? "EX " : "ALL ";
      s += f->var + ":" + (f->sort == Sort::kField ? std::string("K") : "RV[" + std::to_string(f->order) + "]") + ". ";
      return s + print_formula(f->kids[0]);
    }
  }
  return "?";
}

inline std::ostream& operator<<(std::ostream& os, const FormulaPtr& f) { return os << print_formula(f); }

// ---------------------------------------------------------------------------
// Variables, substitution and structural queries.

struct FreeVars {
  std::set<std::string> field;
  std::map<std::string, std::int64_t> rv;
};

namespace detail {

inline void rv_free(const RVPtr& t, const std::set<std::string>& bound, FreeVars& out) {
  if (t->op == RVTerm::Op::kRv) {
    for (const auto& v : vars_of(t->field)) {
      if (!bound.contains(v)) out.field.insert(v);
    }
  }
  if (t->op == RVTerm::Op::kVar && !bound.contains(t->name)) out.rv[t->name] = t->order;
  for (const auto& a : t->args) rv_free(a, bound, out);
}

inline void formula_free(const FormulaPtr& f, std::set<std::string> bound, FreeVars& out) {
  using K = Formula::Kind;
  if (f->kind == K::kPolyZero) {
    for (const auto& e : {f->lhs, f->rhs}) {
      for (const auto& v : vars_of(e)) {
        if (!bound.contains(v)) out.field.insert(v);
      }
    }
    return;
  }
  for (const auto& t : f->terms) rv_free(t, bound, out);
  if (f->is_quantifier()) bound.insert(f->var);
  for (const auto& k : f->kids) formula_free(k, bound, out);
}

}  // namespace detail

inline FreeVars free_vars(const FormulaPtr& f) {
  FreeVars out;
  detail::formula_free(f, {}, out);
  return out;
}

inline bool mentions_field_var(const FormulaPtr& f, const std::string& x) { return free_vars(f).field.contains(x); }

inline std::size_t field_quantifier_count(const FormulaPtr& f) {
  std::size_t n = f->is_quantifier() && f->sort == Sort::kField ? 1 : 0;
  for (const auto& k : f->kids) n += field_quantifier_count(k);
  return n;
}
inline bool field_quantifier_free(const FormulaPtr& f) { return field_quantifier_count(f) == 0; }

inline ExprPtr subst_expr(const ExprPtr& e, const std::map<std::string, FieldElem>& env) {
  if (e->op == FieldExpr::Op::kVar) {
    auto it = env.find(e->name);
    return it == env.end() ? e : FieldExpr::constant(it->second);
  }
  if (e->args.empty()) return e;
  auto c = std::make_shared<FieldExpr>(*e);
  for (auto& a : c->args) a = subst_expr(a, env);
  return c;
}

inline RVPtr subst_rv(const RVPtr& t, const std::map<std::string, FieldElem>& env) {
  if (t->op == RVTerm::Op::kRv) {
    auto c = std::make_shared<RVTerm>(*t);
    c->field = subst_expr(t->field, env);
    return c;
  }
  if (t->args.empty()) return t;
  auto c = std::make_shared<RVTerm>(*t);
  for (auto& a : c->args) a = subst_rv(a, env);
  return c;
}

/// Replaces free field variables by constants. Bound occurrences are left
/// alone.
inline FormulaPtr substitute(const FormulaPtr& f, std::map<std::string, FieldElem> env) {
  if (env.empty()) return f;
  Formula c = *f;
  if (f->kind == Formula::Kind::kPolyZero) {
    c.lhs = subst_expr(f->lhs, env);
    c.rhs = subst_expr(f->rhs, env);
    return fm::make(c);
  }
  for (auto& t : c.terms) t = subst_rv(t, env);
  if (f->is_quantifier()) env.erase(f->var);
  for (auto& k : c.kids) k = substitute(k, env);
  return fm::make(c);
}

/// Replaces a free RV variable by a term.
inline RVPtr subst_rv_var(const RVPtr& t, const std::string& w, const RVPtr& by) {
  if (t->op == RVTerm::Op::kVar && t->name == w) return by;
  if (t->args.empty()) return t;
  auto c = std::make_shared<RVTerm>(*t);
  for (auto& a : c->args) a = subst_rv_var(a, w, by);
  return c;
}

inline FormulaPtr substitute_rv(const FormulaPtr& f, const std::string& w, const RVPtr& by) {
  Formula c = *f;
  for (auto& t : c.terms) t = subst_rv_var(t, w, by);
  if (f->is_quantifier() && f->var == w) return f;
  for (auto& k : c.kids) k = substitute_rv(k, w, by);
  return fm::make(c);
}

}  // namespace hqe
