#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "hqe/logic/formula.hpp"

namespace hqe {

struct Env {
  std::map<std::string, FieldElem> field;
  std::map<std::string, RVElem> rv;
};

/// Decides a field-quantified subformula under an environment. The evaluator
/// itself never searches K; the engine supplies this hook.
using FieldQuantifierHook = std::function<bool(const FormulaPtr&, const Env&)>;

/// rv of a field value. A value that vanishes to its known precision counts
/// as 0.
inline RVElem rv_or_inf(const FieldElem& x, std::int64_t d) {
  if (x.is_zero()) return RVElem::infinity(x.field(), d);
  return rv(x, d);
}

inline RVElem eval_rv(const RVPtr& t, const Field& f, const Env& env) {
  switch (t->op) {
    case RVTerm::Op::kRv: return rv_or_inf(eval_expr(t->field, f, env.field), t->order);
    case RVTerm::Op::kLit: return t->lit;
    case RVTerm::Op::kVar: {
      auto it = env.rv.find(t->name);
      if (it == env.rv.end()) throw PreconditionViolated("unbound RV variable " + t->name);
      return it->second;
    }
    case RVTerm::Op::kMul: return rv_mul(eval_rv(t->args[0], f, env), eval_rv(t->args[1], f, env));
    case RVTerm::Op::kNeg: return rv_neg(eval_rv(t->args[0], f, env));
    case RVTerm::Op::kPow: return rv_pow(eval_rv(t->args[0], f, env), t->exponent);
    case RVTerm::Op::kProj: return rv_project(eval_rv(t->args[0], f, env), t->order);
  }
  throw std::logic_error("eval_rv: unknown node");
}

inline bool compare_values(const ValQ& a, const std::string& cmp, const ValQ& b) {
  if (cmp == "<") return a < b;
  if (cmp == "<=") return a <= b;
  if (cmp == "=") return a == b;
  if (cmp == "!=") return a != b;
  if (cmp == ">") return a > b;
  if (cmp == ">=") return a >= b;
  throw PreconditionViolated("unknown comparison " + cmp);
}

namespace detail {

inline void flatten_and(const FormulaPtr& f, std::vector<FormulaPtr>& out) {
  if (f->kind == Formula::Kind::kAnd) {
    flatten_and(f->kids[0], out);
    flatten_and(f->kids[1], out);
  } else {
    out.push_back(f);
  }
}

inline bool rv_mentions(const RVPtr& t, const std::string& w) {
  if (t->op == RVTerm::Op::kVar && t->name == w) return true;
  for (const auto& a : t->args) {
    if (rv_mentions(a, w)) return true;
  }
  return false;
}

inline bool formula_mentions_rv(const FormulaPtr& f, const std::string& w) { return free_vars(f).rv.contains(w); }

inline bool is_var(const RVPtr& t, const std::string& w) { return t->op == RVTerm::Op::kVar && t->name == w; }

/// Summands of an oplus atom whose witness is the variable w, or nothing.
inline const std::vector<RVPtr>* oplus_into(const FormulaPtr& f, const std::string& w) {
  if (f->kind != Formula::Kind::kOplus || !is_var(f->terms.back(), w)) return nullptr;
  for (std::size_t i = 0; i + 1 < f->terms.size(); ++i) {
    if (rv_mentions(f->terms[i], w)) return nullptr;
  }
  return &f->terms;
}

struct SumData {
  ValQ min = ValQ::inf();
  FieldElem sum;
};

inline SumData sum_data(const std::vector<RVPtr>& terms, const Field& f, const Env& env) {
  SumData s{ValQ::inf(), FieldElem::zero(f)};
  for (std::size_t i = 0; i + 1 < terms.size(); ++i) {
    RVElem x = eval_rv(terms[i], f, env);
    s.min = min(s.min, x.val());
    s.sum += x.representative();
  }
  return s;
}

}  // namespace detail

/// True iff two witnesses of different value exist for the sum, i.e. the
/// severity exceeds the order.
inline bool ambiguous_sum(const std::vector<RVPtr>& terms, std::int64_t d, const Field& f, const Env& env) {
  detail::SumData s = detail::sum_data(terms, f, env);
  if (s.min.is_pos_inf()) return false;
  return val_or_inf(s.sum) > s.min + ValQ(d);
}

/// Decides "EX w:RV[d]. oplus[d](xs, w) & proj[e](w) = r": some witness w of
/// the sum projects to r.
inline bool witness_projects_to(const std::vector<RVPtr>& terms, std::int64_t d, const RVElem& r,
                                const Field& f, const Env& env) {
  detail::SumData s = detail::sum_data(terms, f, env);
  if (s.min.is_pos_inf()) return r.is_inf();
  if (r.is_inf()) return val_or_inf(s.sum) > s.min + ValQ(d);
  ValQ dv = val_or_inf(s.sum - r.representative());
  return dv > min(s.min + ValQ(d), r.val() + ValQ(r.order));
}

namespace detail {

inline bool eval_impl(const FormulaPtr& phi, const Field& f, const Env& env, const FieldQuantifierHook& hook);

/// "EX w1 w2:RV[d]. v(w1) != v(w2) & oplus[d](S, w1) & oplus[d](S, w2)".
inline std::optional<bool> try_two_witnesses(const FormulaPtr& q, const Field& f, const Env& env) {
  if (q->kind != Formula::Kind::kExists || q->sort != Sort::kRV) return std::nullopt;
  const FormulaPtr& inner = q->kids[0];
  if (inner->kind != Formula::Kind::kExists || inner->sort != Sort::kRV || inner->order != q->order) return std::nullopt;
  const std::string& w1 = q->var;
  const std::string& w2 = inner->var;
  if (w1 == w2) return std::nullopt;
  std::vector<FormulaPtr> cs;
  flatten_and(inner->kids[0], cs);
  if (cs.size() != 3) return std::nullopt;
  const std::vector<RVPtr>* s1 = nullptr;
  const std::vector<RVPtr>* s2 = nullptr;
  bool neq = false;
  for (const auto& c : cs) {
    if (c->kind == Formula::Kind::kVCmp && c->cmp == "!=" &&
        ((is_var(c->terms[0], w1) && is_var(c->terms[1], w2)) || (is_var(c->terms[0], w2) && is_var(c->terms[1], w1)))) {
      neq = true;
    } else if (auto* a = oplus_into(c, w1); a && !s1) {
      s1 = a;
    } else if (auto* b = oplus_into(c, w2); b && !s2) {
      s2 = b;
    } else {
      return std::nullopt;
    }
  }
  if (!neq || !s1 || !s2 || s1->size() != s2->size()) return std::nullopt;
  for (std::size_t i = 0; i + 1 < s1->size(); ++i) {
    if (rv_mentions((*s1)[i], w2) || print_rv((*s1)[i]) != print_rv((*s2)[i])) return std::nullopt;
  }
  return ambiguous_sum(*s1, q->order, f, env);
}

/// "EX w:RV[d]. oplus[d](S, w) & rest(w)".
inline std::optional<bool> try_sum_witness(const FormulaPtr& q, const Field& f, const Env& env,
                                           const FieldQuantifierHook& hook) {
  if (q->kind != Formula::Kind::kExists || q->sort != Sort::kRV) return std::nullopt;
  const std::string& w = q->var;
  std::vector<FormulaPtr> cs;
  flatten_and(q->kids[0], cs);
  const std::vector<RVPtr>* sum = nullptr;
  std::vector<FormulaPtr> rest;
  for (const auto& c : cs) {
    if (auto* s = oplus_into(c, w); s && !sum) {
      sum = s;
    } else {
      rest.push_back(c);
    }
  }
  if (!sum) return std::nullopt;
  // a single projection condition on w is decided without choosing a witness
  if (rest.size() == 1 && rest[0]->kind == Formula::Kind::kRVEq) {
    for (int side = 0; side < 2; ++side) {
      const RVPtr& a = rest[0]->terms[side];
      const RVPtr& b = rest[0]->terms[1 - side];
      if (rv_mentions(b, w)) continue;
      if (is_var(a, w) || (a->op == RVTerm::Op::kProj && is_var(a->args[0], w))) {
        return witness_projects_to(*sum, q->order, eval_rv(b, f, env), f, env);
      }
    }
  }
  std::vector<RVElem> xs;
  for (std::size_t i = 0; i + 1 < sum->size(); ++i) xs.push_back(eval_rv((*sum)[i], f, env));
  SumAnalysis a = rv_sum_analyze(xs);
  if (!a.well_defined) return std::nullopt;
  Env e2 = env;
  e2.rv[w] = *a.result;
  for (const auto& c : rest) {
    if (!eval_impl(c, f, e2, hook)) return false;
  }
  return true;
}

/// "ALL u:RV[d]. (proj[e](u) = r -> B)" where B's truth does not depend on
/// the digits of u beyond order e. B must be a two-witness pattern in which
/// u is a summand, and the digits of u below order e must lie below the
/// pattern's threshold.
inline std::optional<bool> try_lift_pattern(const FormulaPtr& q, const Field& f, const Env& env,
                                            const FieldQuantifierHook& hook) {
  if (q->kind != Formula::Kind::kForall || q->sort != Sort::kRV) return std::nullopt;
  const FormulaPtr& body = q->kids[0];
  if (body->kind != Formula::Kind::kImp) return std::nullopt;
  const FormulaPtr& cond = body->kids[0];
  const FormulaPtr& then = body->kids[1];
  const std::string& u = q->var;
  if (cond->kind != Formula::Kind::kRVEq) return std::nullopt;
  const RVPtr& lhs = cond->terms[0];
  const RVPtr& r = cond->terms[1];
  if (lhs->op != RVTerm::Op::kProj || !is_var(lhs->args[0], u) || rv_mentions(r, u)) return std::nullopt;
  RVElem target = eval_rv(r, f, env);
  Env e2 = env;
  if (target.is_inf()) {
    e2.rv[u] = RVElem::infinity(f, q->order);
    return eval_impl(then, f, e2, hook);
  }
  e2.rv[u] = rv(target.representative(), q->order);
  if (!formula_mentions_rv(then, u)) return eval_impl(then, f, e2, hook);
  // then must be the two-witness pattern with u among the summands
  if (then->kind != Formula::Kind::kExists || then->kids[0]->kind != Formula::Kind::kExists) return std::nullopt;
  std::vector<FormulaPtr> cs;
  flatten_and(then->kids[0]->kids[0], cs);
  const std::vector<RVPtr>* sum = nullptr;
  for (const auto& c : cs) {
    if (c->kind == Formula::Kind::kOplus) sum = &c->terms;
  }
  if (!sum) return std::nullopt;
  detail::SumData s = sum_data(*sum, f, e2);
  if (target.val() + ValQ(target.order) < s.min + ValQ(then->order)) return std::nullopt;
  return try_two_witnesses(then, f, e2);
}

inline bool eval_impl(const FormulaPtr& phi, const Field& f, const Env& env, const FieldQuantifierHook& hook) {
  using K = Formula::Kind;
  switch (phi->kind) {
    case K::kTrue: return true;
    case K::kFalse: return false;
    case K::kPolyZero: {
      FieldElem d = eval_expr(phi->lhs, f, env.field) - eval_expr(phi->rhs, f, env.field);
      return d.is_zero();
    }
    case K::kRVEq: return eval_rv(phi->terms[0], f, env) == eval_rv(phi->terms[1], f, env);
    case K::kOplus: {
      std::vector<RVElem> xs;
      for (std::size_t i = 0; i + 1 < phi->terms.size(); ++i) xs.push_back(eval_rv(phi->terms[i], f, env));
      RVElem w = eval_rv(phi->terms.back(), f, env);
      return oplus_holds(xs, w);
    }
    case K::kVCmp:
      return compare_values(eval_rv(phi->terms[0], f, env).val(), phi->cmp, eval_rv(phi->terms[1], f, env).val());
    case K::kNot: return !eval_impl(phi->kids[0], f, env, hook);
    case K::kAnd: return eval_impl(phi->kids[0], f, env, hook) && eval_impl(phi->kids[1], f, env, hook);
    case K::kOr: return eval_impl(phi->kids[0], f, env, hook) || eval_impl(phi->kids[1], f, env, hook);
    case K::kImp: return !eval_impl(phi->kids[0], f, env, hook) || eval_impl(phi->kids[1], f, env, hook);
    case K::kExists:
    case K::kForall: {
      if (phi->sort == Sort::kField) {
        if (!hook) throw NonEffectiveQuantifier("field quantifier over " + phi->var + " needs the elimination engine");
        return hook(phi, env);
      }
      if (!formula_mentions_rv(phi->kids[0], phi->var)) return eval_impl(phi->kids[0], f, env, hook);
      if (auto r = try_two_witnesses(phi, f, env)) return *r;
      if (auto r = try_sum_witness(phi, f, env, hook)) return *r;
      if (auto r = try_lift_pattern(phi, f, env, hook)) return *r;
      throw NonEffectiveQuantifier("no decision pattern for RV quantifier over " + phi->var + " in " + print_formula(phi));
    }
  }
  throw std::logic_error("evaluate: unknown node");
}

}  // namespace detail

/// Truth value of phi under env. Field quantifiers go through hook.
inline bool evaluate(const FormulaPtr& phi, const Field& f, const Env& env = {}, const FieldQuantifierHook& hook = {}) {
  return detail::eval_impl(phi, f, env, hook);
}

}  // namespace hqe
