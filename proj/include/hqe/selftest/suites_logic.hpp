#pragma once

#include <algorithm>
#include <array>
#include <functional>
#include <optional>

#include "hqe/literal.hpp"
#include "hqe/logic/parser.hpp"
#include "hqe/logic/qe.hpp"
#include "hqe/selftest/grid.hpp"
#include "hqe/selftest/report.hpp"

namespace hqe::selftest {

// ---------------------------------------------------------------------------
// 6. Linear elimination.

namespace detail {

inline bool satisfies(const LinearConstraint& c, const FieldElem& x) {
  return rv_or_inf(c.z, c.delta) == rv_or_inf(c.a * x - c.b, c.delta);
}

/// The solutions of one constraint form the ball (b + z(1 + m_delta)) / a, or
/// the point b / a when z = 0. Ultrametric balls meet iff the smallest one has
/// its center in all others, so it suffices to try every center.
inline bool linear_oracle(const std::vector<LinearConstraint>& cs) {
  if (cs.empty()) return true;
  for (const auto& c : cs) {
    FieldElem x = (c.b + c.z) / c.a;
    bool all = true;
    for (const auto& d : cs) all = all && satisfies(d, x);
    if (all) return true;
  }
  return false;
}

inline LinearConstraint random_constraint(const Field& f, Rng& g, const FieldElem& x0) {
  LinearConstraint c;
  c.delta = g.uniform(0, 4);
  // monomial a keeps (b + z) / a exact in both backends
  mpq_class ca(g.uniform(1, 5), g.uniform(1, 3));
  c.a = FieldElem::monomial(f, g.coin() ? ca : mpq_class(-ca), g.uniform(-2, 2));
  c.b = g.element(f, -3, 3);
  switch (g.uniform(0, 9)) {
    case 0:  // x pinned to a point
      c.z = FieldElem::zero(f);
      if (g.coin()) c.b = c.a * x0;
      break;
    case 1:
    case 2:
    case 3:
      c.z = g.element(f, -3, 3);
      break;
    default: {
      // consistent with x0 up to a perturbation of random depth
      FieldElem w = c.a * x0 - c.b;
      if (w.is_zero()) w = g.element(f, -3, 3);
      c.z = w * (FieldElem::one(f) + g.element(f, g.uniform(0, 6), 7));
    }
  }
  return c;
}

}  // namespace detail

inline Report suite_linear(std::uint64_t seed) {
  return run_timed(6, "Linear elimination", 10, [seed](Report& r) {
    Rng g(seed);
    for (const auto& f : {Field::laurent(64), Field::padic(3, 64)}) {
      std::array<int, 5> seen{};
      int truths = 0;
      for (int it = 0; it < 500; ++it) {
        FieldElem x0 = g.element(f, -2, 2);
        std::vector<LinearConstraint> cs;
        for (std::int64_t k = g.uniform(1, 4); k > 0; --k) cs.push_back(detail::random_constraint(f, g, x0));
        LinearDecision dec = eliminate_linear_exists_detail(cs);
        for (auto c : dec.cases) ++seen[static_cast<std::size_t>(c)];
        bool want = detail::linear_oracle(cs);
        truths += want;
        std::string desc;
        for (const auto& c : cs) {
          desc += " [rv" + std::to_string(c.delta) + "(" + format(c.z) + ") = rv(" + format(c.a) + " x - (" + format(c.b) + "))]";
        }
        r.check(dec.holds == want, f.name() + ": elimination says " + (dec.holds ? "true" : "false") + desc);
      }
      const char* names[] = {"point", "case 1", "case 2", "case 3", "case 4"};
      std::string line = f.name() + ": " + std::to_string(truths) + "/500 satisfiable; pairs by case:";
      for (std::size_t k = 0; k < seen.size(); ++k) {
        line += std::string(" ") + names[k] + " " + std::to_string(seen[k]);
        r.check(seen[k] > 0, f.name() + ": " + names[k] + " never exercised");
      }
      r.note(line);
    }
  });
}

// ---------------------------------------------------------------------------
// 7. Quantifier elimination end to end.

namespace detail {

inline bool has_field_quantifier(const FormulaPtr& phi) {
  if (phi->is_quantifier() && phi->sort == Sort::kField) return true;
  for (const auto& k : phi->kids) {
    if (has_field_quantifier(k)) return true;
  }
  return false;
}

inline std::string lit(const FieldElem& x) { return "(" + format(x) + ")"; }

/// With c_k = g^(k)(a)/k!, the first Newton polygon segment stands alone when
/// v0 - v(c_1) > (v(c_1) - v(c_k)) / (k - 1) for all k >= 2; then exactly one
/// root lies at v(y - a) = v0 - v(c_1). v0 is v(g(a)) or a lower bound.
inline bool isolated_root_near(const Poly& g, const FieldElem& a, const ValQ& v0) {
  const Field& f = g.field();
  FieldElem c1 = derivative(g)(a);
  if (c1.is_zero()) return false;
  mpz_class fact = 1;
  for (std::int64_t k = 2; k <= g.degree(); ++k) {
    fact *= k;
    FieldElem ck = derivative(g, k)(a) / FieldElem::from_rational(f, mpq_class(fact));
    if (ck.is_zero()) continue;
    if (!((k - 1) * (v0 - c1.val()) > c1.val() - ck.val())) return false;
  }
  return true;
}

/// Roots of g reached from the candidates: exact hits, and Newton iteration
/// from approximants that isolate a root.
inline std::vector<FieldElem> root_search(const Poly& g, const std::vector<FieldElem>& cands) {
  const Field& f = g.field();
  Poly dg = derivative(g);
  std::vector<FieldElem> roots;
  for (FieldElem a : cands) {
    FieldElem ga = g(a);
    if (ga.is_exact_zero()) {
      roots.push_back(a);
      continue;
    }
    if (!isolated_root_near(g, a, ga.val())) continue;
    a = a.truncated(f.precision);
    for (int it = 0; it < 16 && !ga.is_zero(); ++it) {
      a = a - ga / dg(a);
      ga = g(a);
    }
    if (ga.is_zero() && isolated_root_near(g, a, ga.abs_precision())) roots.push_back(a);
  }
  return roots;
}

/// Grid points, their negatives and 0.
inline std::vector<FieldElem> root_candidates(const Field& f) {
  std::vector<FieldElem> out = {FieldElem::zero(f)};
  for (const auto& x : sample_grid(f)) {
    out.push_back(x);
    out.push_back(-x);
  }
  return out;
}

/// Oracle for EX y. g(y) = 0 & cond(y).
inline bool exists_root(const Poly& g, const FormulaPtr& cond, const Field& f) {
  for (const auto& y : root_search(g, root_candidates(f))) {
    Env e;
    e.field["y"] = y;
    if (!cond || evaluate(cond, f, e)) return true;
  }
  return false;
}

struct Sentence {
  Field field;
  Poly g;
  std::string text;  // EX y:K. ...
  std::string cond;  // empty or a condition on y
};

/// g = c * (root factors) * (rootless factor): roots are grid points or
/// square roots of grid points times 1 + O(pi), at distinct values, so the
/// oracle reaches all of them.
inline Sentence random_sentence(const Field& f, Rng& g) {
  auto units = sample_units(f);
  auto unit = [&] { return units[static_cast<std::size_t>(g.uniform(0, units.size() - 1))]; };
  auto pik = [&](std::int64_t k) { return FieldElem::monomial(f, 1, k); };
  Poly Y = Poly::monomial(f, 1);
  Poly P = Poly::constant(FieldElem::from_rational(f, mpq_class(g.uniform(1, 4), g.uniform(1, 2))));
  std::vector<std::int64_t> ks = {-3, -2, -1, 0, 1, 2, 3};
  std::shuffle(ks.begin(), ks.end(), g.eng);
  std::size_t used = 0;
  std::vector<FieldElem> anchors;
  std::int64_t deg = 0;
  for (std::int64_t n = g.uniform(0, 2); n > 0; --n) {
    FieldElem s = unit() * pik(ks[used++]);
    anchors.push_back(s);
    if (g.coin() || deg >= 3) {
      P = P * (Y - Poly::constant(s));
      deg += 1;
    } else {
      FieldElem u = s * s * (FieldElem::one(f) + unit() * pik(g.uniform(1, 3)));
      P = P * (Y * Y - Poly::constant(u));
      deg += 2;
    }
  }
  if (deg <= 2 && (deg == 0 || g.coin())) {
    // no roots: odd value, or a non-square residue
    std::int64_t k = ks[used++];
    FieldElem c = g.coin() ? pik(2 * k + 1) : FieldElem::from_rational(f, f.is_padic() ? 2 : (g.coin() ? 2 : -1)) * pik(2 * k);
    P = P * (Y * Y - Poly::constant(c));
  }
  if (P.degree() == 0) P = P * (Y - Poly::constant(unit()));
  std::string poly_text;
  for (std::int64_t i = P.degree(); i >= 0; --i) {
    const FieldElem& c = P.coeffs()[static_cast<std::size_t>(i)];
    if (c.is_zero()) continue;
    if (!poly_text.empty()) poly_text += " + ";
    poly_text += lit(c) + (i > 0 ? "*y^" + std::to_string(i) : "");
  }
  Sentence out{f, P, "", ""};
  if (g.coin()) {
    // an rv side condition near one of the roots or a random point
    FieldElem e = anchors.empty() || g.coin() ? unit() * pik(g.uniform(-3, 3)) : anchors[static_cast<std::size_t>(g.uniform(0, anchors.size() - 1))];
    std::int64_t d = g.uniform(0, 2);
    switch (g.uniform(0, 3)) {
      case 0: out.cond = "v(rv[0](y)) >= v(rv[0](" + format(e) + "))"; break;
      case 1: out.cond = "rv[" + std::to_string(d) + "](y) = rv[" + std::to_string(d) + "](" + format(e) + ")"; break;
      case 2: out.cond = "!(rv[0](y - " + lit(e) + ") = rv[0](" + format(e * pik(1)) + "))"; break;
      default: out.cond = "v(rv[0](y - " + lit(e) + ")) > v(rv[0](" + format(e) + "))"; break;
    }
  }
  out.text = "EX y:K. " + (out.cond.empty() ? poly_text + " = 0" : "(" + poly_text + " = 0 & " + out.cond + ")");
  return out;
}

}  // namespace detail

inline Report suite_qe(std::uint64_t seed) {
  return run_timed(7, "QE end to end", 30, [seed](Report& r) {
    Rng g(seed);
    Field L = Field::laurent(64), P3 = Field::padic(3, 64), P2 = Field::padic(2, 64);
    auto run = [&](const detail::Sentence& s, std::optional<bool> expected) {
      FormulaPtr sigma = parse_formula(s.text, s.field);
      FormulaPtr out = qe(sigma, s.field);
      r.check(!detail::has_field_quantifier(out), "field quantifier left in qe output of " + s.text);
      bool got = evaluate(out, s.field);
      r.check(got == decide(sigma, s.field), "decide differs from evaluating qe output: " + s.text);
      FormulaPtr cond = s.cond.empty() ? nullptr : parse_formula(s.cond, s.field);
      bool want = detail::exists_root(s.g, cond, s.field);
      r.check(got == want, s.field.name() + ": qe says " + (got ? "TRUE" : "FALSE") + " for " + s.text);
      if (expected) r.check(got == *expected, "wrong value for " + s.text);
      return got;
    };
    Poly Y = Poly::monomial(L, 1);
    auto square = [](const Field& f, const FieldElem& c) {
      Poly y = Poly::monomial(f, 1);
      return y * y - Poly::constant(c);
    };
    auto t = FieldElem::uniformizer(L);
    auto q = [](const Field& f, long n) { return FieldElem::from_rational(f, n); };
    run({L, square(L, t * t), "EX y:K. y^2 = t^2", ""}, true);
    run({L, square(L, q(L, 2) * t * t), "EX y:K. y^2 = 2*t^2", ""}, false);
    run({P2, square(P2, q(P2, 17)), "EX y:K. y^2 = 17", ""}, true);
    run({P2, square(P2, q(P2, 3)), "EX y:K. y^2 = 3", ""}, false);
    int counts[2] = {0, 0};
    for (int i = 0; i < 46; ++i) ++counts[run(detail::random_sentence(i % 2 ? P3 : L, g), std::nullopt)];
    r.note("random sentences: " + std::to_string(counts[1]) + " true, " + std::to_string(counts[0]) + " false");
  });
}

// ---------------------------------------------------------------------------
// 8. Pullback normal form.

namespace detail {

/// A random quantifier-free formula in x: zero sets, rv classes, values and
/// sums of polynomials whose roots are grid points.
inline std::string random_one_variable(const Field& f, Rng& g) {
  auto units = sample_units(f);
  auto grid_point = [&] {
    return units[static_cast<std::size_t>(g.uniform(0, units.size() - 1))] * FieldElem::monomial(f, 1, g.uniform(-3, 3));
  };
  auto poly = [&] {
    std::string p = "(x - " + lit(grid_point()) + ")";
    if (g.coin()) p += "*(x - " + lit(grid_point()) + ")";
    if (g.coin()) p = lit(grid_point()) + "*" + p;
    return p;
  };
  std::int64_t dmax = f.is_padic() ? 1 : 2;
  auto atom = [&]() -> std::string {
    std::string d = std::to_string(g.uniform(0, dmax));
    switch (g.uniform(0, 4)) {
      case 0: return poly() + " = 0";
      case 1: return "rv[" + d + "](" + poly() + ") = rv[" + d + "](" + format(grid_point()) + ")";
      case 2: {
        const char* ops[] = {"<", "<=", "=", ">", ">=", "!="};
        return "v(rv[0](" + poly() + ")) " + ops[g.uniform(0, 5)] + " v(rv[0](" + format(grid_point()) + "))";
      }
      case 3: return "oplus[0](rv[0](x), rv[0](" + format(-grid_point()) + "), rv[0](" + format(grid_point()) + "))";
      default: return "rv[" + d + "](x - " + lit(grid_point()) + ") = rv[" + d + "](" + format(grid_point()) + ")";
    }
  };
  std::function<std::string(int)> gen = [&](int depth) -> std::string {
    if (depth == 0 || g.uniform(0, 2) == 0) return atom();
    switch (g.uniform(0, 2)) {
      case 0: return "!(" + gen(depth - 1) + ")";
      case 1: return "(" + gen(depth - 1) + ") & (" + gen(depth - 1) + ")";
      default: return "(" + gen(depth - 1) + ") | (" + gen(depth - 1) + ")";
    }
  };
  return gen(2);
}

}  // namespace detail

inline Report suite_normal_form(std::uint64_t seed) {
  return run_timed(8, "Normal form", 15, [seed](Report& r) {
    Rng g(seed);
    Field L = Field::laurent(64), P3 = Field::padic(3, 64);
    std::size_t members = 0, points = 0;
    for (int i = 0; i < 30; ++i) {
      const Field& f = i % 3 == 2 ? P3 : L;
      std::string text = detail::random_one_variable(f, g);
      FormulaPtr phi = parse_formula(text, f);
      NormalForm nf = normal_form(phi, "x", f);
      if (!f.is_padic()) {
        bool zero = std::all_of(nf.orders.begin(), nf.orders.end(), [](std::int64_t d) { return d == 0; });
        r.check(zero, "laurent-q normal form with a positive order: " + text);
      }
      auto pts = sample_grid(f);
      std::shuffle(pts.begin(), pts.end(), g.eng);
      pts.resize(100);
      for (const auto& x : pts) {
        Env e;
        e.field["x"] = x;
        bool direct = evaluate(phi, f, e);
        members += direct;
        ++points;
        r.check(nf.member(x) == direct, f.name() + ": membership differs at x = " + format(x) + " for " + text);
      }
    }
    r.note(std::to_string(members) + " of " + std::to_string(points) + " grid points satisfy their formula");
  });
}

}  // namespace hqe::selftest
