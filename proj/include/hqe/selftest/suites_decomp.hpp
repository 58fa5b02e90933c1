#pragma once

#include "hqe/decomp.hpp"
#include "hqe/literal.hpp"
#include "hqe/selftest/grid.hpp"
#include "hqe/selftest/report.hpp"

namespace hqe::selftest {

// ---------------------------------------------------------------------------
// 5. Decomposition.

namespace detail {

inline void check_decomposition(Report& r, const Poly& f, Rng& g) {
  const Field& fld = f.field();
  const std::string tag = " f=" + format(f);
  auto ps = decompose(f, SwissCheese::whole(fld));
  r.check(!ps.empty(), "no pieces" + tag);
  std::vector<FieldElem> centers;
  for (const auto& p : ps) {
    centers.push_back(p.center);
    bool root = f.degree() == 0;
    for (std::int64_t n = 0; n < std::max<std::int64_t>(f.degree(), 1) && !root; ++n) root = derivative(f, n)(p.center).is_zero();
    r.check(root, "center is not a root of a derivative" + tag);
  }
  // the 169-point grid plus a few points near each center; f is evaluated
  // once per point since points near long centers are costly
  auto pts = sample_grid(fld);
  auto units = sample_units(fld);
  for (const auto& a : centers) {
    pts.push_back(a);
    for (std::int64_t j : {-1, 1, 3, 6}) pts.push_back(a + units[static_cast<std::size_t>(j + 1) % units.size()] * FieldElem::monomial(fld, 1, j));
  }
  std::vector<FieldElem> fxs;
  fxs.reserve(pts.size());
  for (const auto& x : pts) fxs.push_back(f(x));

  // partition and valuation bounds
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const FieldElem& x = pts[i];
    const Piece* in = nullptr;
    int hits = 0;
    for (const auto& p : ps) {
      if (p.cheese.contains(x)) {
        ++hits;
        in = &p;
      }
    }
    r.check(hits == 1, "point in " + std::to_string(hits) + " pieces x=" + format(x) + tag);
    if (hits != 1) continue;
    ValQ lo = piece_eval_v(*in, x);
    ValQ vf = val_or_inf(fxs[i]);
    bool ok = lo <= vf && vf <= lo + in->severity_bound;
    if (!fld.is_padic()) ok = ok && vf == lo;
    r.check(ok, "valuation bound fails x=" + format(x) + tag);
  }

  // monotonicity of m under recentering inside a smaller ball
  for (int k = 0; k < 4; ++k) {
    FieldElem alpha = pts[static_cast<std::size_t>(g.uniform(0, pts.size() - 1))];
    SwissCheese S = g.coin() ? SwissCheese::whole(fld) : SwissCheese::of(Ball::closed(alpha, ValQ(g.uniform(-3, 3))));
    FieldElem beta = alpha + g.element(fld, S.outer.is_whole() ? -4 : S.outer.radius, 6);
    if (!S.contains(beta)) continue;
    ValQ delta = (beta - alpha).val();
    SwissCheese T = SwissCheese::of(Ball::closed(beta, delta + ValQ(g.uniform(0, 3))));
    r.check(m_bound(f, beta, T) <= m_bound(f, alpha, S), "m bound increases under recentering" + tag);
  }

  // rv linearization
  auto cells = rv_decompose({f});
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const FieldElem& x = pts[i];
    const FieldElem& fx = fxs[i];
    for (std::int64_t d = 0; d <= 2; ++d) {
      int hits = 0;
      for (const auto& c : cells) {
        if (!c.cheese.contains(x)) continue;
        ++hits;
        RVElem want = fx.is_zero() ? RVElem::infinity(fld, d) : rv(fx, d);
        r.check(piece_eval_rv(c.pieces[0], x, d) == want, "rv linearization differs x=" + format(x) + tag);
      }
      r.check(hits == 1, "point in " + std::to_string(hits) + " rv cells" + tag);
    }
  }
}

}  // namespace detail

inline Report suite_decomposition(std::uint64_t seed) {
  return run_timed(5, "Decomposition", 30, [seed](Report& r) {
    Rng g(seed);
    int retried = 0;
    for (const auto& f : {Field::laurent(64), Field::padic(2, 64), Field::padic(3, 64)}) {
      auto t0 = std::chrono::steady_clock::now();
      int n = f.is_padic() ? 50 : 100;  // 100 per backend, split over two primes
      for (int i = 0; i < n; ++i) {
        std::int64_t d = g.uniform(1, 5);
        Poly p = g.coin() ? g.poly(f, d) : g.poly_with_roots(f, d);
        // linearizing at order v(q) can need more digits than the working
        // precision; such polynomials are redone at doubled precision
        for (std::int64_t prec = f.precision;; prec *= 2) {
          Report part;
          try {
            Field fp = f.is_padic() ? Field::padic(f.p, prec) : Field::laurent(prec);
            detail::check_decomposition(part, prec == f.precision ? p : rebase(p, fp), g);
          } catch (const PrecisionExhausted&) {
            if (prec < 4 * f.precision) {
              ++retried;
              continue;
            }
            throw;
          }
          r.cases += part.cases;
          r.failures += part.failures;
          for (const auto& n : part.notes) {
            if (r.notes.size() < 8) r.notes.push_back(n);
          }
          break;
        }
      }
      double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      r.note(f.name() + ": " + std::to_string(n) + " polynomials, " + std::to_string(secs).substr(0, 5) + " s");
    }
    r.note("polynomials redone at higher precision: " + std::to_string(retried));
  });
}

}  // namespace hqe::selftest
