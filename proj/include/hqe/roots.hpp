#pragma once

#include <algorithm>
#include <vector>

#include "hqe/errors.hpp"
#include "hqe/field.hpp"
#include "hqe/hensel.hpp"
#include "hqe/poly.hpp"
#include "hqe/residue.hpp"

namespace hqe {

namespace detail {

/// pi^k as an exact element.
inline FieldElem pi_pow(const Field& f, std::int64_t k) { return FieldElem::monomial(f, 1, k); }

/// Residue digit of x as an element of K (0 when v(x) > 0).
inline FieldElem residue_lift(const Field& f, const mpq_class& r) { return FieldElem::from_rational(f, r); }

/// Lower convex hull of the Newton polygon; returns vertex indices.
inline std::vector<std::size_t> newton_hull(const std::vector<std::int64_t>& xs, const std::vector<std::int64_t>& ys) {
  std::vector<std::size_t> h;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    while (h.size() >= 2) {
      std::size_t a = h[h.size() - 2], b = h.back();
      // drop b unless it lies strictly below segment a-i
      __int128 cross = static_cast<__int128>(xs[b] - xs[a]) * (ys[i] - ys[a]) -
                       static_cast<__int128>(ys[b] - ys[a]) * (xs[i] - xs[a]);
      if (cross <= 0) {
        h.pop_back();
      } else {
        break;
      }
    }
    h.push_back(i);
  }
  return h;
}

inline void roots_above(const Poly& g, const ValQ& lower, const FieldElem& shift, int depth, std::vector<FieldElem>& out) {
  const Field& f = g.field();
  if (g.degree() <= 0) return;
  if (depth > f.precision) throw PrecisionExhausted("root finder: clustered roots not separated at this precision");
  std::vector<FieldElem> c = g.coeffs();
  std::size_t low = 0;
  while (low < c.size() && c[low].is_zero()) ++low;
  if (low > 0) out.push_back(shift);
  std::vector<std::int64_t> xs, ys;
  for (std::size_t k = low; k < c.size(); ++k) {
    if (c[k].is_zero()) continue;
    xs.push_back(static_cast<std::int64_t>(k));
    ys.push_back(c[k].val().as_int());
  }
  auto hull = newton_hull(xs, ys);
  for (std::size_t s = 0; s + 1 < hull.size(); ++s) {
    std::int64_t i = xs[hull[s]], j = xs[hull[s + 1]];
    std::int64_t vi = ys[hull[s]], vj = ys[hull[s + 1]];
    if ((vi - vj) % (j - i) != 0) continue;
    std::int64_t r = (vi - vj) / (j - i);
    if (!(ValQ(r) > lower)) continue;
    // h(y) = g(pi^r y) / pi^(vi + i r), over O
    std::int64_t base = vi + i * r;
    std::vector<FieldElem> hc;
    std::vector<mpq_class> res(static_cast<std::size_t>(j - i + 1), 0);
    for (std::size_t k = 0; k < c.size(); ++k) {
      FieldElem hk = c[k] * pi_pow(f, static_cast<std::int64_t>(k) * r - base);
      hc.push_back(hk);
      std::int64_t kk = static_cast<std::int64_t>(k);
      if (kk >= i && kk <= j && !hk.is_zero() && hk.val() == ValQ(0)) {
        res[static_cast<std::size_t>(kk - i)] = hk.leading_digit();
      }
    }
    Poly h(f, hc);
    for (const mpq_class& ub : residue_rational_roots(f, res)) {
      if (ub == 0) continue;
      FieldElem u0 = residue_lift(f, ub);
      if (residue_root_multiplicity(f, res, ub) == 1) {
        LiftCertificate cert = newton_lift(h, u0, 0);
        out.push_back(shift + pi_pow(f, r) * cert.root);
      } else {
        FieldElem center = pi_pow(f, r) * u0;
        Poly g2 = from_shifted(f, taylor_shift(g, center), FieldElem::zero(f));
        roots_above(g2, ValQ(r), shift + center, depth + 1, out);
      }
    }
  }
}

}  // namespace detail

/// Roots of f in K, each once, to the field precision. Roots are found by the
/// Newton polygon, residue-field roots and Hensel lifting; clusters are
/// separated by recentering.
inline std::vector<FieldElem> find_roots(const Poly& f) {
  if (f.is_zero()) throw PreconditionViolated("find_roots: zero polynomial");
  Poly g = f;
  if (f.degree() >= 2) {
    try {
      g = squarefree_part(f);
    } catch (const PrecisionExhausted&) {
      g = f;
    }
  }
  std::vector<FieldElem> out;
  detail::roots_above(g, ValQ::neg_inf(), FieldElem::zero(f.field()), 0, out);
  for (auto& r : out) r = snap_root(g, r);
  return out;
}

}  // namespace hqe
