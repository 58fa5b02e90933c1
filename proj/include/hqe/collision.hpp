#pragma once

#include <vector>

#include "hqe/errors.hpp"
#include "hqe/hensel.hpp"
#include "hqe/residue.hpp"
#include "hqe/roots.hpp"
#include "hqe/rv.hpp"

namespace hqe {

struct CollisionClass {
  RVElem cls;        // rv_0(x - alpha) shared by the class
  FieldElem lambda;  // a root of f^(n) in the class
  std::int64_t n = 0;
};

/// The rv_0-classes on the annulus v(x - alpha) = rho where f can have a
/// collision of severity above `threshold`, each with a derivative root.
/// Complete when threshold >= 2^m v(m!), m the top index minimal on the annulus.
inline std::vector<CollisionClass> collision_classes(const Poly& f, const FieldElem& alpha, std::int64_t rho,
                                                     const ValQ& threshold) {
  const Field& fld = f.field();
  std::vector<FieldElem> a = taylor_shift(f, alpha);
  ValQ mu = ValQ::inf();
  for (std::size_t i = 0; i < a.size(); ++i) {
    mu = min(mu, val_or_inf(a[i]) + static_cast<std::int64_t>(i) * ValQ(rho));
  }
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!mu.is_pos_inf() && val_or_inf(a[i]) + static_cast<std::int64_t>(i) * ValQ(rho) == mu) idx.push_back(i);
  }
  std::vector<CollisionClass> out;
  if (idx.size() <= 1) return out;
  std::size_t i0 = idx.front();
  std::int64_t m = static_cast<std::int64_t>(idx.back());
  std::vector<mpq_class> res(idx.back() - i0 + 1, 0);
  for (std::size_t k : idx) res[k - i0] = a[k].leading_digit();
  ValQ gate = max(threshold, collision_threshold(fld, m, 0));

  FieldElem pr = FieldElem::monomial(fld, 1, rho);
  for (const mpq_class& ub : residue_rational_roots(fld, res)) {
    if (ub == 0) continue;
    FieldElem step = FieldElem::from_rational(fld, ub) * pr;
    RVElem cls = rv(step, 0);
    CollisionData cd = collision_data(a, step);
    if (cd.severity > gate) {
      CollisionRoot cr = collision_root(f, alpha, alpha + step, 0);
      out.push_back({cls, cr.lambda, cr.n});
      continue;
    }
    // The obvious point of the class is below the gate; the class still needs
    // a center if some other point exceeds it, and then a derivative root lies
    // in the class.
    bool found = false;
    for (std::int64_t n = 0; n < m && !found; ++n) {
      Poly dn = derivative(f, n);
      if (dn.degree() <= 0) continue;
      for (const FieldElem& lam : find_roots(dn)) {
        FieldElem d = lam - alpha;
        if (!d.is_zero() && d.val() == ValQ(rho) && rv(d, 0) == cls) {
          out.push_back({cls, lam, n});
          found = true;
          break;
        }
      }
    }
  }
  return out;
}

}  // namespace hqe
