#pragma once

#include <algorithm>
#include <optional>
#include <set>
#include <vector>

#include "hqe/literal.hpp"
#include "hqe/poly.hpp"
#include "hqe/residue.hpp"
#include "hqe/roots.hpp"

namespace hqe {

/// A piece of K on which the valuation of every explored polynomial is
/// either constant or an affine function of k = v(x - center).
///
///   kAll:    all of K (nothing to explore)
///   kBall:   v(x - center) >= r, valuations constant
///   kSphere: v(x - center) = r and (x - center)/pi^r not congruent to any
///            excluded residue, valuations constant
///   kPoint:  x = center
///   kAffine: klo <= v(x - center) <= khi (either end may be open), valuation
///            of each polynomial is A + s k; `ks` are sample values of k
///            between which every comparison of those lines keeps its sign
struct Region {
  enum class Kind : std::uint8_t { kAll, kBall, kSphere, kPoint, kAffine };
  Kind kind = Kind::kAll;
  FieldElem center;
  std::int64_t r = 0;
  std::vector<mpq_class> excluded;
  std::optional<std::int64_t> klo, khi;
  std::vector<std::int64_t> ks;

  /// Test points: one for constant regions, one per sample k for affine ones.
  /// Empty for a sphere whose residues are all excluded.
  std::vector<FieldElem> points() const {
    const Field& f = center.field();
    switch (kind) {
      case Kind::kAll:
      case Kind::kBall:
      case Kind::kPoint: return {center};
      case Kind::kSphere: {
        auto u = generic_residue(f, excluded);
        if (!u) return {};
        return {center + FieldElem::from_rational(f, *u) * detail::pi_pow(f, r)};
      }
      case Kind::kAffine: {
        std::vector<FieldElem> out;
        for (auto k : ks) out.push_back(center + detail::pi_pow(f, k));
        return out;
      }
    }
    return {};
  }

  /// Smallest positive integer residue outside `ex` (nonzero mod p in padic).
  static std::optional<mpq_class> generic_residue(const Field& f, const std::vector<mpq_class>& ex) {
    for (std::int64_t n = 1;; ++n) {
      if (f.is_padic() && n >= f.p) return std::nullopt;
      if (std::find(ex.begin(), ex.end(), mpq_class(n)) == ex.end()) return mpq_class(n);
    }
  }
};

namespace detail {

struct Line {
  ValQ a;  // value at k = 0
  std::int64_t s;
};

/// Integer sample points in [lo, hi] around every crossing of two lines
/// shifted by an offset, plus the ends and one point past each open end.
inline std::vector<std::int64_t> affine_samples(const std::vector<Line>& lines, const std::set<std::int64_t>& offsets,
                                                std::optional<std::int64_t> lo, std::optional<std::int64_t> hi) {
  std::set<std::int64_t> ks;
  std::set<std::int64_t> offs = {0};
  for (auto o : offsets) {
    offs.insert(o);
    offs.insert(-o);
  }
  for (std::size_t i = 0; i < lines.size(); ++i) {
    for (std::size_t j = 0; j < lines.size(); ++j) {
      if (lines[i].s == lines[j].s) continue;
      for (auto o : offs) {
        ValQ k = (lines[j].a + ValQ(o) - lines[i].a) / (lines[i].s - lines[j].s);
        for (std::int64_t x = k.floor() - 1; x <= k.ceil() + 1; ++x) ks.insert(x);
      }
    }
  }
  if (lo) {
    ks.insert(*lo);
    ks.insert(*lo + 1);
  }
  if (hi) {
    ks.insert(*hi);
    ks.insert(*hi - 1);
  }
  std::vector<std::int64_t> in;
  for (auto k : ks) {
    if ((!lo || k >= *lo) && (!hi || k <= *hi)) in.push_back(k);
  }
  if (in.empty()) in.push_back(lo ? *lo : (hi ? *hi : 0));
  std::vector<std::int64_t> out;
  for (std::size_t i = 0; i < in.size(); ++i) {
    out.push_back(in[i]);
    if (i + 1 < in.size() && in[i + 1] > in[i] + 1) out.push_back(in[i] + (in[i + 1] - in[i]) / 2);
  }
  if (!hi) out.push_back(out.back() + 1);
  if (!lo) out.insert(out.begin(), out.front() - 1);
  return out;
}

class Explorer {
 public:
  Explorer(const Field& f, std::vector<Poly> polys, std::set<std::int64_t> offsets)
      : f_(f), offsets_(std::move(offsets)) {
    for (auto& p : polys) {
      if (p.is_zero()) continue;
      polys_.push_back(std::move(p));
    }
    for (const auto& p : polys_) {
      if (p.degree() < 1) continue;
      for (const auto& r : find_roots(p)) {
        bool seen = false;
        for (const auto& q : roots_) seen = seen || (q - r).is_zero();
        if (!seen) roots_.push_back(r);
      }
    }
  }

  std::vector<Region> run() {
    std::vector<Region> out;
    bool any = false;
    std::optional<std::int64_t> r0;
    std::vector<Line> outer;
    for (const auto& p : polys_) {
      std::int64_t d = p.degree();
      outer.push_back({p.leading().val(), d});
      if (d < 1) continue;
      any = true;
      for (std::int64_t i = 0; i < d; ++i) {
        const FieldElem& c = p.coeffs()[static_cast<std::size_t>(i)];
        if (c.is_zero()) continue;
        std::int64_t k = ((c.val() - p.leading().val()) / (d - i)).ceil();
        r0 = r0 ? std::min(*r0, k) : k;
      }
    }
    if (!any) {
      Region all;
      all.center = FieldElem::zero(f_);
      out.push_back(all);
      return out;
    }
    FieldElem zero = FieldElem::zero(f_);
    if (!r0) {
      // every polynomial is a monomial
      out.push_back(point(zero));
      out.push_back(affine(zero, std::nullopt, std::nullopt, outer));
      return out;
    }
    out.push_back(affine(zero, std::nullopt, *r0 - 1, outer));
    ball(zero, *r0, 0, out);
    return out;
  }

 private:
  Region point(const FieldElem& b) const {
    Region g;
    g.kind = Region::Kind::kPoint;
    g.center = b;
    return g;
  }
  Region affine(const FieldElem& b, std::optional<std::int64_t> lo, std::optional<std::int64_t> hi,
                const std::vector<Line>& lines) const {
    Region g;
    g.kind = Region::Kind::kAffine;
    g.center = b;
    g.klo = lo;
    g.khi = hi;
    g.ks = affine_samples(lines, offsets_, lo, hi);
    return g;
  }

  void ball(FieldElem b, std::int64_t r, int depth, std::vector<Region>& out) {
    if (depth > 4 * f_.precision + 64) throw PrecisionExhausted("ball exploration did not settle");
    for (const auto& rho : roots_) {
      if (val_or_inf(rho - b) >= ValQ(r)) {
        b = rho;
        break;
      }
    }
    std::vector<std::vector<FieldElem>> cs;
    bool stable = true, constant = true;
    std::vector<Line> lines;
    for (const auto& p : polys_) {
      cs.push_back(taylor_shift(p, b));
      const auto& c = cs.back();
      std::size_t lo = 0;
      while (lo < c.size() && c[lo].is_zero()) ++lo;
      if (lo == c.size()) continue;
      ValQ base = c[lo].val() + ValQ(static_cast<std::int64_t>(lo) * r);
      for (std::size_t i = lo + 1; i < c.size(); ++i) {
        if (!c[i].is_zero() && !(c[i].val() + ValQ(static_cast<std::int64_t>(i) * r) > base)) stable = false;
      }
      if (lo > 0) constant = false;
      lines.push_back({c[lo].val(), static_cast<std::int64_t>(lo)});
    }
    if (stable) {
      if (constant) {
        Region g;
        g.kind = Region::Kind::kBall;
        g.center = b;
        g.r = r;
        out.push_back(g);
      } else {
        out.push_back(point(b));
        out.push_back(affine(b, r, std::nullopt, lines));
      }
      return;
    }
    // split into the sphere at r, the special residue classes and the inner ball
    std::vector<mpq_class> special;
    for (const auto& c : cs) {
      ValQ m = ValQ::inf();
      for (std::size_t i = 0; i < c.size(); ++i) {
        if (!c[i].is_zero()) m = min(m, c[i].val() + ValQ(static_cast<std::int64_t>(i) * r));
      }
      std::vector<mpq_class> res(c.size(), mpq_class(0));
      int terms = 0;
      for (std::size_t i = 0; i < c.size(); ++i) {
        if (!c[i].is_zero() && c[i].val() + ValQ(static_cast<std::int64_t>(i) * r) == m) {
          res[i] = c[i].leading_digit();
          ++terms;
        }
      }
      if (terms < 2) continue;
      for (const auto& u : residue_rational_roots(f_, res)) {
        if (u != 0 && std::find(special.begin(), special.end(), u) == special.end()) special.push_back(u);
      }
    }
    std::sort(special.begin(), special.end());
    Region sph;
    sph.kind = Region::Kind::kSphere;
    sph.center = b;
    sph.r = r;
    sph.excluded = special;
    out.push_back(sph);
    for (const auto& u : special) ball(b + FieldElem::from_rational(f_, u) * pi_pow(f_, r), r + 1, depth + 1, out);
    ball(b, r + 1, depth + 1, out);
  }

  Field f_;
  std::vector<Poly> polys_;
  std::set<std::int64_t> offsets_;
  std::vector<FieldElem> roots_;
};

}  // namespace detail

/// Partition of K into regions adapted to the valuations of `polys`. Sample
/// points of affine regions resolve every comparison v(P) vs v(Q) + o with o
/// in `offsets`.
inline std::vector<Region> explore(const Field& f, std::vector<Poly> polys, std::set<std::int64_t> offsets) {
  detail::Explorer e(f, std::move(polys), std::move(offsets));
  return e.run();
}

}  // namespace hqe
