#pragma once

#include <array>

#include "hqe/literal.hpp"
#include "hqe/rv.hpp"
#include "hqe/selftest/grid.hpp"
#include "hqe/selftest/report.hpp"

namespace hqe::selftest {

inline std::vector<Field> both_backends(std::int64_t prec = 64) { return {Field::laurent(prec), Field::padic(3, prec)}; }

/// x (1 + m) with v(m) = k.
inline FieldElem perturb(const FieldElem& x, Rng& g, std::int64_t k) {
  const Field& f = x.field();
  return x * (FieldElem::one(f) + g.element(f, k, k));
}

// ---------------------------------------------------------------------------
// 1. rv_d(x) = rv_d(y)  <=>  v(x - y) > v(y) + d  <=>  res_d(x/y) = 1

inline Report suite_rv_equivalence(std::uint64_t seed) {
  return run_timed(1, "RV equivalence", 5, [seed](Report& r) {
    Rng g(seed);
    std::size_t agree_true = 0;
    for (const auto& f : both_backends()) {
      for (int it = 0; it < 500; ++it) {
        FieldElem y = g.element(f, -4, 4);
        FieldElem x = g.coin() ? perturb(y, g, g.uniform(0, 6)) : g.element(f, -4, 4);
        if (x.is_zero()) continue;
        for (std::int64_t d = 0; d <= 4; ++d) {
          bool by_class = rv(x, d) == rv(y, d);
          bool by_value = val_or_inf(x - y) > y.val() + ValQ(d);
          FieldElem q = x / y;
          bool by_residue = q.val() >= ValQ(0) && res_delta(q, d).is_one();
          agree_true += by_class;
          r.check(by_class == by_value && by_value == by_residue && (!by_class || x.val() == y.val()),
                  "x=" + format(x) + " y=" + format(y) + " d=" + std::to_string(d));
        }
      }
    }
    r.note("equal classes seen: " + std::to_string(agree_true));
  });
}

// ---------------------------------------------------------------------------
// 2. Partial addition.

namespace detail {

inline RVElem class_of(const FieldElem& x, std::int64_t d) {
  return x.is_zero() ? RVElem::infinity(x.field(), d) : rv(x, d);
}

/// Independent witness test for rv(x_1) + ... + rv(x_n) ~ w: the class of w
/// and the ball of perturbed sums are both balls, so they meet iff one of the
/// two centers lies in both. The witness is rebuilt as an explicit
/// perturbation of the minimal term and checked class by class.
inline bool witness_oracle(const std::vector<FieldElem>& xs, const RVElem& w) {
  const Field& f = w.field;
  const std::int64_t d = w.order;
  FieldElem s = FieldElem::zero(f);
  std::size_t imin = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    s += xs[i];
    if (val_or_inf(xs[i]) < val_or_inf(xs[imin])) imin = i;
  }
  if (xs[imin].is_zero()) return w.is_inf();
  std::vector<FieldElem> zs;
  zs.push_back(w.representative());  // 0 for the class of 0
  zs.push_back(s);
  for (const auto& z : zs) {
    if (!(detail::class_of(z, d) == w)) continue;
    FieldElem m = (z - s) / xs[imin];
    if (!(val_or_inf(m) > ValQ(d))) continue;
    std::vector<FieldElem> ys = xs;
    ys[imin] = xs[imin] * (FieldElem::one(f) + m);
    if (!(rv(ys[imin], d) == rv(xs[imin], d))) continue;
    FieldElem t = FieldElem::zero(f);
    for (const auto& y : ys) t += y;
    if (detail::class_of(t, d) == w) return true;
  }
  return false;
}

}  // namespace detail

inline Report suite_partial_addition(std::uint64_t seed) {
  return run_timed(2, "Partial addition", 10, [seed](Report& r) {
    Rng g(seed);
    Field L = Field::laurent(64), P = Field::padic(3, 64);
    // per-property case counts; each property runs until it has 500 cases
    enum { kStable, kConverse, kSum, kAmbiguous, kSmall, kOracle, kCount };
    std::array<int, kCount> done{};
    auto want = [&](int k) { return done[static_cast<std::size_t>(k)] < 500; };
    auto count = [&](int k) { ++done[static_cast<std::size_t>(k)]; };
    for (int it = 0; it < 20000; ++it) {
      bool all = true;
      for (int k = 0; k < kCount; ++k) all = all && !want(k);
      if (all) break;
      const Field& f = it % 2 ? P : L;
      std::int64_t d = g.uniform(0, 4);
      FieldElem x = g.element(f, -3, 3);
      // y cancels x to a random depth half the time
      FieldElem y = g.coin() ? -perturb(x, g, g.uniform(0, 5)) : g.element(f, -3, 3);
      FieldElem s = x + y;
      if (s.is_zero()) continue;
      ValQ mn = min(x.val(), y.val());

      // stability: well-defined sums ignore the choice of representative
      if (s.val() == mn && want(kStable)) {
        count(kStable);
        FieldElem z = perturb(x, g, d + g.uniform(1, 4));
        r.check(rv(z, d) == rv(x, d) && rv(z + y, d) == rv(s, d), "stability x=" + format(x) + " y=" + format(y));
      } else if (s.val() > x.val() && want(kConverse)) {
        // converse: a perturbation at depth d + eps moves the sum
        std::int64_t eps = (s.val() - x.val()).as_int();
        FieldElem z = x * (FieldElem::one(f) + FieldElem::monomial(f, 1, d + eps));
        count(kConverse);
        r.check(rv(z, d) == rv(x, d) && !(rv(z + y, d) == rv(s, d)), "converse x=" + format(x) + " y=" + format(y));
      }

      // n-ary sums: a well-defined total has exactly one witness
      std::vector<FieldElem> xs = {x, y, g.element(f, -3, 3)};
      if (g.coin()) xs[2] = -perturb(x + y, g, g.uniform(0, 3));
      FieldElem tot = xs[0] + xs[1] + xs[2];
      if (tot.is_zero()) continue;
      ValQ m3 = min(min(xs[0].val(), xs[1].val()), xs[2].val());
      std::vector<RVElem> cls;
      for (const auto& e : xs) cls.push_back(rv(e, d));
      if (tot.val() == m3 && want(kSum)) {
        count(kSum);
        RVElem w = rv(tot, d);
        r.check(oplus_holds(cls, w), "n-ary well-defined sum not a witness");
        RVElem other = rv(perturb(tot, g, d), d);
        r.check(!oplus_holds(cls, other), "n-ary sum has a second witness");
      } else if (tot.val() > m3 && want(kAmbiguous)) {
        // ambiguous: witnesses at order gamma >= d + eps project to rv_d(total)
        count(kAmbiguous);
        std::int64_t eps = (tot.val() - m3).as_int();
        std::int64_t gamma = d + eps + g.uniform(0, 2);
        std::vector<RVElem> cg;
        for (const auto& e : xs) cg.push_back(rv(e, gamma));
        auto units = sample_units(f);
        std::vector<ValQ> values;
        for (int k = 0; k < 20; ++k) {
          // witness z = sum x_i (1 + m_i), m_i in m_gamma
          FieldElem z = FieldElem::zero(f);
          for (std::size_t i = 0; i < xs.size(); ++i) {
            FieldElem m = units[static_cast<std::size_t>(g.uniform(0, units.size() - 1))] *
                          FieldElem::monomial(f, 1, gamma + 1 + g.uniform(0, 3));
            z += xs[i] * (FieldElem::one(f) + m);
          }
          if (z.is_zero()) continue;
          RVElem wz = rv(z, gamma);
          values.push_back(wz.val());
          r.check(oplus_holds(cg, wz), "enumerated witness rejected by oplus_holds");
          r.check(rv_project(wz, d) == rv(tot, d), "witness projection differs");
        }
        // values of witnesses agree once gamma >= eps
        bool same = true;
        for (const auto& v : values) same = same && v == values.front();
        r.check(same, "witness values differ");
      }

      // small order: anything of value above v(x) + gamma is a witness of rv(x) + rv(-x)
      std::int64_t gamma = g.uniform(0, 3);
      FieldElem xx = perturb(x, g, gamma + 2);
      FieldElem z = g.element(f, x.val().as_int() + gamma + 1, x.val().as_int() + gamma + 4);
      if (want(kSmall) && (x - xx).val() > x.val() + ValQ(gamma)) {
        count(kSmall);
        r.check(oplus_holds(rv(x, gamma), rv(-xx, gamma), rv(z, gamma)), "small-order witness rejected");
      }

      // oplus_holds against the witness oracle on a 20-point grid of classes around the sum
      if (!want(kOracle)) continue;
      count(kOracle);
      std::vector<RVElem> c2 = {rv(x, d), rv(y, d)};
      auto units = sample_units(f);
      std::vector<FieldElem> probes = {s};
      for (std::int64_t j = 0; j < 10; ++j) {
        probes.push_back(s + units[static_cast<std::size_t>(j) % units.size()] * FieldElem::monomial(f, 1, mn.as_int() + j - 2));
        probes.push_back(s * (FieldElem::one(f) + units[static_cast<std::size_t>(j + 3) % units.size()] *
                                                      FieldElem::monomial(f, 1, j)));
      }
      probes.resize(20);
      for (const auto& pz : probes) {
        RVElem w = detail::class_of(pz, d);
        r.check(oplus_holds(c2, w) == detail::witness_oracle({x, y}, w), "oracle mismatch x=" + format(x) + " y=" + format(y) + " w=" + format(w));
      }
    }
    const char* names[] = {"stability", "converse", "n-ary sum", "ambiguous sum", "small order", "oracle"};
    for (int k = 0; k < kCount; ++k) {
      r.check(!want(k), std::string("too few ") + names[k] + " cases");
      r.note(std::string(names[k]) + " cases: " + std::to_string(done[static_cast<std::size_t>(k)]));
    }
  });
}

}  // namespace hqe::selftest
