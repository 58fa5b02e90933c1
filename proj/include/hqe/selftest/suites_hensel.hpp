#pragma once

#include "hqe/hensel.hpp"
#include "hqe/selftest/grid.hpp"
#include "hqe/selftest/report.hpp"

namespace hqe::selftest {

namespace detail {

inline mpq_class half_binomial(int k) {
  mpq_class r = 1;
  for (int i = 0; i < k; ++i) r *= mpq_class(1, 2) - i;
  for (int i = 1; i <= k; ++i) r /= i;
  return r;
}

/// All x mod p^n with x^2 = a mod p^n, extended one digit at a time.
inline std::vector<mpz_class> padic_sqrt_oracle(long p, long a, int n) {
  std::vector<mpz_class> sols;
  for (long x = 0; x < p; ++x) {
    if (((x * x - a) % p + p) % p == 0) sols.emplace_back(x);
  }
  mpz_class pk = p;
  for (int k = 1; k < n; ++k) {
    mpz_class next = pk * p;
    std::vector<mpz_class> ext;
    for (const auto& x : sols) {
      for (long d = 0; d < p; ++d) {
        mpz_class y = x + d * pk;
        if (mpz_class((y * y - a) % next) == 0) ext.push_back(y);
      }
    }
    sols = ext;
    pk = next;
  }
  return sols;
}

inline bool matches_some(const mpz_class& got, const std::vector<mpz_class>& sols, const mpz_class& mod) {
  for (const auto& s : sols) {
    if (mpz_class(got % mod) == mpz_class(s % mod)) return true;
  }
  return false;
}

/// An integral element with a short random expansion starting at pi^lo.
inline FieldElem integral(const Field& f, Rng& g, std::int64_t lo) {
  if (f.is_padic()) {
    mpz_class c = g.uniform(1, 400);
    return FieldElem::from_rational(f, c) * FieldElem::monomial(f, 1, lo);
  }
  return FieldElem::series(f, lo, {mpq_class(g.uniform(1, 4)), mpq_class(g.uniform(-3, 3)), mpq_class(g.uniform(-2, 2), 3)});
}

}  // namespace detail

// ---------------------------------------------------------------------------
// 3. Hensel lifting.

inline Report suite_hensel(std::uint64_t seed) {
  return run_timed(3, "Hensel", 10, [seed](Report& r) {
    Rng g(seed);
    for (const auto& f : {Field::laurent(64), Field::padic(3, 64)}) {
      Poly X = Poly::monomial(f, 1);
      int accepted = 0;
      ValQ worst = ValQ::inf();
      int unique = 0;
      for (int it = 0; it < 4000 && accepted < 200; ++it) {
        // even rounds: P = (x - b) h(x) with a known root b, h(b) sometimes
        // divisible by pi; odd rounds: a random P shifted so that
        // P(a) = pi^e w, whose roots are usually not finite expansions
        const bool known = it % 2 == 0;
        FieldElem b = detail::integral(f, g, g.uniform(0, 2));
        FieldElem a = b + detail::integral(f, g, g.uniform(1, 9));
        Poly P(f);
        if (known) {
          Poly h = Poly::constant(detail::integral(f, g, g.uniform(0, 1)));
          for (int k = g.uniform(0, 3); k > 0; --k) h = h * (X - Poly::constant(detail::integral(f, g, 0)));
          P = (X - Poly::constant(b)) * h;
        } else {
          P = X.pow(g.uniform(2, 5));
          for (std::int64_t k = 1; k < P.degree(); ++k) {
            if (g.coin()) P = P + Poly::constant(detail::integral(f, g, g.uniform(0, 2))) * X.pow(k);
          }
          P = P - Poly::constant(P(a)) + Poly::constant(detail::integral(f, g, g.uniform(1, 12)));
        }
        std::int64_t delta = g.uniform(0, 3);
        FieldElem pa = P(a), da = derivative(P)(a);
        if (pa.is_zero() || da.is_zero() || !(pa.val() > 2 * da.val() + ValQ(delta))) continue;
        ++accepted;
        LiftCertificate c = newton_lift(P, a, delta);
        FieldElem pb = P(c.root);
        ValQ got = pb.is_exact_zero() ? ValQ::inf() : pb.abs_precision();
        worst = min(worst, got);
        r.check(pb.is_zero() && got >= ValQ(f.precision), "P(b) does not vanish to full precision: P=" + format(P) + " a=" + format(a) + " P(b)=" + format(pb));
        ValQ sep = pa.val() - da.val();
        r.check(val_or_inf(a - c.root) == sep && sep > ValQ(delta), "v(a - b) differs from v(P(a)) - v(P'(a))");
        // roots are unique in v(x - a) > v(P'(a)); when b lies there it is the lifted root
        if (known && val_or_inf(a - b) > da.val()) {
          ++unique;
          r.check((c.root - b).is_zero(), "lifted root is not the constructed root");
        }
      }
      r.check(accepted == 200, "only " + std::to_string(accepted) + " hypothesis instances");
      r.note(std::string(f.is_padic() ? "padic-3" : "laurent-q") + ": " + std::to_string(accepted) +
             " instances (" + std::to_string(unique) +
             " with a unique root near a), min certified precision " + worst.str());
    }

    // sqrt(1 + t) against the binomial series, 40 coefficients
    {
      Field f = Field::laurent(40);
      Poly X = Poly::monomial(f, 1);
      FieldElem one = FieldElem::one(f);
      LiftCertificate c = newton_lift(X * X - Poly::constant(one + FieldElem::uniformizer(f)), one, 0);
      bool ok = true;
      for (int k = 0; k < 40; ++k) ok = ok && c.root.coefficient(k) == detail::half_binomial(k);
      r.check(ok, "sqrt(1+t) digits differ from the binomial series");
    }
    // sqrt 2 in Z_7 and sqrt 17 in Z_2 against digit-by-digit square roots
    for (auto [p, n, a0] : {std::tuple<long, long, long>{7, 2, 3}, {2, 17, 1}}) {
      Field f = Field::padic(p, 40);
      Poly X = Poly::monomial(f, 1);
      LiftCertificate c = newton_lift(X * X - Poly::constant(FieldElem::from_rational(f, n)), FieldElem::from_rational(f, a0), 0);
      // 2-adic square roots are determined modulo 2^(n-1) by x^2 = a mod 2^n
      int digits = p == 2 ? 39 : 40;
      auto sols = detail::padic_sqrt_oracle(p, n, digits + (p == 2 ? 1 : 0));
      mpz_class mod = hqe::detail::ipow(mpz_class(p), digits);
      r.check(detail::matches_some(c.root.unit_residue(digits), sols, mod),
              "sqrt " + std::to_string(n) + " in Z_" + std::to_string(p) + " digits differ");
    }
  });
}

// ---------------------------------------------------------------------------
// 4. Collision roots.

inline Report suite_collision(std::uint64_t seed) {
  return run_timed(4, "Collision", 10, [seed](Report& r) {
    Rng g(seed);
    int engineered = 0, free = 0, by_n[6] = {0, 0, 0, 0, 0, 0};
    for (int it = 0; it < 2000 && (engineered < 100 || free < 100); ++it) {
      Field f = it % 2 ? Field::padic(7, 128) : Field::laurent(128);
      Poly X = Poly::monomial(f, 1);
      // f = c prod (x - r_i), deg <= 5
      int d = g.uniform(1, 5);
      std::vector<FieldElem> roots;
      Poly P = Poly::constant(g.element(f, -1, 1));
      for (int i = 0; i < d; ++i) {
        roots.push_back(g.element(f, -2, 3));
        P = P * (X - Poly::constant(roots.back()));
      }
      FieldElem alpha = g.coin() ? FieldElem::zero(f) : g.element(f, -2, 3);
      std::int64_t delta = g.uniform(0, 1);
      FieldElem beta = g.coin() ? roots[static_cast<std::size_t>(g.uniform(0, d - 1))] + g.element(f, 20, 60) : g.element(f, -3, 4);
      FieldElem h = beta - alpha;
      if (h.is_zero()) continue;
      // severity computed from the Taylor coefficients f^(i)(alpha) / i!
      ValQ mu = ValQ::inf();
      std::int64_t m = 0;
      FieldElem hi = FieldElem::one(f);
      mpz_class fact = 1;
      for (std::int64_t i = 0; i <= P.degree(); ++i) {
        if (i > 0) fact *= i;
        FieldElem ai = derivative(P, i)(alpha) / FieldElem::from_rational(f, mpq_class(fact));
        if (!ai.is_zero()) {
          ValQ t = ai.val() + i * h.val();
          if (t <= mu) {
            mu = t;
            m = i;
          }
        }
        hi *= h;
      }
      FieldElem fb = P(beta);
      if (fb.is_zero()) continue;  // beta is itself a root
      ValQ sev = fb.val() - mu;
      ValQ theta = (std::int64_t{1} << m) * (val_factorial(f, m) + ValQ(delta));
      if (sev > theta) {
        if (engineered >= 100) continue;
        ++engineered;
        CollisionRoot c = collision_root(P, alpha, beta, delta);
        ++by_n[c.n];
        r.check(derivative(P, c.n)(c.lambda).is_zero(), "f^(n)(lambda) does not vanish");
        r.check(rv(c.lambda - alpha, delta) == rv(beta - alpha, delta), "rv(lambda - alpha) differs from rv(beta - alpha)");
      } else {
        if (free >= 100) continue;
        ++free;
        bool threw = false;
        try {
          collision_root(P, alpha, beta, delta);
        } catch (const PreconditionViolated&) {
          threw = true;
        }
        r.check(threw, "collision-free input accepted");
      }
    }
    r.check(engineered == 100 && free == 100, "too few cases");
    r.note("collisions: " + std::to_string(engineered) + ", collision-free: " + std::to_string(free));
    std::string ns = "derivative orders:";
    for (int n = 0; n < 6; ++n) ns += " " + std::to_string(by_n[n]);
    r.note(ns);
  });
}

}  // namespace hqe::selftest
