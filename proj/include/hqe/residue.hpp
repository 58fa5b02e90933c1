#pragma once

#include <algorithm>
#include <map>
#include <vector>

#include <gmpxx.h>

#include "hqe/field.hpp"

namespace hqe {

namespace detail {

inline mpz_class pollard_rho(const mpz_class& n) {
  if (n % 2 == 0) return 2;
  for (unsigned long c = 1;; ++c) {
    mpz_class x = 2, y = 2, d = 1;
    auto step = [&](const mpz_class& z) { return mpz_class((z * z + c) % n); };
    while (d == 1) {
      x = step(x);
      y = step(step(y));
      mpz_class diff = abs(x - y);
      mpz_gcd(d.get_mpz_t(), diff.get_mpz_t(), n.get_mpz_t());
    }
    if (d != n) return d;
  }
}

inline void factor_into(mpz_class n, std::map<mpz_class, int>& out) {
  if (n < 0) n = -n;
  if (n <= 1) return;
  for (unsigned long p = 2; p < 1000; ++p) {
    while (n % p == 0) {
      ++out[mpz_class(p)];
      n /= p;
    }
  }
  if (n == 1) return;
  if (mpz_probab_prime_p(n.get_mpz_t(), 30)) {
    ++out[n];
    return;
  }
  mpz_class d = pollard_rho(n);
  factor_into(d, out);
  factor_into(n / d, out);
}

/// Positive divisors of n != 0.
inline std::vector<mpz_class> divisors(const mpz_class& n) {
  std::map<mpz_class, int> fac;
  factor_into(n, fac);
  std::vector<mpz_class> ds{1};
  for (const auto& [p, e] : fac) {
    std::size_t k = ds.size();
    mpz_class pk = 1;
    for (int i = 1; i <= e; ++i) {
      pk *= p;
      for (std::size_t j = 0; j < k; ++j) ds.push_back(ds[j] * pk);
    }
  }
  std::sort(ds.begin(), ds.end());
  return ds;
}

inline mpq_class eval_q(const std::vector<mpq_class>& c, const mpq_class& x) {
  mpq_class r = 0;
  for (std::size_t i = c.size(); i-- > 0;) r = r * x + c[i];
  return r;
}

inline mpz_class mod_p(const mpq_class& q, std::int64_t p) {
  mpz_class P(static_cast<long>(p));
  mpz_class num = q.get_num() % P, den = q.get_den() % P;
  if (den < 0) den += P;
  mpz_class inv;
  mpz_invert(inv.get_mpz_t(), den.get_mpz_t(), P.get_mpz_t());
  mpz_class r = (num * inv) % P;
  if (r < 0) r += P;
  return r;
}

inline std::vector<mpq_class> reduce_coeffs(const Field& f, std::vector<mpq_class> c) {
  if (f.is_padic()) {
    for (auto& x : c) x = mpq_class(mod_p(x, f.p));
  }
  while (!c.empty() && c.back() == 0) c.pop_back();
  return c;
}

/// Synthetic division by (u - r) in the residue field.
inline std::vector<mpq_class> deflate(const Field& f, const std::vector<mpq_class>& c, const mpq_class& r) {
  std::vector<mpq_class> q(c.size() - 1);
  mpq_class acc = 0;
  for (std::size_t i = c.size(); i-- > 1;) {
    acc = acc * r + c[i];
    q[i - 1] = acc;
  }
  return reduce_coeffs(f, q);
}

}  // namespace detail

/// Roots in the residue field (Q for laurent-q, F_p for padic) of the
/// polynomial sum c[i] u^i. Sorted, without repetition.
inline std::vector<mpq_class> residue_rational_roots(const Field& f, const std::vector<mpq_class>& coeffs) {
  std::vector<mpq_class> c = detail::reduce_coeffs(f, coeffs);
  std::vector<mpq_class> out;
  if (c.empty()) return out;
  if (f.is_padic()) {
    for (std::int64_t r = 0; r < f.p; ++r) {
      if (detail::mod_p(detail::eval_q(c, mpq_class(r)), f.p) == 0) out.emplace_back(r);
    }
    return out;
  }
  std::size_t low = 0;
  while (c[low] == 0) ++low;
  if (low > 0) out.emplace_back(0);
  std::vector<mpq_class> g(c.begin() + static_cast<std::ptrdiff_t>(low), c.end());
  if (g.size() <= 1) return out;
  mpz_class l = 1;
  for (const auto& x : g) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), x.get_den().get_mpz_t());
  std::vector<mpz_class> z;
  for (const auto& x : g) z.push_back(mpz_class(x * l));
  auto num = detail::divisors(z.front());
  auto den = detail::divisors(z.back());
  for (const auto& a : num) {
    for (const auto& b : den) {
      for (int s : {1, -1}) {
        mpq_class r(s * a, b);
        r.canonicalize();
        if (detail::eval_q(g, r) == 0) out.push_back(r);
      }
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

/// Multiplicity of r as a root of sum c[i] u^i in the residue field.
inline int residue_root_multiplicity(const Field& f, const std::vector<mpq_class>& coeffs, const mpq_class& r) {
  std::vector<mpq_class> c = detail::reduce_coeffs(f, coeffs);
  int k = 0;
  while (c.size() > 1) {
    mpq_class v = detail::eval_q(c, r);
    if (f.is_padic() ? detail::mod_p(v, f.p) != 0 : v != 0) break;
    c = detail::deflate(f, c, r);
    ++k;
  }
  return k;
}

}  // namespace hqe
