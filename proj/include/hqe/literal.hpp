#pragma once

#include <sstream>
#include <string>

#include "hqe/field.hpp"
#include "hqe/poly.hpp"

namespace hqe {

/// Canonical text of an element, following the literal grammar:
///   laurent-q: term (" + " term)* [" + O(t^N)"], term = rat ["*t^" int]
///   padic-p:   rat [" + O(p^N)"]
inline std::string format(const FieldElem& x) {
  const Field& f = x.field();
  std::string big_o;
  if (!x.is_exact()) {
    std::int64_t n = x.abs_precision().as_int();
    big_o = f.is_padic() ? "O(" + std::to_string(f.p) + "^" + std::to_string(n) + ")"
                         : "O(t^" + std::to_string(n) + ")";
  }
  if (x.is_zero()) return x.is_exact() ? "0" : big_o;
  std::string out;
  if (f.is_padic()) {
    out = x.rational().get_str();
  } else {
    const auto& cs = x.coefficients();
    for (std::size_t i = 0; i < cs.size(); ++i) {
      if (cs[i] == 0) continue;
      if (!out.empty()) out += " + ";
      out += cs[i].get_str();
      std::int64_t e = x.low_exponent() + static_cast<std::int64_t>(i);
      if (e != 0) out += "*t^" + std::to_string(e);
    }
  }
  if (!big_o.empty()) out += " + " + big_o;
  return out;
}

inline std::ostream& operator<<(std::ostream& os, const FieldElem& x) { return os << format(x); }

inline std::string format(const Poly& p) {
  if (p.is_zero()) return "0";
  std::string out;
  for (std::int64_t i = p.degree(); i >= 0; --i) {
    const FieldElem& c = p.coeffs()[static_cast<std::size_t>(i)];
    if (c.is_exact_zero()) continue;
    if (!out.empty()) out += " + ";
    out += "(" + format(c) + ")";
    if (i > 0) out += "*x^" + std::to_string(i);
  }
  return out.empty() ? "0" : out;
}
inline std::ostream& operator<<(std::ostream& os, const Poly& p) { return os << format(p); }

}  // namespace hqe
