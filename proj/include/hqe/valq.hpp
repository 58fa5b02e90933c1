#pragma once

#include <compare>
#include <cstdint>
#include <numeric>
#include <ostream>
#include <stdexcept>
#include <string>

#include "hqe/errors.hpp"

namespace hqe {

/// An element of the divisible hull of the value group Z, extended by
/// +infinity and -infinity. Valuations of field elements are integral;
/// fractional values only show up as ball radii eta/n.
class ValQ {
 public:
  enum class Kind : std::uint8_t { kNegInf, kFinite, kPosInf };

  constexpr ValQ() = default;
  constexpr ValQ(std::int64_t n) : num_(n) {}  // NOLINT: implicit from int
  ValQ(std::int64_t n, std::int64_t d) : num_(n), den_(d) {
    if (d == 0) throw std::invalid_argument("ValQ: zero denominator");
    normalize();
  }

  static constexpr ValQ inf() { return ValQ(Kind::kPosInf); }
  static constexpr ValQ neg_inf() { return ValQ(Kind::kNegInf); }

  constexpr bool is_finite() const { return kind_ == Kind::kFinite; }
  constexpr bool is_pos_inf() const { return kind_ == Kind::kPosInf; }
  constexpr bool is_neg_inf() const { return kind_ == Kind::kNegInf; }
  constexpr bool is_integer() const { return is_finite() && den_ == 1; }

  constexpr std::int64_t num() const { return num_; }
  constexpr std::int64_t den() const { return den_; }

  /// Integral value; throws if not an integer.
  std::int64_t as_int() const {
    if (!is_integer()) throw std::logic_error("ValQ: not an integer: " + str());
    return num_;
  }
  /// Largest integer <= this (finite only).
  std::int64_t floor() const {
    if (!is_finite()) throw std::logic_error("ValQ::floor of infinity");
    std::int64_t q = num_ / den_;
    if (num_ % den_ != 0 && num_ < 0) --q;
    return q;
  }
  std::int64_t ceil() const {
    if (!is_finite()) throw std::logic_error("ValQ::ceil of infinity");
    std::int64_t q = num_ / den_;
    if (num_ % den_ != 0 && num_ > 0) ++q;
    return q;
  }

  friend ValQ operator+(const ValQ& a, const ValQ& b) {
    if (a.is_finite() && b.is_finite())
      return ValQ(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
    if ((a.is_pos_inf() && b.is_neg_inf()) || (a.is_neg_inf() && b.is_pos_inf()))
      throw std::domain_error("ValQ: (+inf) + (-inf)");
    return a.is_finite() ? b : a;
  }
  friend ValQ operator-(const ValQ& a) {
    if (a.is_pos_inf()) return neg_inf();
    if (a.is_neg_inf()) return inf();
    return ValQ(-a.num_, a.den_);
  }
  friend ValQ operator-(const ValQ& a, const ValQ& b) { return a + (-b); }
  /// Multiplication by a nonnegative integer (0 * inf is rejected).
  friend ValQ operator*(std::int64_t k, const ValQ& a) {
    if (a.is_finite()) return ValQ(k * a.num_, a.den_);
    if (k == 0) throw std::domain_error("ValQ: 0 * infinity");
    return k > 0 ? a : -a;
  }
  friend ValQ operator/(const ValQ& a, std::int64_t k) {
    if (k == 0) throw std::domain_error("ValQ: division by zero");
    if (!a.is_finite()) return k > 0 ? a : -a;
    return ValQ(a.num_, a.den_ * k);
  }
  ValQ& operator+=(const ValQ& o) { return *this = *this + o; }

  friend bool operator==(const ValQ& a, const ValQ& b) {
    return a.kind_ == b.kind_ && (!a.is_finite() || (a.num_ == b.num_ && a.den_ == b.den_));
  }
  friend std::strong_ordering operator<=>(const ValQ& a, const ValQ& b) {
    if (a.kind_ != b.kind_) return a.kind_ <=> b.kind_;
    if (!a.is_finite()) return std::strong_ordering::equal;
    return a.num_ * b.den_ <=> b.num_ * a.den_;
  }

  std::string str() const {
    if (is_pos_inf()) return "inf";
    if (is_neg_inf()) return "-inf";
    if (den_ == 1) return std::to_string(num_);
    return std::to_string(num_) + "/" + std::to_string(den_);
  }
  friend std::ostream& operator<<(std::ostream& os, const ValQ& v) { return os << v.str(); }

 private:
  constexpr explicit ValQ(Kind k) : kind_(k) {}
  void normalize() {
    if (den_ < 0) {
      den_ = -den_;
      num_ = -num_;
    }
    std::int64_t g = std::gcd(num_ < 0 ? -num_ : num_, den_);
    if (g > 1) {
      num_ /= g;
      den_ /= g;
    }
  }

  Kind kind_ = Kind::kFinite;
  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

inline ValQ min(const ValQ& a, const ValQ& b) { return b < a ? b : a; }
inline ValQ max(const ValQ& a, const ValQ& b) { return a < b ? b : a; }

}  // namespace hqe
