#pragma once

#include <algorithm>
#include <string>
#include <vector>

#include "hqe/errors.hpp"
#include "hqe/field.hpp"
#include "hqe/literal.hpp"
#include "hqe/valq.hpp"

namespace hqe {

/// A ball in K, normalized to K, the empty set, a singleton or a closed ball
/// B_{>=r}(c) with integer r. The radius as written (possibly fractional,
/// open or closed) is kept for display.
struct Ball {
  enum class Kind : std::uint8_t { kWhole, kEmpty, kPoint, kClosed };
  Kind kind = Kind::kWhole;
  Field field;
  FieldElem center;
  std::int64_t radius = 0;  // kClosed: B_{>=radius}(center)
  ValQ shown_radius = 0;
  bool shown_strict = false;

  static Ball whole(const Field& f) {
    Ball b;
    b.field = f;
    return b;
  }
  static Ball empty(const Field& f) {
    Ball b;
    b.field = f;
    b.kind = Kind::kEmpty;
    return b;
  }
  static Ball point(const FieldElem& c) {
    Ball b;
    b.field = c.field();
    b.kind = Kind::kPoint;
    b.center = c;
    return b;
  }
  /// B_{>=r}(c); r may be fractional.
  static Ball closed(const FieldElem& c, const ValQ& r) {
    if (r.is_pos_inf()) return point(c);
    if (r.is_neg_inf()) return whole(c.field());
    Ball b;
    b.field = c.field();
    b.kind = Kind::kClosed;
    b.center = c;
    b.radius = r.ceil();
    b.shown_radius = r;
    return b;
  }
  /// B_{>r}(c); r may be fractional.
  static Ball open(const FieldElem& c, const ValQ& r) {
    if (r.is_pos_inf()) return empty(c.field());
    if (r.is_neg_inf()) return whole(c.field());
    Ball b = closed(c, ValQ(r.floor() + 1));
    b.shown_radius = r;
    b.shown_strict = true;
    return b;
  }

  bool is_whole() const { return kind == Kind::kWhole; }
  bool is_empty() const { return kind == Kind::kEmpty; }
  bool is_point() const { return kind == Kind::kPoint; }
  bool is_closed() const { return kind == Kind::kClosed; }

  bool contains(const FieldElem& x) const {
    switch (kind) {
      case Kind::kWhole: return true;
      case Kind::kEmpty: return false;
      case Kind::kPoint: return (x - center).is_zero();
      case Kind::kClosed: return (x - center).val_at_least(radius);
    }
    return false;
  }

  /// this is a subset of o.
  bool subset_of(const Ball& o) const {
    if (is_empty() || o.is_whole()) return true;
    if (o.is_empty() || is_whole()) return false;
    if (is_point()) return o.contains(center);
    if (o.is_point()) return false;
    return radius >= o.radius && o.contains(center);
  }

  /// Balls are nested or disjoint.
  friend Ball intersect(const Ball& a, const Ball& b) {
    if (a.subset_of(b)) return a;
    if (b.subset_of(a)) return b;
    return empty(a.field);
  }

  bool disjoint(const Ball& o) const { return intersect(*this, o).is_empty(); }

  std::string str() const {
    switch (kind) {
      case Kind::kWhole: return "K";
      case Kind::kEmpty: return "{}";
      case Kind::kPoint: return "{" + format(center) + "}";
      case Kind::kClosed: {
        std::int64_t as_shown = shown_strict ? shown_radius.floor() + 1 : shown_radius.ceil();
        if (as_shown == radius) {
          return std::string("B") + (shown_strict ? ">" : ">=") + shown_radius.str() + "(" + format(center) + ")";
        }
        return "B>=" + std::to_string(radius) + "(" + format(center) + ")";
      }
    }
    return "?";
  }
};

/// outer minus the union of holes.
struct SwissCheese {
  Ball outer;
  std::vector<Ball> holes;

  static SwissCheese whole(const Field& f) { return {Ball::whole(f), {}}; }
  static SwissCheese of(const Ball& b) { return {b, {}}; }

  bool contains(const FieldElem& x) const {
    if (!outer.contains(x)) return false;
    for (const auto& h : holes) {
      if (h.contains(x)) return false;
    }
    return true;
  }

  /// Drops empty or outside holes and holes inside other holes; a hole
  /// covering the outer ball empties the cheese.
  SwissCheese& normalize() {
    if (outer.is_empty()) {
      holes.clear();
      return *this;
    }
    std::vector<Ball> kept;
    for (const auto& h0 : holes) {
      Ball h = intersect(h0, outer);
      if (h.is_empty()) continue;
      if (outer.subset_of(h)) {
        outer = Ball::empty(outer.field);
        holes.clear();
        return *this;
      }
      kept.push_back(h);
    }
    std::vector<Ball> out;
    for (std::size_t i = 0; i < kept.size(); ++i) {
      bool inside = false;
      for (std::size_t j = 0; j < kept.size() && !inside; ++j) {
        if (i == j) continue;
        bool ij = kept[i].subset_of(kept[j]);
        bool ji = kept[j].subset_of(kept[i]);
        if (ij && (!ji || j < i)) inside = true;
      }
      if (!inside) out.push_back(kept[i]);
    }
    holes = std::move(out);
    return *this;
  }

  bool is_empty() const {
    SwissCheese s = *this;
    s.normalize();
    if (s.outer.is_empty()) return true;
    if (s.outer.is_whole() || s.outer.is_point()) return false;
    return detail_empty(s.outer, s.holes);
  }

  std::string str() const {
    std::string s = outer.str();
    for (const auto& h : holes) s += " \\ " + h.str();
    return s;
  }

 private:
  // outer is a closed ball, every hole a proper sub-ball or a point.
  static bool detail_empty(const Ball& outer, const std::vector<Ball>& holes) {
    std::vector<Ball> proper;
    for (const auto& h : holes) {
      if (h.is_point()) continue;
      if (outer.subset_of(h)) return true;
      proper.push_back(h);
    }
    if (proper.empty()) return false;
    // infinite residue field: finitely many proper holes never cover a ball
    if (!outer.field.is_padic()) return false;
    const Field& f = outer.field;
    FieldElem step = FieldElem::monomial(f, 1, outer.radius);
    for (std::int64_t d = 0; d < f.p; ++d) {
      Ball child = Ball::closed(outer.center + FieldElem::from_rational(f, d) * step, ValQ(outer.radius + 1));
      std::vector<Ball> sub;
      for (const auto& h : proper) {
        if (!h.disjoint(child)) sub.push_back(h);
      }
      if (!detail_empty(child, sub)) return false;
    }
    return true;
  }
};

inline SwissCheese cheese_intersect(const SwissCheese& a, const SwissCheese& b) {
  SwissCheese r{intersect(a.outer, b.outer), a.holes};
  r.holes.insert(r.holes.end(), b.holes.begin(), b.holes.end());
  r.normalize();
  return r;
}

}  // namespace hqe
